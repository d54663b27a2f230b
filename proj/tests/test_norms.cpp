#include "doctest.h"

#include <cmath>

#include "fblab/gaussian_norms.hpp"
#include "oracle_helpers.hpp"

using namespace fblab;

namespace {
GaussianGenSpec spec_of(GaussianKind kind, int n, int M, double P, std::uint64_t seed, double delta = 0.0) {
    GaussianGenSpec gs;
    gs.kind = kind;
    gs.n = n;
    gs.M = M;
    gs.power = P;
    gs.seed = seed;
    gs.delta_n = delta;
    return gs;
}
}  // namespace

TEST_CASE("generate: spherical rows sit on the power sphere exactly") {
    GenerateResult gen = generate_gaussian_code(spec_of(GaussianKind::spherical, 16, 32, 1.0, 5));
    for (const auto& w : gen.code.xwords) {
        double e = 0.0;
        for (double v : w) e += v * v;
        CHECK(e == doctest::Approx(16.0).epsilon(1e-9));
    }
    CHECK(gen.rescaled_count == 0);
}

TEST_CASE("generate: peaky first coordinate and power split") {
    double delta = 1.0 / std::sqrt(64.0);
    GenerateResult gen = generate_gaussian_code(spec_of(GaussianKind::peaky, 64, 16, 1.0, 6, delta));
    double expect_peak = std::sqrt(64.0 * delta * 1.0);
    CHECK(expect_peak == doctest::Approx(std::pow(64.0, 0.25)).epsilon(1e-12));
    for (const auto& w : gen.code.xwords) {
        CHECK(w[0] == doctest::Approx(expect_peak).epsilon(1e-12));
        double rest = 0.0;
        for (size_t j = 1; j < w.size(); ++j) rest += w[j] * w[j];
        CHECK(rest == doctest::Approx(63.0 * (1.0 - delta)).epsilon(1e-9));
        double total = rest + w[0] * w[0];
        CHECK(total <= 64.0 + 1e-9);
    }
    CHECK_THROWS_AS((void)generate_gaussian_code(spec_of(GaussianKind::peaky, 64, 16, 1.0, 6, 1.5)),
                    FblabError);
}

TEST_CASE("generate: iid rescale count near the chi-square tail oracle") {
    GenerateResult gen = generate_gaussian_code(spec_of(GaussianKind::iid_gaussian, 128, 1024, 1.0, 7));
    // P[chi^2_128 > 128] ~ 0.4906; 3 sigma of Binomial(1024, p)
    double p = 0.4906;
    double sigma = std::sqrt(1024.0 * p * (1.0 - p));
    CHECK(std::fabs(gen.rescaled_count - 1024.0 * p) <= 3.0 * sigma);
    for (const auto& w : gen.code.xwords) {
        double e = 0.0;
        for (double v : w) e += v * v;
        CHECK(e <= 128.0 + 1e-9);
    }
}

TEST_CASE("lq_norm and the interpolation identities on generated words") {
    GenerateResult gen = generate_gaussian_code(spec_of(GaussianKind::iid_gaussian, 32, 64, 1.0, 8));
    std::vector<double> qs = {1.0, 2.0, 4.0, kInf};
    for (const auto& w : gen.code.xwords) {
        double n1 = lq_norm(w, 1.0), n2 = lq_norm(w, 2.0), n4 = lq_norm(w, 4.0), ninf = lq_norm(w, kInf);
        // Holder ladder: lower q bounded by n^{1/q - 1/p} * higher norms
        CHECK(n1 <= std::pow(32.0, 1.0 - 0.5) * n2 + 1e-9);
        CHECK(n2 <= std::pow(32.0, 0.5 - 0.25) * n4 + 1e-9);
        // monotone: ||x||_q <= ||x||_p for q >= p
        CHECK(n4 <= n2 + 1e-12);
        CHECK(ninf <= n4 + 1e-12);
        // interpolation through the sup norm
        CHECK(n4 <= std::pow(ninf, 1.0 - 0.5) * std::pow(n2, 0.5) + 1e-9);
        CHECK(n2 * n2 <= 32.0 + 1e-9);  // power ball
    }
}

TEST_CASE("lq_profile: zero word, medians ordered, fraction queries") {
    Codebook c;
    c.n = 4;
    c.M = 2;
    c.awgn_alphabet = true;
    c.xwords = {{0.0, 0.0, 0.0, 0.0}, {1.0, -1.0, 1.0, -1.0}};
    std::vector<double> qs = {1.0, 2.0, kInf};
    LqProfile prof = lq_profile(c, qs);
    CHECK(prof.norms_sorted[0][0] == 0.0);
    CHECK(prof.norms_sorted[0][1] == doctest::Approx(4.0));
    CHECK(prof.fraction_exceeding(0, 3.0) == doctest::Approx(0.5));
    CHECK(prof.fraction_exceeding(2, 2.0) == 0.0);
}

TEST_CASE("mean ||x||_4^4 for iid rows tracks 3 n P^2") {
    GenerateResult gen = generate_gaussian_code(spec_of(GaussianKind::iid_gaussian, 128, 1024, 1.0, 9));
    std::vector<double> qs = {4.0};
    LqProfile prof = lq_profile(gen.code, qs);
    double sigma = prof.sample_sd_l4_pow4 / std::sqrt(1024.0);
    CHECK(std::fabs(prof.mean_l4_pow4 - 384.0) <= 3.0 * sigma + 6.0);  // small rescale bias allowance
}

TEST_CASE("scaling_exponent_fit: iid q=2 and q=4, peaky q=inf") {
    std::vector<int> grid = {64, 128, 256, 512, 1024};
    GaussianGenSpec base = spec_of(GaussianKind::iid_gaussian, 0, 256, 1.0, 10);

    ScalingFit q2 = scaling_exponent_fit(base, grid, 2.0);
    CHECK(std::fabs(q2.alpha_hat - 0.5) <= 0.05);

    ScalingFit q4 = scaling_exponent_fit(base, grid, 4.0);
    CHECK(std::fabs(q4.alpha_hat - 0.25) <= 0.05);

    GaussianGenSpec peaky = spec_of(GaussianKind::peaky, 0, 256, 1.0, 11, 0.1);
    ScalingFit qi = scaling_exponent_fit(peaky, grid, kInf, [](int n) { return 1.0 / std::sqrt(double(n)); });
    CHECK(std::fabs(qi.alpha_hat - 0.25) <= 0.05);

    std::vector<int> tiny = {8, 16};
    CHECK_THROWS_AS((void)scaling_exponent_fit(base, tiny, 2.0), FblabError);
}

TEST_CASE("linf_excess_tail: spherical zero fraction, peaky certainty, iid oracle") {
    AwgnSpec awgn{1.0};
    GenerateResult sph = generate_gaussian_code(spec_of(GaussianKind::spherical, 16, 64, 1.0, 12));
    std::vector<double> lam_full = {1.0};
    LinfTail sph_tail = linf_excess_tail(awgn, sph.code, lam_full, 0.1);
    CHECK(sph_tail.fractions[0] == 0.0);  // no coordinate carries all the energy

    double delta = 0.25;
    GenerateResult pk = generate_gaussian_code(spec_of(GaussianKind::peaky, 64, 64, 1.0, 13, delta));
    std::vector<double> lam_peak = {delta};
    LinfTail pk_tail = linf_excess_tail(awgn, pk.code, lam_peak, 0.1);
    CHECK(pk_tail.fractions[0] == doctest::Approx(1.0));

    GenerateResult iid = generate_gaussian_code(spec_of(GaussianKind::iid_gaussian, 128, 1024, 1.0, 14));
    std::vector<double> lam = {9.0 / 128.0};  // ||x||_inf >= 3
    LinfTail iid_tail = linf_excess_tail(awgn, iid.code, lam, 0.1);
    double p_hit = 1.0 - std::pow(1.0 - 0.0026998, 128.0);  // per-row max oracle
    double sigma = std::sqrt(p_hit * (1.0 - p_hit) / 1024.0);
    CHECK(std::fabs(iid_tail.fractions[0] - p_hit) <= 3.0 * sigma + 0.01);
    CHECK(iid_tail.bracket > 0.0);
}

TEST_CASE("quadratic_form_report: A = 0, A = I on spherical codes, random certified A") {
    AwgnSpec awgn{1.0};
    GenerateResult sph = generate_gaussian_code(spec_of(GaussianKind::spherical, 32, 128, 1.0, 15));

    std::vector<std::vector<double>> zero(32, std::vector<double>(32, 0.0));
    QuadraticFormReport rz = quadratic_form_report(awgn, sph.code, zero, 0.1);
    CHECK(rz.bound.lhs == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(rz.bound.passed());

    std::vector<std::vector<double>> eye(32, std::vector<double>(32, 0.0));
    for (int i = 0; i < 32; ++i) eye[size_t(i)][size_t(i)] = 1.0;
    QuadraticFormReport ri = quadratic_form_report(awgn, sph.code, eye, 0.1);
    CHECK(ri.bound.lhs == doctest::Approx(0.0).epsilon(1e-9));  // spherical: sum E X_j^2 = nP exactly
    CHECK(ri.refinement.lhs == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(ri.bound.passed());
    CHECK(ri.refinement.passed());

    // random certified A on an iid code
    GenerateResult iid = generate_gaussian_code(spec_of(GaussianKind::iid_gaussian, 32, 256, 1.0, 16));
    CounterRng rng(17);
    std::vector<std::vector<double>> a(32, std::vector<double>(32, 0.0));
    for (int i = 0; i < 32; ++i)
        for (int j = 0; j <= i; ++j) {
            double v = 2.0 * rng.uniform(1, std::uint64_t(i) * 64 + std::uint64_t(j)) - 1.0;
            a[size_t(i)][size_t(j)] = a[size_t(j)][size_t(i)] = v / 32.0;  // scaled into [-I, I]
        }
    QuadraticFormReport ra = quadratic_form_report(awgn, iid.code, a, 0.1);
    CHECK(ra.a_eig_min >= -1.0 - 1e-9);
    CHECK(ra.a_eig_max <= 1.0 + 1e-9);
    CHECK(ra.bound.passed());

    // spectral certification failure
    std::vector<std::vector<double>> big(32, std::vector<double>(32, 0.0));
    for (int i = 0; i < 32; ++i) big[size_t(i)][size_t(i)] = 2.0;
    CHECK_THROWS_AS((void)quadratic_form_report(awgn, sph.code, big, 0.1), FblabError);
}

TEST_CASE("rotation invariance of l2 and the A = I report") {
    AwgnSpec awgn{1.0};
    GenerateResult sph = generate_gaussian_code(spec_of(GaussianKind::spherical, 16, 32, 1.0, 18));
    Codebook rot = apply_random_rotation(sph.code, 99);
    for (int i = 0; i < 32; ++i) {
        CHECK(lq_norm(sph.code.xwords[size_t(i)], 2.0) ==
              doctest::Approx(lq_norm(rot.xwords[size_t(i)], 2.0)).epsilon(1e-9));
    }
    std::vector<std::vector<double>> eye(16, std::vector<double>(16, 0.0));
    for (int i = 0; i < 16; ++i) eye[size_t(i)][size_t(i)] = 1.0;
    QuadraticFormReport r1 = quadratic_form_report(awgn, sph.code, eye, 0.1);
    QuadraticFormReport r2 = quadratic_form_report(awgn, rot, eye, 0.1);
    CHECK(r1.bound.lhs == doctest::Approx(r2.bound.lhs).epsilon(1e-8));
}

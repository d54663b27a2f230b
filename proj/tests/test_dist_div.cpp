#include "doctest.h"

#include <cmath>

#include "fblab/dist.hpp"
#include "fblab/divergence_checks.hpp"
#include "fblab/transport.hpp"
#include "oracle_helpers.hpp"

using namespace fblab;

namespace {
const Units kBits = Units::bits();
}

TEST_CASE("kl matches the two-term hand sum and conventions") {
    std::vector<double> p = {0.5, 0.5}, q = {0.25, 0.75};
    CHECK(kl_nats(p, q) * kBits.scale() == doctest::Approx(0.20751874963942185).epsilon(1e-12));
    CHECK(kl_nats(p, p) == 0.0);
    std::vector<double> a = {1.0, 0.0}, b = {0.0, 1.0};
    CHECK(std::isinf(kl_nats(a, b)));
    CHECK(kl_nats(b, b) == 0.0);
    std::vector<double> short_q = {1.0};
    CHECK_THROWS_AS((void)kl_nats(std::span<const double>(p), std::span<const double>(short_q)), FblabError);
}

TEST_CASE("binary_kl examples") {
    CHECK(binary_kl_nats(0.5, 0.25) * kBits.scale() == doctest::Approx(0.20751874963942185).epsilon(1e-12));
    CHECK(binary_kl_nats(0.3, 0.3) == 0.0);
    CHECK(binary_kl_nats(1.0, 0.5) * kBits.scale() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::isinf(binary_kl_nats(0.5, 0.0)));
    CHECK(std::isinf(binary_kl_nats(0.5, 1.0)));
    CHECK(binary_kl_nats(1.0, 1.0) == 0.0);
}

TEST_CASE("tv basics and metric properties on random triples") {
    std::vector<double> p = {0.5, 0.5}, q = {0.25, 0.75};
    CHECK(tv_distance(p, q) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(tv_distance(p, p) == 0.0);
    std::vector<double> a = {1.0, 0.0}, b = {0.0, 1.0};
    CHECK(tv_distance(a, b) == doctest::Approx(1.0));

    CounterRng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        auto x = oracle::random_dist(rng, 1, std::uint64_t(trial), 5);
        auto y = oracle::random_dist(rng, 2, std::uint64_t(trial), 5);
        auto z = oracle::random_dist(rng, 3, std::uint64_t(trial), 5);
        double dxy = tv_distance(x, y), dyx = tv_distance(y, x);
        CHECK(dxy == doctest::Approx(dyx).epsilon(1e-15));
        CHECK(tv_distance(x, z) <= dxy + tv_distance(y, z) + 1e-12);
        CHECK(dxy >= 0.0);
        CHECK(dxy <= 1.0);
    }
}

TEST_CASE("pinsker_check: worked example and randomized sweep") {
    std::vector<double> p = {0.5, 0.5}, q = {0.9, 0.1};
    BoundReport rep = pinsker_check(p, q, kBits);
    CHECK(rep.lhs == doctest::Approx(0.16).epsilon(1e-12));
    CHECK(rep.rhs == doctest::Approx(0.25541281188299536).epsilon(1e-9));
    CHECK(rep.passed());

    BoundReport same = pinsker_check(p, p, kBits);
    CHECK(same.lhs == 0.0);
    CHECK(same.rhs == 0.0);
    CHECK(same.passed());

    CounterRng rng(11);
    for (int trial = 0; trial < 1000; ++trial) {
        auto a = oracle::random_dist(rng, 4, std::uint64_t(trial), 5);
        auto b = oracle::random_dist(rng, 5, std::uint64_t(trial), 5);
        CHECK(pinsker_check(a, b, kBits).passed());
    }
}

TEST_CASE("conditional_kl_identity collapses and closed forms") {
    // Q equal to the induced output: D_marg = 0
    std::vector<std::vector<double>> w = {{0.89, 0.11}, {0.11, 0.89}};
    std::vector<double> px = {0.5, 0.5}, q = {0.5, 0.5};
    ConditionalKl res = conditional_kl_identity(w, px, q, kBits);
    CHECK(res.d_marg == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(res.mutual == doctest::Approx(res.d_cond).epsilon(1e-12));
    // symmetric channel with caod: I = C
    CHECK(res.mutual == doctest::Approx(0.500084041835472).epsilon(1e-9));
    CHECK(res.direct_mi == doctest::Approx(res.mutual).epsilon(1e-9));

    // deterministic kernel, uniform inputs over k letters, uniform Q: I = log k
    std::vector<std::vector<double>> det = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    std::vector<double> u3 = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    ConditionalKl det_res = conditional_kl_identity(det, u3, u3, kBits);
    CHECK(det_res.mutual == doctest::Approx(std::log2(3.0)).epsilon(1e-12));
    CHECK(std::fabs(det_res.direct_mi - det_res.mutual) < 1e-9);
}

TEST_CASE("donsker_varadhan_gap: optimizer tightness, constants, sweep") {
    std::vector<double> p = {0.2, 0.3, 0.5}, q = {0.5, 0.25, 0.25};
    std::vector<double> gopt(3);
    for (int i = 0; i < 3; ++i) gopt[size_t(i)] = std::log2(p[size_t(i)] / q[size_t(i)]);
    BoundReport tight = donsker_varadhan_gap(p, q, gopt, kBits);
    CHECK(tight.slack == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(tight.passed());

    std::vector<double> gconst = {3.0, 3.0, 3.0};
    BoundReport flat = donsker_varadhan_gap(p, q, gconst, kBits);
    CHECK(flat.lhs == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(flat.passed());

    CounterRng rng(13);
    for (int trial = 0; trial < 1000; ++trial) {
        auto a = oracle::random_dist(rng, 6, std::uint64_t(trial), 4, 1e-3);
        auto b = oracle::random_dist(rng, 7, std::uint64_t(trial), 4, 1e-3);
        std::vector<double> g(4);
        for (size_t i = 0; i < 4; ++i) g[i] = 4.0 * rng.uniform(8, std::uint64_t(trial) * 8 + i) - 2.0;
        CHECK(donsker_varadhan_gap(a, b, g, kBits).slack >= -1e-9);
    }
}

TEST_CASE("ratio_mean_lemma_check: degenerate, hand value, sweep") {
    std::vector<double> one = {1.0}, pr1 = {1.0};
    BoundReport deg = ratio_mean_lemma_check(one, pr1);
    CHECK(deg.lhs == 0.0);
    CHECK(deg.rhs == 0.0);
    CHECK(deg.passed());

    std::vector<double> v = {0.5, 1.5}, pr = {0.5, 0.5};
    BoundReport two = ratio_mean_lemma_check(v, pr);
    CHECK(two.lhs == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(two.rhs == doctest::Approx(0.5363600213026516).epsilon(1e-12));
    CHECK(two.passed());

    std::vector<double> over = {2.0, 1.5}, pro = {0.5, 0.5};
    CHECK_THROWS_AS((void)ratio_mean_lemma_check(over, pro), FblabError);

    CounterRng rng(17);
    for (int trial = 0; trial < 1000; ++trial) {
        size_t k = 2 + rng.bits(9, std::uint64_t(trial)) % 5;
        std::vector<double> vals(k), probs = oracle::random_dist(rng, 10, std::uint64_t(trial), k);
        double mean = 0.0;
        for (size_t i = 0; i < k; ++i) {
            vals[i] = 0.02 + 3.0 * rng.uniform(11, std::uint64_t(trial) * 8 + i);
            mean += probs[i] * vals[i];
        }
        if (mean > 1.0)
            for (double& x : vals) x /= mean;
        CHECK(ratio_mean_lemma_check(vals, probs).passed());
    }
}

TEST_CASE("FiniteDist validation") {
    FiniteDist ok{{0.5, 0.5}};
    CHECK_NOTHROW(ok.validate());
    FiniteDist neg{{1.5, -0.5}};
    CHECK_THROWS_AS(neg.validate(), FblabError);
    FiniteDist off{{0.5, 0.49}};
    CHECK_THROWS_AS(off.validate(), FblabError);
}

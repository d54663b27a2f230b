#include "fblab/gaussian_norms.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace fblab {

GenerateResult generate_gaussian_code(const GaussianGenSpec& spec) {
    if (spec.n < 1 || spec.M < 1) throw FblabError("generate: need n >= 1, M >= 1");
    if (!(spec.power > 0.0)) throw FblabError("generate: power must be positive");
    if (spec.kind == GaussianKind::peaky && !(spec.delta_n > 0.0 && spec.delta_n < 1.0))
        throw FblabError("generate: peaky requires delta_n in (0,1)");

    GenerateResult res;
    Codebook& c = res.code;
    c.n = spec.n;
    c.M = spec.M;
    c.awgn_alphabet = true;
    c.criterion = ErrorCriterion::max_error;
    c.xwords.assign(size_t(spec.M), std::vector<double>(size_t(spec.n), 0.0));

    CounterRng rng(spec.seed);
    const double P = spec.power;
    const double sd = std::sqrt(P);
    for (int i = 0; i < spec.M; ++i) {
        auto& row = c.xwords[size_t(i)];
        switch (spec.kind) {
            case GaussianKind::iid_gaussian: {
                double e = 0.0;
                for (int j = 0; j < spec.n; ++j) {
                    row[size_t(j)] = sd * rng.gaussian(std::uint64_t(i), std::uint64_t(j));
                    e += row[size_t(j)] * row[size_t(j)];
                }
                double cap = spec.n * P;
                if (e > cap) {
                    double f = std::sqrt(cap / e);
                    for (double& v : row) v *= f;
                    ++res.rescaled_count;
                }
                break;
            }
            case GaussianKind::spherical: {
                double e = 0.0;
                for (int j = 0; j < spec.n; ++j) {
                    row[size_t(j)] = rng.gaussian(std::uint64_t(i), std::uint64_t(j));
                    e += row[size_t(j)] * row[size_t(j)];
                }
                double f = std::sqrt(spec.n * P / e);
                for (double& v : row) v *= f;
                break;
            }
            case GaussianKind::peaky: {
                row[0] = std::sqrt(spec.n * spec.delta_n * P);
                if (spec.n > 1) {
                    double e = 0.0;
                    for (int j = 1; j < spec.n; ++j) {
                        row[size_t(j)] = rng.gaussian(std::uint64_t(i), std::uint64_t(j));
                        e += row[size_t(j)] * row[size_t(j)];
                    }
                    double radius2 = (spec.n - 1) * (1.0 - spec.delta_n) * P;
                    double f = std::sqrt(radius2 / e);
                    for (int j = 1; j < spec.n; ++j) row[size_t(j)] *= f;
                }
                break;
            }
        }
    }
    return res;
}

QuadraticFormReport quadratic_form_report(const AwgnSpec& awgn, const Codebook& code,
                                          const std::vector<std::vector<double>>& a_matrix, double eps) {
    const int n = code.n, M = code.M;
    const double P = awgn.power;
    if (!code.awgn_alphabet) throw FblabError("quadratic_form_report: AWGN codebook required");
    if (int(a_matrix.size()) != n) throw FblabError("quadratic_form_report: A dimension mismatch");
    if (!(eps > 0.0 && eps < 1.0)) throw FblabError("quadratic_form_report: eps must lie in (0,1)");

    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i) {
        if (int(a_matrix[size_t(i)].size()) != n) throw FblabError("quadratic_form_report: A not square");
        for (int j = 0; j < n; ++j) A(i, j) = a_matrix[size_t(i)][size_t(j)];
    }
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-9)
        throw FblabError("quadratic_form_report: A must be symmetric");

    QuadraticFormReport out;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
    out.a_eig_min = es.eigenvalues().minCoeff();
    out.a_eig_max = es.eigenvalues().maxCoeff();
    if (out.a_eig_min < -1.0 - 1e-9 || out.a_eig_max > 1.0 + 1e-9)
        throw FblabError("quadratic_form_report: spectrum of A outside [-1, 1]");

    Eigen::MatrixXd X(M, n);
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < n; ++j) X(i, j) = code.xwords[size_t(i)][size_t(j)];
    Eigen::MatrixXd sigma = X.transpose() * X / double(M);  // empirical second moment
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es2(sigma, Eigen::EigenvaluesOnly);
    out.sigma_eig_min = es2.eigenvalues().minCoeff();
    out.sigma_eig_max = es2.eigenvalues().maxCoeff();

    out.trace_a = A.trace();
    out.quad_mean = (X * A).cwiseProduct(X).sum() / double(M);

    double c_nats = 0.5 * std::log1p(P);
    double b = std::sqrt(2.0 * (2.25 + 3.0 * P) / (1.0 - eps)) + std::log(2.0 / (1.0 - eps));
    out.b_const = b;
    double budget = n * c_nats - std::log(double(M)) + b * std::sqrt(double(n));

    BoundReport rep;
    rep.name = "quadratic_form";
    rep.relation = "lhs<=rhs";
    rep.units = "nats";
    rep.lhs = std::fabs(out.quad_mean - P * out.trace_a);
    rep.rhs = 2.0 * (1.0 + P) * std::sqrt(double(n)) * std::sqrt(std::max(0.0, budget));
    rep.add_constant("eps", eps);
    rep.add_constant("b", b);
    rep.add_constant("budget", budget);
    rep.add_constant("trace_A", out.trace_a);
    rep.finish_exact();
    out.bound = rep;

    BoundReport ref;
    ref.name = "quadratic_form_identity_refinement";
    ref.relation = "lhs<=rhs";
    ref.units = "nats";
    ref.lhs = std::fabs(sigma.trace() - double(n) * P);
    ref.rhs = 2.0 * (1.0 + P) * std::max(0.0, budget);
    ref.add_constant("trace_sigma", sigma.trace());
    ref.add_constant("budget", budget);
    ref.finish_exact();
    out.refinement = ref;
    return out;
}

double lq_norm(std::span<const double> x, double q) {
    if (std::isinf(q)) {
        double m = 0.0;
        for (double v : x) m = std::max(m, std::fabs(v));
        return m;
    }
    if (!(q >= 1.0)) throw FblabError("lq_norm: q must be in [1, inf]");
    double s = 0.0;
    for (double v : x) s += std::pow(std::fabs(v), q);
    return std::pow(s, 1.0 / q);
}

LqProfile lq_profile(const Codebook& code, std::span<const double> qs) {
    if (!code.awgn_alphabet) throw FblabError("lq_profile: AWGN codebook required");
    LqProfile prof;
    prof.qs.assign(qs.begin(), qs.end());
    for (double q : qs) {
        std::vector<double> norms;
        norms.reserve(size_t(code.M));
        for (const auto& w : code.xwords) norms.push_back(lq_norm(w, q));
        std::sort(norms.begin(), norms.end());
        size_t m = norms.size();
        prof.median.push_back(m % 2 ? norms[m / 2] : 0.5 * (norms[m / 2 - 1] + norms[m / 2]));
        prof.upper_half_quantile.push_back(norms[std::min(m - 1, (3 * m) / 4)]);
        prof.norms_sorted.push_back(std::move(norms));
    }
    double s = 0.0, s2 = 0.0;
    for (const auto& w : code.xwords) {
        double v = 0.0;
        for (double x : w) v += x * x * x * x;
        s += v;
        s2 += v * v;
    }
    prof.mean_l4_pow4 = s / code.M;
    prof.sample_sd_l4_pow4 =
        code.M > 1 ? std::sqrt(std::max(0.0, (s2 / code.M - prof.mean_l4_pow4 * prof.mean_l4_pow4) *
                                                 code.M / (code.M - 1.0)))
                   : 0.0;
    return prof;
}

double LqProfile::fraction_exceeding(size_t q_index, double threshold) const {
    const auto& v = norms_sorted.at(q_index);
    auto it = std::lower_bound(v.begin(), v.end(), threshold);
    return double(v.end() - it) / double(v.size());
}

namespace {
struct OlsFit {
    double slope = 0.0;
    double half = 0.0;
};
OlsFit ols_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    size_t k = xs.size();
    double xm = 0.0, ym = 0.0;
    for (size_t i = 0; i < k; ++i) {
        xm += xs[i] / double(k);
        ym += ys[i] / double(k);
    }
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < k; ++i) {
        sxx += (xs[i] - xm) * (xs[i] - xm);
        sxy += (xs[i] - xm) * (ys[i] - ym);
    }
    OlsFit fit;
    if (sxx <= 0.0) throw FblabError("scaling fit: degenerate abscissae");
    fit.slope = sxy / sxx;
    double rss = 0.0;
    for (size_t i = 0; i < k; ++i) {
        double r = ys[i] - ym - fit.slope * (xs[i] - xm);
        rss += r * r;
    }
    double se = k > 2 ? std::sqrt(rss / double(k - 2) / sxx) : 0.0;
    fit.half = 1.96 * se;
    return fit;
}
}  // namespace

ScalingFit scaling_exponent_fit(const GaussianGenSpec& base, std::span<const int> n_grid, double q,
                                const std::function<double(int)>& delta_of_n) {
    if (n_grid.size() < 5) throw FblabError("scaling_exponent_fit: need at least 5 grid points");
    ScalingFit fit;
    std::vector<double> lx, ly, llx;
    for (int n : n_grid) {
        GaussianGenSpec spec = base;
        spec.n = n;
        if (delta_of_n) spec.delta_n = delta_of_n(n);
        GenerateResult gen = generate_gaussian_code(spec);
        std::vector<double> qs = {q};
        LqProfile prof = lq_profile(gen.code, qs);
        fit.n_grid.push_back(double(n));
        fit.medians.push_back(prof.median[0]);
        lx.push_back(std::log(double(n)));
        llx.push_back(std::log(std::log(double(n))));
        ly.push_back(std::log(prof.median[0]));
    }
    OlsFit main = ols_slope(lx, ly);
    fit.alpha_hat = main.slope;
    fit.ci_half = main.half;
    if (std::isinf(q)) {
        OlsFit ll = ols_slope(llx, ly);
        fit.alpha_hat_loglog = ll.slope;
        fit.ci_half_loglog = ll.half;
    }
    return fit;
}

LinfTail linf_excess_tail(const AwgnSpec& awgn, const Codebook& code, std::span<const double> lambdas,
                          double eps, Units units) {
    LinfTail out;
    const int n = code.n, M = code.M;
    const double P = awgn.power;
    for (double lam : lambdas) {
        if (lam < 0.0 || lam > P) throw FblabError("linf_excess_tail: lambda outside [0, P]");
        double thresh = std::sqrt(lam * n);
        int cnt = 0;
        for (const auto& w : code.xwords)
            if (lq_norm(w, kInf) >= thresh) ++cnt;
        out.lambdas.push_back(lam);
        out.fractions.push_back(double(cnt) / M);
    }
    auto [c, v] = awgn_capacity_dispersion(awgn, units);
    double bracket = n * c - std::sqrt(double(n) * v) * inverse_normal_ccdf(eps) +
                     (2.0 * std::log(double(n)) - std::log(double(M) / 2.0)) * units.scale();
    out.bracket = bracket;
    out.note = "bracket omits the unspecified additive log b; formula-only";
    return out;
}

Codebook apply_random_rotation(const Codebook& code, std::uint64_t seed) {
    if (!code.awgn_alphabet) throw FblabError("apply_random_rotation: AWGN codebook required");
    const int n = code.n;
    CounterRng rng(seed);
    Eigen::MatrixXd G(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            G(i, j) = rng.gaussian(std::uint64_t(i) + 101, std::uint64_t(j));
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
    Eigen::MatrixXd Q = qr.householderQ();
    Codebook rotated = code;
    for (int i = 0; i < code.M; ++i) {
        Eigen::VectorXd x(n);
        for (int j = 0; j < n; ++j) x(j) = code.xwords[size_t(i)][size_t(j)];
        Eigen::VectorXd y = Q * x;
        for (int j = 0; j < n; ++j) rotated.xwords[size_t(i)][size_t(j)] = y(j);
    }
    return rotated;
}

}  // namespace fblab

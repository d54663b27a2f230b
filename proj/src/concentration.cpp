#include "fblab/concentration.hpp"

#include <algorithm>
#include <cmath>

namespace fblab {

double lipschitz_constant(std::span<const double> f_outcomes, const OutcomeSpace& space,
                          std::uint64_t guard) {
    std::uint64_t sz = space.size();
    if (sz > guard) throw FblabError("lipschitz_constant: enumeration guard exceeded");
    if (f_outcomes.size() != sz) throw FblabError("lipschitz_constant: table size mismatch");
    double lip = 0.0;
    std::uint64_t stride = 1;
    for (int j = 0; j < space.n; ++j) {
        for (std::uint64_t y = 0; y < sz; ++y) {
            int dj = int((y / stride) % std::uint64_t(space.ybase));
            double fy = f_outcomes[size_t(y)];
            for (int b = dj + 1; b < space.ybase; ++b) {
                std::uint64_t y2 = y + stride * std::uint64_t(b - dj);
                lip = std::max(lip, std::fabs(fy - f_outcomes[size_t(y2)]));
            }
        }
        stride *= std::uint64_t(space.ybase);
    }
    return lip;
}

ConcentrationCert make_cert_azuma(int n, double lip) {
    ConcentrationCert c;
    c.basis = CertBasis::azuma;
    c.measure_kind = MeasureKind::product_discrete;
    c.b = 1.0;
    c.c = 0.5 * double(n) * lip * lip;
    return c;
}

ConcentrationCert make_cert_gaussian_lipschitz(double power, double declared_lip) {
    ConcentrationCert c;
    c.basis = CertBasis::gaussian_lipschitz;
    c.measure_kind = MeasureKind::gaussian;
    c.b = 1.0;
    c.c = 0.5 * (1.0 + power) * declared_lip * declared_lip;
    return c;
}

ConcentrationCert make_cert_bounded(double centered_sup, double c) {
    if (!(c > 0.0)) throw FblabError("make_cert_bounded: c must be positive");
    ConcentrationCert cert;
    cert.basis = CertBasis::bounded;
    cert.b = std::exp(centered_sup * centered_sup / (4.0 * c));
    cert.c = c;
    return cert;
}

namespace {
std::vector<double> mgf_grid(std::span<const double> f_outcomes, std::span<const double> mu) {
    double fbar = 0.0;
    for (size_t y = 0; y < mu.size(); ++y) fbar += mu[y] * f_outcomes[y];
    double dev = 0.0;
    for (size_t y = 0; y < mu.size(); ++y)
        if (mu[y] > 0.0) dev = std::max(dev, std::fabs(f_outcomes[y] - fbar));
    double tmax = 16.0;
    if (dev > 0.0) tmax = std::min(tmax, 650.0 / dev);
    std::vector<double> grid;
    double t = tmax;
    for (int i = 0; i < 17; ++i) {
        grid.push_back(t);
        grid.push_back(-t);
        t /= 1.4142135623730951;
    }
    std::sort(grid.begin(), grid.end());
    return grid;
}

double log_mgf_centered(std::span<const double> f_outcomes, std::span<const double> mu, double t) {
    double fbar = 0.0;
    for (size_t y = 0; y < mu.size(); ++y) fbar += mu[y] * f_outcomes[y];
    double mx = -kInf;
    for (size_t y = 0; y < mu.size(); ++y)
        if (mu[y] > 0.0) mx = std::max(mx, t * (f_outcomes[y] - fbar));
    double acc = 0.0;
    for (size_t y = 0; y < mu.size(); ++y)
        if (mu[y] > 0.0) acc += mu[y] * std::exp(t * (f_outcomes[y] - fbar) - mx);
    return mx + std::log(acc);
}
}  // namespace

ConcentrationCert make_cert_empirical(std::span<const double> f_outcomes, std::span<const double> mu,
                                      double c) {
    if (!(c > 0.0)) throw FblabError("make_cert_empirical: c must be positive");
    ConcentrationCert cert;
    cert.basis = CertBasis::empirical_mgf;
    cert.c = c;
    cert.t_grid = mgf_grid(f_outcomes, mu);
    double ln_b = 0.0;
    for (double t : cert.t_grid)
        ln_b = std::max(ln_b, log_mgf_centered(f_outcomes, mu, t) - c * t * t);
    cert.b = std::exp(ln_b);
    cert.max_mgf_excess = 0.0;
    return cert;
}

double validate_cert(const ConcentrationCert& cert, std::span<const double> f_outcomes,
                     std::span<const double> mu) {
    std::vector<double> grid = cert.t_grid.empty() ? mgf_grid(f_outcomes, mu) : cert.t_grid;
    double excess = -kInf;
    for (double t : grid)
        excess = std::max(excess, log_mgf_centered(f_outcomes, mu, t) - std::log(cert.b) - cert.c * t * t);
    return excess;
}

BoundReport expectation_transfer(std::span<const double> f_outcomes, std::span<const double> p_code,
                                 std::span<const double> caod_prod, const ConcentrationCert& cert) {
    if (f_outcomes.size() != p_code.size() || p_code.size() != caod_prod.size())
        throw FblabError("expectation_transfer: table sizes mismatch");
    double e_code = 0.0, e_caod = 0.0;
    for (size_t y = 0; y < p_code.size(); ++y) {
        e_code += p_code[y] * f_outcomes[y];
        e_caod += caod_prod[y] * f_outcomes[y];
    }
    double d = kl_nats(p_code, caod_prod);
    BoundReport rep;
    rep.name = "expectation_transfer";
    rep.relation = "lhs<=rhs";
    rep.units = "nats";
    rep.lhs = std::fabs(e_code - e_caod);
    rep.rhs = 2.0 * std::sqrt(std::max(0.0, cert.c * d + cert.c * std::log(cert.b)));
    rep.add_constant("E_code_F", e_code);
    rep.add_constant("E_caod_F", e_caod);
    rep.add_constant("D", d);
    rep.add_constant("b", cert.b);
    rep.add_constant("c", cert.c);
    rep.finish_exact();
    return rep;
}

TailTransfer tail_transfer(std::span<const double> f_outcomes, const DmcSpec& dmc, const Codebook& code,
                           const CapacitySolution& sol, const ConcentrationCert& cert,
                           std::span<const double> t_grid, std::uint64_t guard, const Parallel& par) {
    OutcomeSpace sp{code.n, dmc.output_size};
    std::uint64_t sz = sp.size();
    if (sz > guard) throw FblabError("tail_transfer: enumeration guard exceeded");
    if (f_outcomes.size() != sz) throw FblabError("tail_transfer: table size mismatch");

    DecoderTable dec = ml_decode(dmc, code, guard, par);
    auto [eps_avg, eps_max] = exact_error(dmc, code, dec, par);
    (void)eps_avg;
    double eps = eps_max;
    BoundConstants bc = theorem4_chain_constants(dmc, code.n, eps, sol.units);
    if (!bc.finite() || eps >= 1.0) {
        TailTransfer out;
        BoundReport rep;
        rep.name = "tail_transfer";
        rep.verdict = Verdict::inconclusive;
        rep.note = "explicit chain unavailable (C1 = inf or eps = 1)";
        out.variance = rep;
        return out;
    }
    double s_m_nats = bc.S_m / sol.units.scale2();
    double a_sqrt_n_nats = std::sqrt(2.0 * s_m_nats / (1.0 - eps)) + std::log(2.0 / (1.0 - eps));
    double nc_nats = code.n * sol.C / sol.units.scale();
    double log_m = std::log(double(code.M));
    double exponent_base = nc_nats - log_m + a_sqrt_n_nats;

    std::vector<double> py = induced_output(dmc, code, guard, par);
    std::vector<double> qn = caod_product(sol, code.n, dmc.output_size, guard);
    double e_caod = 0.0;
    for (std::uint64_t y = 0; y < sz; ++y) e_caod += qn[size_t(y)] * f_outcomes[size_t(y)];

    TailTransfer out;
    for (double t : t_grid) {
        double tail = 0.0;
        for (std::uint64_t y = 0; y < sz; ++y)
            if (std::fabs(f_outcomes[size_t(y)] - e_caod) > t) tail += py[size_t(y)];
        BoundReport rep;
        rep.name = "tail_transfer";
        rep.relation = "lhs<=rhs";
        rep.units = "nats";
        rep.lhs = tail;
        rep.rhs = 3.0 * cert.b * std::exp(exponent_base - t * t / (16.0 * cert.c));
        rep.add_constant("t", t);
        rep.add_constant("eps", eps);
        rep.add_constant("a_sqrt_n", a_sqrt_n_nats);
        rep.add_constant("b", cert.b);
        rep.add_constant("c", cert.c);
        rep.finish_exact();
        out.tails.push_back(std::move(rep));
    }

    double mean = 0.0, m2 = 0.0;
    for (std::uint64_t y = 0; y < sz; ++y) {
        mean += py[size_t(y)] * f_outcomes[size_t(y)];
        m2 += py[size_t(y)] * f_outcomes[size_t(y)] * f_outcomes[size_t(y)];
    }
    BoundReport var_rep;
    var_rep.name = "variance_transfer";
    var_rep.relation = "lhs<=rhs";
    var_rep.units = "nats";
    var_rep.lhs = std::max(0.0, m2 - mean * mean);
    var_rep.rhs = 16.0 * cert.c * (exponent_base + std::log(6.0 * cert.b * 2.718281828459045235));
    var_rep.add_constant("eps", eps);
    var_rep.add_constant("a_sqrt_n", a_sqrt_n_nats);
    var_rep.add_constant("b", cert.b);
    var_rep.add_constant("c", cert.c);
    var_rep.finish_exact();
    out.variance = var_rep;
    return out;
}

bool TailTransfer::all_pass() const {
    for (const auto& r : tails)
        if (!r.passed()) return false;
    return variance.passed();
}

BoundReport cramer_transfer(std::span<const double> f_letter, double theta, const DmcSpec& dmc,
                            const Codebook& code, const CapacitySolution& sol, std::uint64_t guard,
                            const Parallel& par) {
    if (!(theta > 0.0)) throw FblabError("cramer_transfer: theta must be positive");
    if (int(f_letter.size()) != dmc.output_size) throw FblabError("cramer_transfer: table size mismatch");
    const int n = code.n;
    BoundReport rep;
    rep.name = "cramer_transfer";
    rep.relation = "lhs<=rhs";
    rep.units = "nats";
    if (double(n) < 16.0 / std::pow(theta, 4.0)) {
        rep.verdict = Verdict::inconclusive;
        rep.note = "n below 16/theta^4";
        rep.slack = kInf;
        return rep;
    }

    // exact single-letter marginals of the induced output
    std::vector<double> marg(size_t(dmc.output_size), 0.0);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < code.M; ++i) {
            int x = code.words[size_t(i)][size_t(j)];
            for (int y = 0; y < dmc.output_size; ++y)
                marg[size_t(y)] += dmc.W[size_t(x)][size_t(y)] / double(n * code.M);
        }
    double lhs = 0.0;
    for (int y = 0; y < dmc.output_size; ++y) lhs += marg[size_t(y)] * f_letter[size_t(y)];

    double e_star = 0.0, m1 = 0.0, m2 = 0.0;
    for (int y = 0; y < dmc.output_size; ++y) {
        double q = sol.caod[size_t(y)];
        e_star += q * f_letter[size_t(y)];
        m1 += q * std::exp(theta * f_letter[size_t(y)]);
        m2 += q * f_letter[size_t(y)] * f_letter[size_t(y)];
    }
    double b = 0.5 * (m2 + 4.0 * std::exp(-2.0) * m1 / (theta * theta));

    std::vector<double> py = induced_output(dmc, code, guard, par);
    std::vector<double> qn = caod_product(sol, n, dmc.output_size, guard);
    double d = kl_nats(std::span<const double>(py), std::span<const double>(qn));

    rep.lhs = lhs;
    rep.rhs = e_star + d / std::pow(double(n), 0.75) + b / std::pow(double(n), 0.25);
    rep.add_constant("E_star_f", e_star);
    rep.add_constant("m1", m1);
    rep.add_constant("m2", m2);
    rep.add_constant("b", b);
    rep.add_constant("D", d);
    rep.add_constant("theta", theta);
    rep.finish_exact();
    return rep;
}

std::vector<double> hamming_weight_table(const OutcomeSpace& space) {
    std::uint64_t sz = space.size();
    std::vector<double> f(size_t(sz), 0.0);
    std::vector<int> dig(size_t(space.n));
    for (std::uint64_t y = 0; y < sz; ++y) {
        space.digits(y, dig);
        int w = 0;
        for (int d : dig)
            if (d != 0) ++w;
        f[size_t(y)] = double(w);
    }
    return f;
}

std::vector<double> per_letter_sum_table(const OutcomeSpace& space, std::span<const double> f_letter,
                                         double normalizer) {
    std::uint64_t sz = space.size();
    std::vector<double> f(size_t(sz), 0.0);
    std::vector<int> dig(size_t(space.n));
    for (std::uint64_t y = 0; y < sz; ++y) {
        space.digits(y, dig);
        double s = 0.0;
        for (int d : dig) s += f_letter[size_t(d)];
        f[size_t(y)] = s * normalizer;
    }
    return f;
}

}  // namespace fblab

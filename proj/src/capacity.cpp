#include "fblab/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fblab {

namespace {

struct BaState {
    std::vector<double> p;      // input distribution
    std::vector<double> q;      // induced output distribution
    std::vector<double> d;      // D(W_x || q), nats
    double lower = 0.0;         // sum_x p(x) d(x)
    double upper = 0.0;         // max_x d(x) (minus lambda-adjusted for constrained)
};

void ba_step(const DmcSpec& dmc, double lambda, BaState& st) {
    const int nx = dmc.input_size, ny = dmc.output_size;
    st.q.assign(size_t(ny), 0.0);
    for (int x = 0; x < nx; ++x) {
        if (st.p[size_t(x)] <= 0.0) continue;
        for (int y = 0; y < ny; ++y) st.q[size_t(y)] += st.p[size_t(x)] * dmc.W[size_t(x)][size_t(y)];
    }
    st.d.resize(size_t(nx));
    for (int x = 0; x < nx; ++x) st.d[size_t(x)] = dmc_d_of_input_nats(dmc, st.q, x);

    st.lower = 0.0;
    st.upper = -kInf;
    const std::vector<double>* cost = dmc.cost ? &*dmc.cost : nullptr;
    for (int x = 0; x < nx; ++x) {
        double adj = st.d[size_t(x)] - (cost ? lambda * (*cost)[size_t(x)] : 0.0);
        st.lower += st.p[size_t(x)] * adj;
        st.upper = std::max(st.upper, adj);
    }
}

// Runs BA for a fixed multiplier; maximizes I(P) - lambda E[c(X)].
// Sandwich gap is on that Lagrangian objective.
void ba_run(const DmcSpec& dmc, double lambda, double tol, int max_iter, BaState& st) {
    const int nx = dmc.input_size;
    for (int it = 0; it < max_iter; ++it) {
        ba_step(dmc, lambda, st);
        if (st.upper - st.lower <= tol) return;
        // multiplicative update, max-shifted for stability
        double mx = -kInf;
        std::vector<double> expo(static_cast<size_t>(nx));
        const std::vector<double>* cost = dmc.cost ? &*dmc.cost : nullptr;
        for (int x = 0; x < nx; ++x) {
            expo[size_t(x)] = st.d[size_t(x)] - (cost ? lambda * (*cost)[size_t(x)] : 0.0);
            if (st.p[size_t(x)] > 0.0) mx = std::max(mx, expo[size_t(x)]);
        }
        double z = 0.0;
        for (int x = 0; x < nx; ++x) {
            st.p[size_t(x)] *= std::exp(expo[size_t(x)] - mx);
            z += st.p[size_t(x)];
        }
        for (int x = 0; x < nx; ++x) st.p[size_t(x)] /= z;
    }
    ba_step(dmc, lambda, st);
    if (st.upper - st.lower > tol)
        throw FblabError("blahut_arimoto: max_iter exceeded before gap <= tol");
}

double expected_cost(const DmcSpec& dmc, const std::vector<double>& p) {
    if (!dmc.cost) return 0.0;
    double e = 0.0;
    for (size_t x = 0; x < p.size(); ++x) e += p[x] * (*dmc.cost)[x];
    return e;
}

}  // namespace

double dmc_d_of_input_nats(const DmcSpec& dmc, std::span<const double> caod, int x) {
    double d = 0.0;
    for (int y = 0; y < dmc.output_size; ++y) {
        double w = dmc.W[size_t(x)][size_t(y)];
        if (w > 0.0 && caod[size_t(y)] <= 0.0) return kInf;
        d += xlogy_ratio(w, caod[size_t(y)]);
    }
    return d;
}

double dmc_infodens_var_nats(const DmcSpec& dmc, std::span<const double> caod, int x) {
    double mean = 0.0, m2 = 0.0;
    for (int y = 0; y < dmc.output_size; ++y) {
        double w = dmc.W[size_t(x)][size_t(y)];
        if (w <= 0.0) continue;
        if (caod[size_t(y)] <= 0.0) return kInf;
        double v = std::log(w / caod[size_t(y)]);
        mean += w * v;
        m2 += w * v * v;
    }
    return std::max(0.0, m2 - mean * mean);
}

double awgn_d_of_word_nats(double power, int n, double norm2) {
    // sum_j D(N(x_j,1) || N(0,1+P)) = n/2 ln(1+P) + (n + ||x||^2)/(2(1+P)) - n/2
    double P = power;
    return 0.5 * n * std::log1p(P) + (n + norm2) / (2.0 * (1.0 + P)) - 0.5 * n;
}

double awgn_infodens_var_nats(double power, int n, double norm2) {
    // Var[i(x;Y^n)|x] = (||x||^2 + n P^2/2) / (1+P)^2
    double P = power;
    return (norm2 + 0.5 * n * P * P) / ((1.0 + P) * (1.0 + P));
}

CapacitySolution blahut_arimoto(const DmcSpec& dmc, double tol, int max_iter, Units units,
                                std::optional<std::vector<double>> init) {
    dmc.validate();
    if (!(tol > 0.0)) throw FblabError("blahut_arimoto: tol must be positive");
    const int nx = dmc.input_size;

    BaState st;
    if (init) {
        if (int(init->size()) != nx) throw FblabError("blahut_arimoto: bad init length");
        st.p = *init;
    } else {
        st.p.assign(size_t(nx), 1.0 / nx);
    }

    double tol_nats = tol / units.scale();
    double lambda = 0.0;
    ba_run(dmc, 0.0, tol_nats, max_iter, st);

    if (dmc.cost_constrained() && expected_cost(dmc, st.p) > *dmc.budget * (1.0 + 1e-9)) {
        // Outer bisection on the multiplier; constraint is active.
        const double P = *dmc.budget;
        double lo = 0.0, hi = 1.0;
        BaState cur;
        auto solve_at = [&](double lam) {
            cur = BaState{};
            cur.p = init ? *init : std::vector<double>(size_t(nx), 1.0 / nx);
            ba_run(dmc, lam, tol_nats, max_iter, cur);
            return expected_cost(dmc, cur.p);
        };
        while (solve_at(hi) > P) {
            hi *= 2.0;
            if (hi > 1e15) throw FblabError("blahut_arimoto: infeasible budget");
        }
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            double ec = solve_at(mid);
            if (std::fabs(ec - P) <= 1e-9 * std::max(P, 1.0)) {
                lambda = mid;
                break;
            }
            if (ec > P) lo = mid;
            else hi = mid;
            lambda = hi;
        }
        solve_at(lambda);
        st = cur;
    }

    CapacitySolution sol;
    sol.units = units;
    sol.input_dist = st.p;
    sol.caod = st.q;
    sol.cost_multiplier = lambda;
    sol.d_per_input.resize(size_t(nx));
    for (int x = 0; x < nx; ++x) sol.d_per_input[size_t(x)] = st.d[size_t(x)] * units.scale();

    // C is the certified lower bound I(P) (q induced by p, so sum p*d = I).
    // Upper certificate: C(P) <= max_x [d(x) - lambda c(x)] + lambda P, so any
    // constraint slack at the final multiplier widens the certified gap.
    double mutual_nats = 0.0;
    for (int x = 0; x < nx; ++x) mutual_nats += st.p[size_t(x)] * st.d[size_t(x)];
    sol.C = mutual_nats * units.scale();
    double gap_nats = st.upper - st.lower;
    if (dmc.cost_constrained())
        gap_nats += lambda * std::max(0.0, *dmc.budget - expected_cost(dmc, st.p));
    sol.gap = gap_nats * units.scale();
    sol.a1 = 0.0;
    for (int x = 0; x < nx; ++x)
        sol.a1 = std::max(sol.a1, dmc_infodens_var_nats(dmc, sol.caod, x) * units.scale2());
    sol.V = dmc_dispersion(dmc, sol);
    return sol;
}

std::pair<double, double> awgn_capacity_dispersion(const AwgnSpec& spec, Units units) {
    spec.validate();
    double P = spec.power;
    double c_nats = 0.5 * std::log1p(P);
    double v_nats2 = P * (P + 2.0) / (2.0 * (P + 1.0) * (P + 1.0));
    return {c_nats * units.scale(), v_nats2 * units.scale2()};
}

CapacitySolution awgn_capacity(const AwgnSpec& spec, Units units) {
    auto [c, v] = awgn_capacity_dispersion(spec, units);
    CapacitySolution sol;
    sol.units = units;
    sol.C = c;
    sol.V = v;
    sol.awgn_power = spec.power;
    // per-letter Var[i(x;Y)|x] maximized on the power boundary x^2 = P equals
    // the dispersion in nats^2
    sol.a1 = v;
    sol.gap = 0.0;
    return sol;
}

CapacitySolution solve_capacity(const Channel& ch, double tol, int max_iter, Units units) {
    if (is_dmc(ch)) return blahut_arimoto(as_dmc(ch), tol, max_iter, units);
    return awgn_capacity(as_awgn(ch), units);
}

double dmc_dispersion(const DmcSpec& dmc, const CapacitySolution& sol) {
    double v = 0.0;
    for (int x = 0; x < dmc.input_size; ++x) {
        double px = sol.input_dist[size_t(x)];
        if (px <= 0.0) continue;
        v += px * dmc_infodens_var_nats(dmc, sol.caod, x);
    }
    return v * sol.units.scale2();
}

double information_density(const Channel& ch, const CapacitySolution& sol,
                           std::span<const int> x_word, std::span<const int> y_word) {
    if (!is_dmc(ch)) throw FblabError("information_density: integer words require a DMC");
    const DmcSpec& dmc = as_dmc(ch);
    if (x_word.size() != y_word.size()) throw FblabError("information_density: length mismatch");
    double s = 0.0;  // nats
    for (size_t j = 0; j < x_word.size(); ++j) {
        double w = dmc.W[size_t(x_word[j])][size_t(y_word[j])];
        double q = sol.caod[size_t(y_word[j])];
        if (q <= 0.0) throw FblabError("information_density: output letter outside caod support");
        if (w <= 0.0) return -kInf;
        s += std::log(w / q);
    }
    return s * sol.units.scale();
}

double information_density_awgn(const AwgnSpec& spec, std::span<const double> x_word,
                                std::span<const double> y_word, Units units) {
    if (x_word.size() != y_word.size()) throw FblabError("information_density: length mismatch");
    double P = spec.power;
    double s = 0.0;
    for (size_t j = 0; j < x_word.size(); ++j) {
        double y = y_word[j], z = y_word[j] - x_word[j];
        s += 0.5 * std::log1p(P) + y * y / (2.0 * (1.0 + P)) - 0.5 * z * z;
    }
    return s * units.scale();
}

BoundReport caod_audit(const Channel& ch, const CapacitySolution& sol, double tol) {
    BoundReport rep;
    rep.name = "caod_audit";
    rep.relation = "lhs<=rhs";
    rep.units = sol.units.name();
    if (is_dmc(ch)) {
        const DmcSpec& dmc = as_dmc(ch);
        double dmax = -kInf, kkt = 0.0, a1 = 0.0;
        for (int x = 0; x < dmc.input_size; ++x) {
            double dx = sol.d_per_input[size_t(x)];
            dmax = std::max(dmax, dx);
            if (sol.input_dist[size_t(x)] > 1e-4) kkt = std::max(kkt, std::fabs(dx - sol.C));
            a1 = std::max(a1, dmc_infodens_var_nats(dmc, sol.caod, x) * sol.units.scale2());
        }
        rep.lhs = dmax;
        rep.rhs = sol.C + tol;
        rep.add_constant("C", sol.C);
        rep.add_constant("kkt_equality_slack", kkt);
        rep.add_constant("a1", a1);
        rep.add_constant("gap", sol.gap);
    } else {
        const AwgnSpec& awgn = as_awgn(ch);
        double P = awgn.power;
        // closed form: d at the power boundary equals C exactly
        double d_boundary = (0.5 * std::log1p(P)) * sol.units.scale();
        rep.lhs = d_boundary;
        rep.rhs = sol.C + tol;
        rep.add_constant("C", sol.C);
        rep.add_constant("kkt_equality_slack", std::fabs(d_boundary - sol.C));
        rep.add_constant("a1", sol.a1);
        rep.note = "AWGN: d(x) maximized on the power sphere, evaluated in closed form";
    }
    rep.finish_exact();
    return rep;
}

JValue CapacitySolution::to_json() const {
    JValue j = JValue::object();
    j.set("units", units.name());
    j.set("C", C);
    j.set("V", V);
    j.set("a1", a1);
    j.set("gap", gap);
    if (is_awgn()) {
        j.set("caod", JValue::object().set("kind", "gaussian").set("mean", 0.0).set("variance", 1.0 + awgn_power));
        j.set("power", awgn_power);
    } else {
        j.set("input_dist", JValue::array_of(input_dist));
        j.set("caod", JValue::array_of(caod));
        j.set("d_per_input", JValue::array_of(d_per_input));
        if (cost_multiplier != 0.0) j.set("cost_multiplier", cost_multiplier);
    }
    return j;
}

}  // namespace fblab

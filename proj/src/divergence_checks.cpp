#include "fblab/divergence_checks.hpp"

#include <cmath>

namespace fblab {

BoundReport pinsker_check(std::span<const double> p, std::span<const double> q, Units units) {
    BoundReport rep;
    rep.name = "pinsker";
    rep.relation = "lhs<=rhs";
    rep.units = units.name();
    double tv = tv_distance(p, q);
    double d_nats = kl_nats(p, q);
    rep.lhs = tv * tv;
    rep.rhs = d_nats / 2.0;  // D/(2 log e) is base-free: equals D_nats/2
    rep.add_constant("tv", tv);
    rep.add_constant("kl", d_nats * units.scale());
    rep.finish_exact();
    return rep;
}

ConditionalKl conditional_kl_identity(const std::vector<std::vector<double>>& kernel_rows,
                                      std::span<const double> p_x, std::span<const double> q_y,
                                      Units units) {
    if (kernel_rows.size() != p_x.size()) throw FblabError("conditional_kl: kernel/p_x mismatch");
    size_t ny = q_y.size();
    std::vector<double> p_y(ny, 0.0);
    double d_cond = 0.0;
    for (size_t x = 0; x < kernel_rows.size(); ++x) {
        if (kernel_rows[x].size() != ny) throw FblabError("conditional_kl: kernel/q_y mismatch");
        if (p_x[x] <= 0.0) continue;
        d_cond += p_x[x] * kl_nats(std::span(kernel_rows[x]), q_y);
        for (size_t y = 0; y < ny; ++y) p_y[y] += p_x[x] * kernel_rows[x][y];
    }
    ConditionalKl out;
    out.units = units;
    out.d_marg = kl_nats(std::span<const double>(p_y), q_y) * units.scale();
    out.d_cond = d_cond * units.scale();
    out.mutual = out.d_cond - out.d_marg;
    double mi = 0.0;
    for (size_t x = 0; x < kernel_rows.size(); ++x) {
        if (p_x[x] <= 0.0) continue;
        for (size_t y = 0; y < ny; ++y) {
            double w = kernel_rows[x][y];
            if (w <= 0.0) continue;
            mi += p_x[x] * w * std::log(w / p_y[y]);
        }
    }
    out.direct_mi = mi * units.scale();
    return out;
}

BoundReport donsker_varadhan_gap(std::span<const double> p, std::span<const double> q,
                                 std::span<const double> g, Units units) {
    if (p.size() != q.size() || p.size() != g.size()) throw FblabError("donsker_varadhan: size mismatch");
    BoundReport rep;
    rep.name = "donsker_varadhan";
    rep.relation = "lhs<=rhs";
    rep.units = units.name();
    // convert g to nats so exp/log are natural, report back in units
    double s = units.scale();
    double ep = 0.0, mx = -kInf;
    for (size_t i = 0; i < g.size(); ++i) {
        ep += p[i] * (g[i] / s);
        if (q[i] > 0.0) mx = std::max(mx, g[i] / s);
    }
    double z = 0.0;
    for (size_t i = 0; i < g.size(); ++i)
        if (q[i] > 0.0) z += q[i] * std::exp(g[i] / s - mx);
    double log_mgf = mx + std::log(z);
    rep.lhs = (ep - log_mgf) * s;
    rep.rhs = kl_nats(p, q) * s;
    rep.add_constant("E_P_g", ep * s);
    rep.add_constant("log_E_Q_exp_g", log_mgf * s);
    rep.finish_exact();
    return rep;
}

BoundReport ratio_mean_lemma_check(std::span<const double> values, std::span<const double> probs) {
    if (values.size() != probs.size()) throw FblabError("ratio_mean_lemma: size mismatch");
    double mean = 0.0;
    for (size_t i = 0; i < values.size(); ++i) {
        if (values[i] <= 0.0) throw FblabError("ratio_mean_lemma: X must be positive");
        mean += probs[i] * values[i];
    }
    if (mean > 1.0 + 1e-12) throw FblabError("ratio_mean_lemma: requires E[X] <= 1");
    BoundReport rep;
    rep.name = "ratio_mean_lemma";
    rep.relation = "lhs<=rhs";
    rep.units = "nats";
    double e_abs = 0.0, e_log = 0.0;
    for (size_t i = 0; i < values.size(); ++i) {
        e_abs += probs[i] * std::fabs(values[i] - 1.0);
        e_log += probs[i] * std::log(1.0 / values[i]);
    }
    rep.lhs = e_abs;
    rep.rhs = std::sqrt(2.0 * std::max(0.0, e_log));
    rep.add_constant("E_X", mean);
    rep.add_constant("E_ln_inv_X", e_log);
    rep.finish_exact();
    return rep;
}

}  // namespace fblab

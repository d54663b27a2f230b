#include "fblab/converses.hpp"

#include <algorithm>
#include <cmath>

namespace fblab {

BoundConstants theorem4_chain_constants(const DmcSpec& dmc, int n, double eps, Units units) {
    BoundConstants bc;
    bc.eps = eps;
    double a1 = 0.0;
    bool finite = true;
    for (int x = 0; x < dmc.input_size && finite; ++x) {
        for (int b = 0; b < dmc.output_size && finite; ++b) {
            double wb = dmc.W[size_t(x)][size_t(b)];
            if (wb <= 0.0) continue;
            for (int b2 = 0; b2 < dmc.output_size; ++b2) {
                double wb2 = dmc.W[size_t(x)][size_t(b2)];
                if (wb2 <= 0.0) {
                    finite = false;
                    break;
                }
                a1 = std::max(a1, std::log(wb / wb2));
            }
        }
    }
    double a2 = 0.0;
    for (int x = 0; x < dmc.input_size; ++x) {
        double mean = 0.0, m2 = 0.0;
        for (int y = 0; y < dmc.output_size; ++y) {
            double w = dmc.W[size_t(x)][size_t(y)];
            if (w <= 0.0) continue;
            double lw = std::log(w);
            mean += w * lw;
            m2 += w * lw * lw;
        }
        a2 = std::max(a2, std::max(0.0, m2 - mean * mean));
    }
    if (!finite) {
        bc.a1_lip = kInf;
        bc.a2_var = a2 * units.scale2();
        bc.S_m = kInf;
        return bc;
    }
    bc.a1_lip = a1 * units.scale();
    bc.a2_var = a2 * units.scale2();
    double s_m_nats = 2.0 * n * a2 + 2.0 * n * a1 * a1;
    bc.S_m = s_m_nats * units.scale2();
    if (eps < 1.0) {
        bc.Delta = std::sqrt(2.0 * s_m_nats / (1.0 - eps)) * units.scale();
        bc.delta_prime = (1.0 - eps) / 2.0;
    }
    return bc;
}

ProductQ ProductQ::iid(const std::vector<double>& q_letter, int n) {
    ProductQ q;
    q.per_position.assign(size_t(n), q_letter);
    return q;
}

ProductQ ProductQ::from_word(const DmcSpec& dmc, std::span<const int> word) {
    ProductQ q;
    for (int s : word) q.per_position.push_back(dmc.W[size_t(s)]);
    return q;
}

double ProductQ::mass(std::uint64_t yindex, int ybase) const {
    double m = 1.0;
    for (const auto& qj : per_position) {
        m *= qj[size_t(yindex % std::uint64_t(ybase))];
        yindex /= std::uint64_t(ybase);
    }
    return m;
}

double ProductQ::d_of_word_nats(const DmcSpec& dmc, std::span<const int> word) const {
    if (int(word.size()) != n()) throw FblabError("ProductQ: word length mismatch");
    double d = 0.0;
    for (size_t j = 0; j < word.size(); ++j)
        d += kl_nats(std::span<const double>(dmc.W[size_t(word[j])]), std::span<const double>(per_position[j]));
    return d;
}

double ProductQ::var_of_word_nats(const DmcSpec& dmc, std::span<const int> word) const {
    double v = 0.0;
    for (size_t j = 0; j < word.size(); ++j) {
        double mean = 0.0, m2 = 0.0;
        for (int y = 0; y < dmc.output_size; ++y) {
            double w = dmc.W[size_t(word[j])][size_t(y)];
            if (w <= 0.0) continue;
            if (per_position[j][size_t(y)] <= 0.0) return kInf;
            double lr = std::log(w / per_position[j][size_t(y)]);
            mean += w * lr;
            m2 += w * lr * lr;
        }
        v += std::max(0.0, m2 - mean * mean);
    }
    return v;
}

double ProductQ::sup_var_nats(const DmcSpec& dmc) const {
    double v = 0.0;
    for (const auto& qj : per_position) {
        double worst = 0.0;
        for (int x = 0; x < dmc.input_size; ++x) {
            double mean = 0.0, m2 = 0.0;
            bool inf = false;
            for (int y = 0; y < dmc.output_size; ++y) {
                double w = dmc.W[size_t(x)][size_t(y)];
                if (w <= 0.0) continue;
                if (qj[size_t(y)] <= 0.0) {
                    inf = true;
                    break;
                }
                double lr = std::log(w / qj[size_t(y)]);
                mean += w * lr;
                m2 += w * lr * lr;
            }
            worst = std::max(worst, inf ? kInf : std::max(0.0, m2 - mean * mean));
        }
        v += worst;
    }
    return v;
}

namespace {

// P_{Y^n|X^n=word}[ log(W^n/Q) <= rho_nats ], exact enumeration
double prob_log_ratio_le(const DmcSpec& dmc, std::span<const int> word, const ProductQ& q,
                         double rho_nats, const Parallel& par) {
    OutcomeSpace sp{int(word.size()), dmc.output_size};
    std::uint64_t sz = sp.size();
    return sharded_sum(par, sz, [&](std::uint64_t lo, std::uint64_t hi) {
        double s = 0.0;
        for (std::uint64_t y = lo; y < hi; ++y) {
            double w = word_outcome_prob(dmc, word, y);
            if (w <= 0.0) continue;
            double qm = q.mass(y, dmc.output_size);
            double lr = qm > 0.0 ? std::log(w / qm) : kInf;
            if (lr <= rho_nats) s += w;
        }
        return s;
    });
}

double prob_log_ratio_ge(const DmcSpec& dmc, std::span<const int> word, const ProductQ& q,
                         double rho_nats, const Parallel& par) {
    OutcomeSpace sp{int(word.size()), dmc.output_size};
    std::uint64_t sz = sp.size();
    return sharded_sum(par, sz, [&](std::uint64_t lo, std::uint64_t hi) {
        double s = 0.0;
        for (std::uint64_t y = lo; y < hi; ++y) {
            double w = word_outcome_prob(dmc, word, y);
            if (w <= 0.0) continue;
            double qm = q.mass(y, dmc.output_size);
            double lr = qm > 0.0 ? std::log(w / qm) : kInf;
            if (lr >= rho_nats) s += w;
        }
        return s;
    });
}

}  // namespace

BoundReport augustin_bound(const DmcSpec& dmc, const Codebook& code, const ProductQ& q,
                           AugustinRhoMode mode, std::optional<double> delta_override,
                           std::uint64_t guard, const Parallel& par, Units units) {
    if (code.criterion != ErrorCriterion::max_error)
        throw FblabError("augustin_bound: requires a max-error code");
    OutcomeSpace sp{code.n, dmc.output_size};
    if (sp.size() > guard) throw FblabError("augustin_bound: enumeration guard exceeded");

    DecoderTable dec = ml_decode(dmc, code, guard, par);
    auto [eps_avg, eps_max] = exact_error(dmc, code, dec, par);
    (void)eps_avg;
    double eps = eps_max;

    double s_m_nats = q.sup_var_nats(dmc);
    double delta_nats;
    if (delta_override) {
        delta_nats = *delta_override / units.scale();
    } else {
        if (eps >= 1.0) delta_nats = kInf;
        else delta_nats = std::sqrt(2.0 * s_m_nats / (1.0 - eps));
    }

    double mean_rho = 0.0, denom = kInf;
    for (int i = 0; i < code.M; ++i) {
        std::span<const int> w(code.words[size_t(i)]);
        double rho = mode == AugustinRhoMode::d_plus_delta ? q.d_of_word_nats(dmc, w) + delta_nats
                                                           : delta_nats;
        mean_rho += rho / code.M;
        denom = std::min(denom, prob_log_ratio_le(dmc, w, q, rho, par));
    }
    denom -= eps;

    BoundReport rep;
    rep.name = "augustin";
    rep.relation = "lhs<=rhs";
    rep.units = units.name();
    rep.lhs = code.M;
    rep.add_constant("eps", eps);
    rep.add_constant("S_m", s_m_nats * units.scale2());
    rep.add_constant("Delta", std::isinf(delta_nats) ? kInf : delta_nats * units.scale());
    rep.add_constant("E_rho", std::isinf(mean_rho) ? kInf : mean_rho * units.scale());
    rep.add_constant("denominator", denom);
    if (denom <= 0.0 || std::isinf(mean_rho)) {
        rep.rhs = kInf;
        rep.verdict = Verdict::inconclusive;
        rep.note = "denominator non-positive: bound vacuous per the theorem proviso";
        rep.slack = kInf;
        return rep;
    }
    rep.rhs = std::exp(mean_rho) / denom;
    rep.finish_exact();
    return rep;
}

BoundReport poor_verdu_bound(const std::vector<FiniteDist>& hypotheses, std::span<const double> rhos,
                             Units units) {
    const int M = int(hypotheses.size());
    if (M < 2) throw FblabError("poor_verdu_bound: need at least two hypotheses");
    if (int(rhos.size()) != M) throw FblabError("poor_verdu_bound: one rho per hypothesis");
    size_t ny = hypotheses[0].size();
    for (const auto& h : hypotheses)
        if (h.size() != ny) throw FblabError("poor_verdu_bound: alphabet mismatch");

    std::vector<double> mix(ny, 0.0);
    for (const auto& h : hypotheses)
        for (size_t y = 0; y < ny; ++y) mix[y] += h[y] / M;

    // bound side
    double rho_bar_nats = 0.0;
    for (double r : rhos) rho_bar_nats += r / units.scale() / M;
    double inf_p = kInf;
    for (int j = 0; j < M; ++j) {
        double pj = 0.0;
        for (size_t y = 0; y < ny; ++y) {
            double p = hypotheses[size_t(j)][y];
            if (p <= 0.0) continue;
            double dens = mix[y] > 0.0 ? std::log(p / mix[y]) : kInf;
            if (dens <= rhos[size_t(j)] / units.scale()) pj += p;
        }
        inf_p = std::min(inf_p, pj);
    }
    double bound = (1.0 - std::exp(rho_bar_nats) / M) * inf_p;

    // exact maximal error of the ML rule with uniform tie-breaking
    std::vector<double> correct(size_t(M), 0.0);
    for (size_t y = 0; y < ny; ++y) {
        double best = -1.0;
        int count = 0;
        for (int j = 0; j < M; ++j) {
            double p = hypotheses[size_t(j)][y];
            if (p > best + 1e-15) {
                best = p;
                count = 1;
            } else if (std::fabs(p - best) <= 1e-15) {
                ++count;
            }
        }
        for (int j = 0; j < M; ++j)
            if (std::fabs(hypotheses[size_t(j)][y] - best) <= 1e-15)
                correct[size_t(j)] += hypotheses[size_t(j)][y] / count;
    }
    double eps = 0.0;
    for (int j = 0; j < M; ++j) eps = std::max(eps, 1.0 - correct[size_t(j)]);

    BoundReport rep;
    rep.name = "poor_verdu";
    rep.relation = "lhs>=rhs";
    rep.units = units.name();
    rep.lhs = eps;
    rep.rhs = bound;
    rep.add_constant("M", M);
    rep.add_constant("rho_bar", rho_bar_nats * units.scale());
    rep.add_constant("inf_prob", inf_p);
    rep.finish_exact();
    return rep;
}

BoundReport kl_lower_bound(const DmcSpec& dmc, const Codebook& code, const ProductQ& q, KlLowerMode mode,
                           std::optional<double> delta_override, std::uint64_t guard, const Parallel& par,
                           Units units) {
    if (code.criterion != ErrorCriterion::max_error)
        throw FblabError("kl_lower_bound: requires a max-error code");
    DecoderTable dec = ml_decode(dmc, code, guard, par);
    auto [eps_avg, eps_max] = exact_error(dmc, code, dec, par);
    (void)eps_avg;
    double eps = eps_max;

    double d_cond = 0.0;
    for (int i = 0; i < code.M; ++i) d_cond += q.d_of_word_nats(dmc, code.words[size_t(i)]) / code.M;
    double s_m = q.sup_var_nats(dmc);

    BoundReport rep;
    rep.name = mode == KlLowerMode::sf ? "kl_lower_sf" : "kl_lower_sfvar";
    rep.relation = "lhs>=rhs";
    rep.units = units.name();
    rep.lhs = d_cond * units.scale();
    rep.add_constant("eps", eps);
    rep.add_constant("M", code.M);
    rep.add_constant("S_m", s_m * units.scale2());

    if (eps >= 1.0) {
        rep.rhs = -kInf;
        rep.verdict = Verdict::inconclusive;
        rep.note = "eps = 1: bound vacuous";
        rep.slack = kInf;
        return rep;
    }

    if (mode == KlLowerMode::sfvar) {
        rep.rhs = (std::log(double(code.M)) - std::sqrt(2.0 * s_m / (1.0 - eps)) +
                   std::log((1.0 - eps) / 2.0)) *
                  units.scale();
        rep.finish_exact();
        return rep;
    }

    double delta_nats = delta_override ? *delta_override / units.scale()
                                       : std::sqrt(2.0 * s_m / (1.0 - eps));
    // verify the sup-deviation condition exactly over the codewords
    double delta_prime = 0.0;
    OutcomeSpace sp{code.n, dmc.output_size};
    if (sp.size() <= guard) {
        for (int i = 0; i < code.M; ++i) {
            std::span<const int> w(code.words[size_t(i)]);
            double d = q.d_of_word_nats(dmc, w);
            delta_prime = std::max(delta_prime, prob_log_ratio_ge(dmc, w, q, d + delta_nats, par));
        }
    } else {
        delta_prime = delta_nats > 0.0 ? s_m / (delta_nats * delta_nats) : 1.0;  // Chebyshev
        rep.note = "delta' from Chebyshev (enumeration guard exceeded)";
    }
    rep.add_constant("Delta", delta_nats * units.scale());
    rep.add_constant("delta_prime", delta_prime);
    if (delta_prime >= 1.0 - eps) {
        rep.rhs = -kInf;
        rep.verdict = Verdict::inconclusive;
        rep.note = "condition delta' < 1 - eps unverifiable";
        rep.slack = kInf;
        return rep;
    }
    rep.rhs = (std::log(double(code.M)) - delta_nats + std::log(1.0 - eps - delta_prime)) * units.scale();
    rep.finish_exact();
    return rep;
}

BoundReport output_kl_upper(const Channel& ch, const CapacitySolution& sol, int n, double log_m,
                            double eps, std::optional<double> exact_d) {
    const Units units = sol.units;
    if (!(eps > 0.0 && eps < 1.0)) throw FblabError("output_kl_upper: eps must lie in (0,1)");
    BoundReport rep;
    rep.relation = "lhs<=rhs";
    rep.units = units.name();
    double nc = double(n) * sol.C;
    double log_m_nats = log_m / units.scale();

    if (is_dmc(ch)) {
        const DmcSpec& dmc = as_dmc(ch);
        BoundConstants bc = theorem4_chain_constants(dmc, n, eps, units);
        if (bc.finite()) {
            rep.name = "output_kl_upper_dmc";
            double s_m_nats = bc.S_m / units.scale2();
            double budget_nats = nc / units.scale() - log_m_nats +
                                 std::sqrt(2.0 * s_m_nats / (1.0 - eps)) + std::log(2.0 / (1.0 - eps));
            rep.rhs = budget_nats * units.scale();
            rep.add_constant("a1_lip", bc.a1_lip);
            rep.add_constant("a2_var", bc.a2_var);
            rep.add_constant("S_m", bc.S_m);
        } else {
            rep.name = "output_kl_upper_dmc_c1inf";
            double shape = std::sqrt(double(n)) * std::pow(std::log(double(std::max(2, n))), 1.5);
            rep.rhs = kInf;
            rep.add_constant("sqrt_n_log32_n", shape);
            rep.note = "C1 = inf: budget is nC - log M + b sqrt(n) log^{3/2} n with b unspecified; formula-only";
            rep.verdict = Verdict::inconclusive;
            rep.lhs = exact_d.value_or(0.0);
            rep.slack = kInf;
            rep.add_constant("nC_minus_logM", nc - log_m);
            return rep;
        }
    } else {
        const AwgnSpec& awgn = as_awgn(ch);
        rep.name = "output_kl_upper_awgn";
        double budget_nats = nc / units.scale() - log_m_nats +
                             std::sqrt(6.0 * double(n) * (3.0 + 4.0 * awgn.power)) +
                             std::log(2.0 / (1.0 - eps));
        rep.rhs = budget_nats * units.scale();
        rep.add_constant("power", awgn.power);
    }
    rep.add_constant("nC", nc);
    rep.add_constant("log_M", log_m);
    rep.add_constant("eps", eps);
    if (exact_d) {
        rep.lhs = *exact_d;
        rep.finish_exact();
    } else {
        rep.lhs = 0.0;
        rep.slack = kInf;
        rep.verdict = Verdict::pass;
        rep.note = "budget only; no exact divergence supplied";
    }
    return rep;
}

BoundReport tilted_bound(const DmcSpec& dmc, const Codebook& code, const ProductQ& q,
                         std::span<const double> f_outcomes, double t, std::optional<double> s_override,
                         std::optional<double> s_f_override, std::uint64_t guard, const Parallel& par) {
    if (!(t >= 0.0 && t <= 1.0)) throw FblabError("tilted_bound: t outside [0,1]");
    if (code.criterion != ErrorCriterion::max_error)
        throw FblabError("tilted_bound: requires a max-error code");
    OutcomeSpace sp{code.n, dmc.output_size};
    std::uint64_t sz = sp.size();
    if (sz > guard) throw FblabError("tilted_bound: enumeration guard exceeded");
    if (f_outcomes.size() != sz) throw FblabError("tilted_bound: F table must cover the outcome space");

    DecoderTable dec = ml_decode(dmc, code, guard, par);
    auto [eps_avg, eps_max] = exact_error(dmc, code, dec, par);
    (void)eps_avg;
    double eps = eps_max;

    // Z_F and the t-tilted log-mgf under Q (max-shifted)
    double fmax = -kInf;
    for (double f : f_outcomes) fmax = std::max(fmax, f);
    auto log_mgf_q = [&](double tt) {
        double acc = 0.0;
        for (std::uint64_t y = 0; y < sz; ++y) {
            double qm = q.mass(y, dmc.output_size);
            if (qm > 0.0) acc += qm * std::exp(tt * (f_outcomes[size_t(y)] - fmax));
        }
        return tt * fmax + std::log(acc);
    };
    double z_f = log_mgf_q(1.0);
    if (!std::isfinite(z_f)) throw FblabError("tilted_bound: Z_F not finite");

    std::vector<double> py = induced_output(dmc, code, guard, par);
    double e_p_f = 0.0;
    for (std::uint64_t y = 0; y < sz; ++y) e_p_f += py[size_t(y)] * f_outcomes[size_t(y)];

    double d_cond = 0.0, s_var = 0.0, s_f = 0.0;
    for (int i = 0; i < code.M; ++i) {
        std::span<const int> w(code.words[size_t(i)]);
        d_cond += q.d_of_word_nats(dmc, w) / code.M;
        s_var = std::max(s_var, q.var_of_word_nats(dmc, w));
        double mean = 0.0, m2 = 0.0;
        for (std::uint64_t y = 0; y < sz; ++y) {
            double wp = word_outcome_prob(dmc, w, y);
            if (wp <= 0.0) continue;
            mean += wp * f_outcomes[size_t(y)];
            m2 += wp * f_outcomes[size_t(y)] * f_outcomes[size_t(y)];
        }
        s_f = std::max(s_f, std::max(0.0, m2 - mean * mean));
    }
    if (s_override) s_var = *s_override;
    if (s_f_override) s_f = *s_f_override;

    BoundReport rep;
    rep.name = "tilted";
    rep.relation = "lhs<=rhs";
    rep.units = "nats";
    rep.lhs = t * e_p_f - log_mgf_q(t);
    if (eps >= 1.0) {
        rep.rhs = kInf;
        rep.verdict = Verdict::inconclusive;
        rep.note = "eps = 1: bound vacuous";
        rep.slack = kInf;
        return rep;
    }
    double var_term = 2.0 * (s_var + t * t * s_f);  // Var[log dP/dQ^{tF}] <= 2S + 2 t^2 S_F
    rep.rhs = d_cond - std::log(double(code.M)) + std::sqrt(2.0 * var_term / (1.0 - eps)) +
              std::log(2.0 / (1.0 - eps));
    rep.add_constant("eps", eps);
    rep.add_constant("t", t);
    rep.add_constant("S", s_var);
    rep.add_constant("S_F", s_f);
    rep.add_constant("Z_F", z_f);
    rep.add_constant("D_cond", d_cond);
    rep.add_constant("a_sqrt_coeff", 2.0 / std::sqrt(1.0 - eps));
    rep.add_constant("a_log_term", std::log(2.0 / (1.0 - eps)));
    rep.finish_exact();
    return rep;
}

}  // namespace fblab

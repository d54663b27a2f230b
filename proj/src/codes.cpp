#include "fblab/codes.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fblab/json_io.hpp"
#include "json.hpp"

namespace fblab {

void Codebook::validate(const Channel& ch, double power_tol) const {
    if (n < 0 || M < 1) throw FblabError("codebook: need n >= 0 and M >= 1");
    if (awgn_alphabet != !is_dmc(ch)) throw FblabError("codebook: alphabet does not match channel");
    if (awgn_alphabet) {
        const AwgnSpec& a = as_awgn(ch);
        if (int(xwords.size()) != M) throw FblabError("codebook: row count mismatch");
        for (const auto& w : xwords) {
            if (int(w.size()) != n) throw FblabError("codebook: row length mismatch");
            double e = 0.0;
            for (double v : w) e += v * v;
            if (e > n * a.power * (1.0 + power_tol) + 1e-15)
                throw FblabError("codebook: codeword violates the power ball");
        }
    } else {
        const DmcSpec& d = as_dmc(ch);
        if (int(words.size()) != M) throw FblabError("codebook: row count mismatch");
        for (const auto& w : words) {
            if (int(w.size()) != n) throw FblabError("codebook: row length mismatch");
            for (int s : w)
                if (s < 0 || s >= d.input_size) throw FblabError("codebook: symbol out of range");
            if (d.cost_constrained()) {
                double c = 0.0;
                for (int s : w) c += (*d.cost)[size_t(s)];
                if (c > n * *d.budget + 1e-9) throw FblabError("codebook: codeword violates cost budget");
            }
        }
    }
}

Codebook Codebook::parse_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const std::exception& e) {
        throw FblabError(std::string("code file: malformed JSON: ") + e.what());
    }
    Codebook c;
    c.n = j.at("n").get<int>();
    c.M = j.at("M").get<int>();
    std::string alphabet = j.value("alphabet", std::string("dmc"));
    c.awgn_alphabet = alphabet == "awgn";
    std::string crit = j.value("criterion", std::string("max"));
    c.criterion = crit == "avg" ? ErrorCriterion::avg_error : ErrorCriterion::max_error;
    for (const auto& row : j.at("words")) {
        if (c.awgn_alphabet) {
            std::vector<double> w;
            for (const auto& v : row) w.push_back(v.get<double>());
            c.xwords.push_back(std::move(w));
        } else {
            std::vector<int> w;
            for (const auto& v : row) w.push_back(v.get<int>());
            c.words.push_back(std::move(w));
        }
    }
    if (int(c.awgn_alphabet ? c.xwords.size() : c.words.size()) != c.M)
        throw FblabError("code file: M does not match the number of words");
    return c;
}

Codebook Codebook::load(const std::string& path) { return parse_json(read_text_file(path)); }

std::string Codebook::to_json() const {
    JValue j = JValue::object();
    j.set("n", n);
    j.set("M", M);
    j.set("alphabet", awgn_alphabet ? "awgn" : "dmc");
    j.set("criterion", criterion == ErrorCriterion::avg_error ? "avg" : "max");
    JValue rows = JValue::array();
    if (awgn_alphabet) {
        for (const auto& w : xwords) rows.push_back(JValue::array_of(w));
    } else {
        for (const auto& w : words) {
            JValue r = JValue::array();
            for (int s : w) r.push_back(s);
            rows.push_back(std::move(r));
        }
    }
    j.set("words", std::move(rows));
    return j.dump();
}

std::uint64_t OutcomeSpace::size() const {
    std::uint64_t s = 1;
    for (int i = 0; i < n; ++i) {
        if (s > (std::uint64_t(1) << 62) / std::uint64_t(ybase)) throw FblabError("outcome space overflow");
        s *= std::uint64_t(ybase);
    }
    return s;
}

void OutcomeSpace::digits(std::uint64_t index, std::span<int> out) const {
    for (int i = 0; i < n; ++i) {
        out[size_t(i)] = int(index % std::uint64_t(ybase));
        index /= std::uint64_t(ybase);
    }
}

double word_outcome_prob(const DmcSpec& dmc, std::span<const int> word, std::uint64_t yindex) {
    double p = 1.0;
    const std::uint64_t b = std::uint64_t(dmc.output_size);
    for (size_t j = 0; j < word.size(); ++j) {
        p *= dmc.W[size_t(word[j])][size_t(yindex % b)];
        yindex /= b;
    }
    return p;
}

namespace {
std::uint64_t checked_space(const DmcSpec& dmc, int n, std::uint64_t guard) {
    OutcomeSpace sp{n, dmc.output_size};
    std::uint64_t sz = sp.size();
    if (sz > guard) throw FblabError("enumeration guard exceeded");
    return sz;
}
}  // namespace

DecoderTable ml_decode(const DmcSpec& dmc, const Codebook& code, std::uint64_t guard, const Parallel& par) {
    std::uint64_t sz = checked_space(dmc, code.n, guard);
    DecoderTable dec;
    dec.map.assign(size_t(sz), 0);
    par.for_shards(sz, [&](int, std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t y = lo; y < hi; ++y) {
            double best = -1.0;
            std::uint32_t arg = 0;
            for (int i = 0; i < code.M; ++i) {
                double p = word_outcome_prob(dmc, code.words[size_t(i)], y);
                if (p > best) {  // strict: ties stay at the lowest index
                    best = p;
                    arg = std::uint32_t(i);
                }
            }
            dec.map[size_t(y)] = arg;
        }
    });
    return dec;
}

std::pair<double, double> exact_error(const DmcSpec& dmc, const Codebook& code,
                                      const DecoderTable& dec, const Parallel& par) {
    std::vector<double> correct(size_t(code.M), 0.0);
    for (int i = 0; i < code.M; ++i) {
        const auto& w = code.words[size_t(i)];
        double c = sharded_sum(par, dec.map.size(), [&](std::uint64_t lo, std::uint64_t hi) {
            double s = 0.0;
            for (std::uint64_t y = lo; y < hi; ++y)
                if (dec.map[size_t(y)] == std::uint32_t(i)) s += word_outcome_prob(dmc, w, y);
            return s;
        });
        correct[size_t(i)] = c;
    }
    double avg = 0.0, mx = 0.0;
    for (int i = 0; i < code.M; ++i) {
        double e = 1.0 - correct[size_t(i)];
        e = std::clamp(e, 0.0, 1.0);
        avg += e / code.M;
        mx = std::max(mx, e);
    }
    return {avg, mx};
}

std::vector<double> induced_output(const DmcSpec& dmc, const Codebook& code, std::uint64_t guard,
                                   const Parallel& par) {
    std::uint64_t sz = checked_space(dmc, code.n, guard);
    std::vector<double> p(size_t(sz), 0.0);
    par.for_shards(sz, [&](int, std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t y = lo; y < hi; ++y) {
            double s = 0.0;
            for (int i = 0; i < code.M; ++i) s += word_outcome_prob(dmc, code.words[size_t(i)], y);
            p[size_t(y)] = s / code.M;
        }
    });
    return p;
}

std::vector<double> caod_product(const CapacitySolution& sol, int n, int ybase, std::uint64_t guard) {
    if (int(sol.caod.size()) != ybase) throw FblabError("caod_product: alphabet mismatch");
    OutcomeSpace sp{n, ybase};
    std::uint64_t sz = sp.size();
    if (sz > guard) throw FblabError("enumeration guard exceeded");
    std::vector<double> q(size_t(sz), 1.0);
    for (std::uint64_t y = 0; y < sz; ++y) {
        std::uint64_t idx = y;
        double m = 1.0;
        for (int j = 0; j < n; ++j) {
            m *= sol.caod[size_t(idx % std::uint64_t(ybase))];
            idx /= std::uint64_t(ybase);
        }
        q[size_t(y)] = m;
    }
    return q;
}

CodeMetrics code_metrics(const DmcSpec& dmc, const Codebook& code, const CapacitySolution& sol,
                         std::uint64_t guard, const Parallel& par) {
    const Units units = sol.units;
    std::uint64_t sz = checked_space(dmc, code.n, guard);
    CodeMetrics m;
    m.units = units;

    DecoderTable dec = ml_decode(dmc, code, guard, par);
    std::tie(m.eps_avg, m.eps_max) = exact_error(dmc, code, dec, par);

    std::vector<double> py = induced_output(dmc, code, guard, par);
    std::vector<double> qn = caod_product(sol, code.n, dmc.output_size, guard);

    auto tree_and_linear = [&](const std::function<double(std::uint64_t)>& term, double& out_resid) {
        double tree = sharded_sum(par, sz, [&](std::uint64_t lo, std::uint64_t hi) {
            double s = 0.0;
            for (std::uint64_t y = lo; y < hi; ++y) s += term(y);
            return s;
        });
        double linear = 0.0;
        for (std::uint64_t y = sz; y-- > 0;) linear += term(y);  // reverse order second pass
        out_resid = std::max(out_resid, std::fabs(tree - linear));
        return tree;
    };

    double resid = 0.0;
    double d_out = tree_and_linear([&](std::uint64_t y) { return xlogy_ratio(py[size_t(y)], qn[size_t(y)]); }, resid);
    double h_out = tree_and_linear([&](std::uint64_t y) { return -xlogx(py[size_t(y)]); }, resid);

    double d_cond = 0.0, i_direct = 0.0;
    for (int i = 0; i < code.M; ++i) {
        const auto& w = code.words[size_t(i)];
        double resid_i = 0.0;
        d_cond += tree_and_linear(
                      [&](std::uint64_t y) {
                          return xlogy_ratio(word_outcome_prob(dmc, w, y), qn[size_t(y)]);
                      },
                      resid_i) /
                  code.M;
        i_direct += tree_and_linear(
                        [&](std::uint64_t y) {
                            return xlogy_ratio(word_outcome_prob(dmc, w, y), py[size_t(y)]);
                        },
                        resid_i) /
                    code.M;
        resid = std::max(resid, resid_i / code.M);
    }

    m.D_out = d_out * units.scale();
    m.H_out = h_out * units.scale();
    m.D_cond_caod = d_cond * units.scale();
    m.I_code = i_direct * units.scale();
    m.identity_resid = std::fabs(m.I_code - (m.D_cond_caod - m.D_out));
    m.recompute_resid = resid * units.scale();

    // k-th order empirical output distributions, k in {1, 2}
    for (int k = 1; k <= 2 && k <= code.n; ++k) {
        EmpiricalOrderK emp;
        emp.k = k;
        std::uint64_t ksz = 1;
        for (int t = 0; t < k; ++t) ksz *= std::uint64_t(dmc.output_size);
        emp.dist.assign(size_t(ksz), 0.0);
        int windows = code.n - k + 1;
        std::vector<int> ydig(static_cast<size_t>(k));
        for (std::uint64_t yk = 0; yk < ksz; ++yk) {
            OutcomeSpace spk{k, dmc.output_size};
            spk.digits(yk, ydig);
            double acc = 0.0;
            for (int j = 0; j < windows; ++j) {
                for (int i = 0; i < code.M; ++i) {
                    double p = 1.0;
                    for (int t = 0; t < k; ++t)
                        p *= dmc.W[size_t(code.words[size_t(i)][size_t(j + t)])][size_t(ydig[size_t(t)])];
                    acc += p / code.M;
                }
            }
            emp.dist[size_t(yk)] = acc / windows;
        }
        std::vector<double> qk = caod_product(sol, k, dmc.output_size, guard);
        emp.d_to_caod_k = kl_nats(std::span<const double>(emp.dist), std::span<const double>(qk)) * units.scale();
        emp.dconvk_budget = double(k) / windows * m.D_out;
        m.empirical.push_back(std::move(emp));
    }

    AepVariance av = aep_variance(dmc, code, guard, par, units);
    m.aep_var = av.var;
    m.aep_cond_var = av.expected_cond_var;
    m.aep_mean_var = av.var_of_cond_mean;
    return m;
}

AepVariance aep_variance(const DmcSpec& dmc, const Codebook& code, std::uint64_t guard,
                         const Parallel& par, Units units) {
    std::uint64_t sz = checked_space(dmc, code.n, guard);
    std::vector<double> py = induced_output(dmc, code, guard, par);
    std::vector<double> logp(size_t(sz), 0.0);
    for (std::uint64_t y = 0; y < sz; ++y) logp[size_t(y)] = py[size_t(y)] > 0.0 ? std::log(py[size_t(y)]) : 0.0;

    double mean_all = 0.0, m2_all = 0.0;
    std::vector<double> cond_mean(size_t(code.M), 0.0), cond_m2(size_t(code.M), 0.0);
    for (int i = 0; i < code.M; ++i) {
        const auto& w = code.words[size_t(i)];
        double mu = sharded_sum(par, sz, [&](std::uint64_t lo, std::uint64_t hi) {
            double s = 0.0;
            for (std::uint64_t y = lo; y < hi; ++y) s += word_outcome_prob(dmc, w, y) * logp[size_t(y)];
            return s;
        });
        double m2 = sharded_sum(par, sz, [&](std::uint64_t lo, std::uint64_t hi) {
            double s = 0.0;
            for (std::uint64_t y = lo; y < hi; ++y)
                s += word_outcome_prob(dmc, w, y) * logp[size_t(y)] * logp[size_t(y)];
            return s;
        });
        cond_mean[size_t(i)] = mu;
        cond_m2[size_t(i)] = m2;
        mean_all += mu / code.M;
        m2_all += m2 / code.M;
    }
    AepVariance out;
    out.units = units;
    double var_total = std::max(0.0, m2_all - mean_all * mean_all);
    double e_cond_var = 0.0, var_mean = 0.0;
    for (int i = 0; i < code.M; ++i) {
        double v = std::max(0.0, cond_m2[size_t(i)] - cond_mean[size_t(i)] * cond_mean[size_t(i)]);
        e_cond_var += v / code.M;
        var_mean += (cond_mean[size_t(i)] - mean_all) * (cond_mean[size_t(i)] - mean_all) / code.M;
    }
    out.var = var_total * units.scale2();
    out.expected_cond_var = e_cond_var * units.scale2();
    out.var_of_cond_mean = var_mean * units.scale2();
    out.split_resid = std::fabs(out.var - (out.expected_cond_var + out.var_of_cond_mean));
    return out;
}

CounterexampleResult counterexample_extend(const DmcSpec& dmc, const Codebook& base_code, int x0,
                                           double eps_target, const CapacitySolution& sol,
                                           std::uint64_t guard, const Parallel& par) {
    if (x0 < 0 || x0 >= dmc.input_size) throw FblabError("counterexample_extend: bad input letter");
    double per_letter_d = dmc_d_of_input_nats(dmc, sol.caod, x0);  // D(W_{x0} || P_Y*), nats
    if (!(per_letter_d > 0.0)) throw FblabError("counterexample_extend: D(W_x0 || P_Y*) must be positive");

    DecoderTable base_dec = ml_decode(dmc, base_code, guard, par);
    auto [base_avg, base_max] = exact_error(dmc, base_code, base_dec, par);
    if (!(base_max < eps_target)) throw FblabError("counterexample_extend: base max error must be below target");

    int copies = int(std::ceil((eps_target - base_max) / (1.0 - eps_target) * base_code.M));
    CounterexampleResult res;
    res.base_eps_max = base_max;
    res.copies_appended = copies;
    res.extended = base_code;
    res.extended.criterion = ErrorCriterion::avg_error;
    for (int r = 0; r < copies; ++r)
        res.extended.words.push_back(std::vector<int>(size_t(base_code.n), x0));
    res.extended.M = base_code.M + copies;

    DecoderTable dec = ml_decode(dmc, res.extended, guard, par);
    auto [ext_avg, ext_max] = exact_error(dmc, res.extended, dec, par);
    (void)ext_max;
    res.eps_avg_extended = ext_avg;

    // exact divergence decomposition against the caod product
    const Units units = sol.units;
    std::vector<double> qn = caod_product(sol, base_code.n, dmc.output_size, guard);
    std::vector<double> p_ext = induced_output(dmc, res.extended, guard, par);
    std::vector<double> p_base = induced_output(dmc, base_code, guard, par);
    double d_ext = kl_nats(std::span<const double>(p_ext), std::span<const double>(qn));
    double d_base = kl_nats(std::span<const double>(p_base), std::span<const double>(qn));
    double ps1 = double(copies) / res.extended.M;

    BoundReport rep;
    rep.name = "remark3_decomposition";
    rep.relation = "lhs>=rhs";
    rep.units = units.name();
    rep.lhs = d_ext * units.scale();
    rep.rhs = (ps1 * base_code.n * per_letter_d + (1.0 - ps1) * d_base - std::log(2.0)) * units.scale();
    rep.add_constant("P_S1", ps1);
    rep.add_constant("copies", copies);
    rep.add_constant("per_letter_D", per_letter_d * units.scale());
    rep.add_constant("D_base", d_base * units.scale());
    rep.add_constant("eps_avg_extended", ext_avg);
    rep.add_constant("eps_target", eps_target);
    rep.add_constant("base_eps_max", base_max);
    rep.finish_exact();
    if (ext_avg > eps_target + 1e-12) {
        rep.verdict = Verdict::fail;
        rep.note = "extended code exceeds the average-error target";
    }
    res.decomposition = rep;
    return res;
}

AwgnMcReport awgn_mc_report(const AwgnSpec& awgn, const Codebook& code, std::uint64_t samples,
                            std::uint64_t seed, const Parallel& par, Units units) {
    if (samples < 10000) throw FblabError("awgn_mc_report: need at least 1e4 samples");
    if (code.M > (1 << 16)) throw FblabError("awgn_mc_report: M exceeds the mixture guard");
    const int n = code.n, M = code.M;
    const double P = awgn.power;
    CounterRng rng(seed);

    // accumulators per shard, reduced deterministically
    const int NS = 64;
    std::vector<double> s_err(NS, 0.0), s_d(NS, 0.0), s_d2(NS, 0.0), s_l(NS, 0.0), s_l2(NS, 0.0),
        s_l3(NS, 0.0), s_l4(NS, 0.0);
    Parallel p = par;
    p.shards = NS;
    std::vector<double> y(static_cast<size_t>(n));
    (void)y;
    p.for_shards(samples, [&](int shard, std::uint64_t lo, std::uint64_t hi) {
        std::vector<double> yv(static_cast<size_t>(n));
        double err = 0.0, dsum = 0.0, d2 = 0.0, l = 0.0, l2 = 0.0, l3 = 0.0, l4 = 0.0;
        const double log_norm = -0.5 * n * std::log(2.0 * 3.14159265358979323846);
        for (std::uint64_t s = lo; s < hi; ++s) {
            int w = int(rng.bits(0, s) % std::uint64_t(M));
            const auto& cw = code.xwords[size_t(w)];
            for (int j = 0; j < n; ++j)
                yv[size_t(j)] = cw[size_t(j)] + rng.gaussian(1, s * std::uint64_t(n) + std::uint64_t(j));
            // nearest neighbor decode + mixture log-density via max-shift
            double best_m2 = kInf;
            int arg = 0;
            double mx = -kInf;
            std::vector<double>& sq = yv;  // reuse below without extra alloc
            (void)sq;
            double lse = 0.0;
            // first pass: min distance (and max exponent)
            std::vector<double> expo(static_cast<size_t>(M));
            for (int i = 0; i < M; ++i) {
                double d2i = 0.0;
                const auto& ci = code.xwords[size_t(i)];
                for (int j = 0; j < n; ++j) {
                    double df = yv[size_t(j)] - ci[size_t(j)];
                    d2i += df * df;
                }
                if (d2i < best_m2) {
                    best_m2 = d2i;
                    arg = i;
                }
                expo[size_t(i)] = -0.5 * d2i;
                mx = std::max(mx, expo[size_t(i)]);
            }
            for (int i = 0; i < M; ++i) lse += std::exp(expo[size_t(i)] - mx);
            double log_p = log_norm + mx + std::log(lse / M);
            double y2 = 0.0;
            for (int j = 0; j < n; ++j) y2 += yv[size_t(j)] * yv[size_t(j)];
            double log_pstar = -0.5 * n * std::log(2.0 * 3.14159265358979323846 * (1.0 + P)) -
                               y2 / (2.0 * (1.0 + P));
            double ratio = log_p - log_pstar;  // nats
            if (arg != w) err += 1.0;
            dsum += ratio;
            d2 += ratio * ratio;
            l += log_p;
            l2 += log_p * log_p;
            l3 += log_p * log_p * log_p;
            l4 += log_p * log_p * log_p * log_p;
        }
        s_err[size_t(shard)] = err;
        s_d[size_t(shard)] = dsum;
        s_d2[size_t(shard)] = d2;
        s_l[size_t(shard)] = l;
        s_l2[size_t(shard)] = l2;
        s_l3[size_t(shard)] = l3;
        s_l4[size_t(shard)] = l4;
    });
    auto reduce = [&](const std::vector<double>& v) {
        std::vector<double> cur = v;
        while (cur.size() > 1) {
            std::vector<double> nxt;
            for (size_t i = 0; i + 1 < cur.size(); i += 2) nxt.push_back(cur[i] + cur[i + 1]);
            if (cur.size() % 2) nxt.push_back(cur.back());
            cur.swap(nxt);
        }
        return cur[0];
    };
    double N = double(samples);
    double err = reduce(s_err), dsum = reduce(s_d), d2 = reduce(s_d2);
    double l = reduce(s_l), l2 = reduce(s_l2), l3 = reduce(s_l3), l4 = reduce(s_l4);

    AwgnMcReport rep;
    rep.samples = samples;
    rep.seed = seed;
    rep.units = units;
    rep.eps = binomial_ci(std::uint64_t(err), samples, 0.99);
    double dmean = dsum / N;
    double dvar = std::max(0.0, d2 / N - dmean * dmean);
    rep.d_out = mean_ci(dmean * units.scale(), dvar * units.scale2(), samples, 0.99);

    // variance of log p with a delta-method CI from the fourth central moment
    double lm = l / N;
    double c2 = std::max(0.0, l2 / N - lm * lm);
    double c3 = l3 / N - 3.0 * lm * l2 / N + 2.0 * lm * lm * lm;
    (void)c3;
    double m4 = l4 / N - 4.0 * lm * l3 / N + 6.0 * lm * lm * l2 / N - 3.0 * lm * lm * lm * lm;
    double var_of_var = std::max(0.0, m4 - c2 * c2);
    rep.aep_var = mean_ci(c2 * units.scale2(), var_of_var * units.scale2() * units.scale2(), samples, 0.99);

    if (M == 1) {
        double norm2 = 0.0;
        for (double v : code.xwords[0]) norm2 += v * v;
        rep.closed_form_d = awgn_d_of_word_nats(P, n, norm2) * units.scale();
    }
    return rep;
}

Codebook random_dmc_code(int n, int M, int xbase, std::uint64_t seed, bool distinct, ErrorCriterion crit) {
    Codebook c;
    c.n = n;
    c.M = M;
    c.criterion = crit;
    CounterRng rng(seed);
    std::set<std::vector<int>> seen;
    std::uint64_t ctr = 0;
    double total_words = std::pow(double(xbase), double(n));
    if (distinct && double(M) > total_words) throw FblabError("random_dmc_code: M exceeds alphabet^n");
    while (int(c.words.size()) < M) {
        std::vector<int> w(static_cast<size_t>(n));
        for (int j = 0; j < n; ++j) w[size_t(j)] = int(rng.bits(7, ctr++) % std::uint64_t(xbase));
        if (distinct && !seen.insert(w).second) continue;
        c.words.push_back(std::move(w));
    }
    return c;
}

JValue CodeMetrics::to_json() const {
    JValue j = JValue::object();
    j.set("units", units.name());
    j.set("eps_avg", eps_avg);
    j.set("eps_max", eps_max);
    j.set("D_out", D_out);
    j.set("D_cond_caod", D_cond_caod);
    j.set("I_code", I_code);
    j.set("H_out", H_out);
    j.set("aep_var", aep_var);
    j.set("aep_cond_var", aep_cond_var);
    j.set("aep_mean_var", aep_mean_var);
    j.set("identity_resid", identity_resid);
    j.set("recompute_resid", recompute_resid);
    JValue emp = JValue::array();
    for (const auto& e : empirical) {
        JValue je = JValue::object();
        je.set("k", e.k);
        je.set("d_to_caod_k", e.d_to_caod_k);
        je.set("dconvk_budget", e.dconvk_budget);
        je.set("dist", JValue::array_of(e.dist));
        emp.push_back(std::move(je));
    }
    j.set("empirical", std::move(emp));
    return j;
}

JValue AwgnMcReport::to_json() const {
    auto ci_json = [](const ConfidenceInterval& ci) {
        JValue j = JValue::object();
        j.set("estimate", ci.estimate);
        j.set("lo", ci.lo);
        j.set("hi", ci.hi);
        j.set("level", ci.level);
        return j;
    };
    JValue j = JValue::object();
    j.set("samples", std::int64_t(samples));
    j.set("seed", std::int64_t(seed));
    j.set("units", units.name());
    j.set("eps", ci_json(eps));
    j.set("d_out", ci_json(d_out));
    j.set("aep_var", ci_json(aep_var));
    if (closed_form_d >= 0.0) j.set("closed_form_d", closed_form_d);
    return j;
}

}  // namespace fblab

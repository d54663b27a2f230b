#include "fblab/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "fblab/capacity.hpp"
#include "fblab/channel.hpp"
#include "fblab/codes.hpp"
#include "fblab/concentration.hpp"
#include "fblab/converses.hpp"
#include "fblab/divergence_checks.hpp"
#include "fblab/gaussian_norms.hpp"
#include "fblab/np_test.hpp"
#include "fblab/transport.hpp"

namespace fblab {

const char* kToolVersion = "0.1.0";

void RunConfig::validate() const {
    if (enumeration_guard < (std::uint64_t(1) << 10)) throw FblabError("config: guard must be >= 2^10");
    if (!(tol > 0.0)) throw FblabError("config: tolerances must be positive");
    if (thread_count < 1) throw FblabError("config: thread count must be >= 1");
}

JValue RunConfig::to_json() const {
    JValue j = JValue::object();
    j.set("log_base", units.base == LogBase::bits ? 2 : JValue("e"));
    j.set("enumeration_guard", std::int64_t(enumeration_guard));
    j.set("master_seed", std::int64_t(master_seed));
    j.set("thread_count", thread_count);
    j.set("tol", tol);
    return j;
}

JValue make_envelope(const RunConfig& cfg,
                     const std::vector<std::pair<std::string, std::string>>& input_digests,
                     JValue payload) {
    JValue env = JValue::object();
    env.set("tool", "fblab");
    env.set("version", kToolVersion);
    env.set("config", cfg.to_json());
    JValue inputs = JValue::object();
    for (const auto& kv : input_digests) inputs.set(kv.first, "sha256:" + kv.second);
    env.set("inputs", std::move(inputs));
    auto now = std::chrono::system_clock::now().time_since_epoch();
    env.set("timestamp_unix_ms",
            std::int64_t(std::chrono::duration_cast<std::chrono::milliseconds>(now).count()));
    env.set("payload", std::move(payload));
    return env;
}

namespace {

int verdict_exit(const std::vector<Verdict>& vs) {
    bool inconclusive = false;
    for (Verdict v : vs) {
        if (v == Verdict::fail) return 2;
        if (v == Verdict::inconclusive) inconclusive = true;
    }
    return inconclusive ? 3 : 0;
}

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        if (cell == "inf") out.push_back(kInf);
        else out.push_back(std::stod(cell));
    }
    return out;
}

struct FSpec {
    std::string kind;
    std::vector<double> table;
    double normalizer = 1.0;
};

FSpec parse_f_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    FSpec f;
    f.kind = j.value("kind", std::string("table"));
    if (j.contains("table"))
        for (const auto& v : j["table"]) f.table.push_back(v.get<double>());
    f.normalizer = j.value("normalizer", 1.0);
    return f;
}

std::vector<double> f_outcome_table(const FSpec& f, const OutcomeSpace& space) {
    if (f.kind == "hamming_weight") return hamming_weight_table(space);
    if (f.kind == "per_letter") return per_letter_sum_table(space, f.table, f.normalizer);
    if (f.kind == "table") {
        if (f.table.size() != space.size()) throw FblabError("F table must cover the outcome space");
        return f.table;
    }
    throw FblabError("unknown F kind: " + f.kind);
}

void emit(const RunConfig& cfg, std::ostream& out, const JValue& envelope) {
    std::string text = envelope.dump();
    if (cfg.output_path.empty()) {
        out << text << "\n";
    } else {
        write_text_file(cfg.output_path, text + "\n");
    }
}

double exact_eps_for(const DmcSpec& dmc, const Codebook& code, const RunConfig& cfg) {
    DecoderTable dec = ml_decode(dmc, code, cfg.enumeration_guard, cfg.parallel());
    auto [avg, mx] = exact_error(dmc, code, dec, cfg.parallel());
    return code.criterion == ErrorCriterion::avg_error ? avg : mx;
}

}  // namespace

// ------------------------------------------------------------------ selftest

JValue selftest_payload(const RunConfig& cfg) {
    const Parallel par = cfg.parallel();
    const Units units = cfg.units;
    JValue payload = JValue::object();
    payload.set("suite", "selftest");
    payload.set("seed", std::int64_t(cfg.master_seed));

    {  // capacity closed forms
        JValue cap = JValue::object();
        CapacitySolution bsc = blahut_arimoto(DmcSpec::bsc(0.11), 1e-9, 200000, units);
        CapacitySolution bec = blahut_arimoto(DmcSpec::bec(0.5), 1e-9, 200000, units);
        auto [c_awgn, v_awgn] = awgn_capacity_dispersion(AwgnSpec{1.0}, units);
        cap.set("bsc11_C", bsc.C);
        cap.set("bsc11_V", bsc.V);
        cap.set("bec50_C", bec.C);
        cap.set("awgn1_C", c_awgn);
        cap.set("awgn1_V", v_awgn);
        payload.set("capacity", std::move(cap));
    }

    {  // exact NP values on seeded random pairs
        CounterRng rng(cfg.master_seed);
        JValue betas = JValue::array();
        for (int trial = 0; trial < 32; ++trial) {
            size_t k = 2 + rng.bits(11, std::uint64_t(trial)) % 7;
            std::vector<double> p(k), q(k);
            double sp = 0.0, sq = 0.0;
            for (size_t i = 0; i < k; ++i) {
                p[i] = rng.uniform(12, std::uint64_t(trial) * 64 + i) + 1e-3;
                q[i] = rng.uniform(13, std::uint64_t(trial) * 64 + i) + 1e-3;
                sp += p[i];
                sq += q[i];
            }
            for (size_t i = 0; i < k; ++i) {
                p[i] /= sp;
                q[i] /= sq;
            }
            double alpha = 0.1 + 0.8 * rng.uniform(14, std::uint64_t(trial));
            betas.push_back(beta_alpha(alpha, p, q, units).beta);
        }
        payload.set("np_betas", std::move(betas));
    }

    {  // exhaustive small meta-converse / converse sweep over BSC(0.2)
        DmcSpec bsc = DmcSpec::bsc(0.2);
        CapacitySolution sol = blahut_arimoto(bsc, 1e-10, 200000, units);
        int violations = 0, instances = 0, inconclusive = 0;
        for (int n = 1; n <= 3; ++n) {
            std::uint64_t words = std::uint64_t(1) << n;
            std::vector<double> qn = caod_product(sol, n, 2, cfg.enumeration_guard);
            for (std::uint64_t c0 = 0; c0 < words; ++c0)
                for (std::uint64_t c1 = c0 + 1; c1 < words; ++c1) {
                    Codebook code;
                    code.n = n;
                    code.M = 2;
                    code.criterion = ErrorCriterion::max_error;
                    for (std::uint64_t cw : {c0, c1}) {
                        std::vector<int> w(static_cast<size_t>(n));
                        for (int j = 0; j < n; ++j) w[size_t(j)] = int((cw >> j) & 1);
                        code.words.push_back(std::move(w));
                    }
                    double eps = exact_eps_for(bsc, code, cfg);
                    for (double alpha : {eps + 0.05, 0.9, 1.0}) {
                        if (alpha > 1.0) continue;
                        BoundReport r = metaconverse(bsc, code, qn, alpha, MetaconverseVariant::avg, 0.05,
                                                     cfg.enumeration_guard, par, units);
                        ++instances;
                        if (r.verdict == Verdict::fail) ++violations;
                    }
                    ProductQ q = ProductQ::iid(sol.caod, n);
                    BoundReport aug = augustin_bound(bsc, code, q, AugustinRhoMode::d_plus_delta,
                                                     std::nullopt, cfg.enumeration_guard, par, units);
                    BoundReport sfv = kl_lower_bound(bsc, code, q, KlLowerMode::sfvar, std::nullopt,
                                                     cfg.enumeration_guard, par, units);
                    instances += 2;
                    if (aug.verdict == Verdict::fail) ++violations;
                    if (sfv.verdict == Verdict::fail) ++violations;
                    if (aug.verdict == Verdict::inconclusive) ++inconclusive;
                }
        }
        JValue sweep = JValue::object();
        sweep.set("instances", instances);
        sweep.set("violations", violations);
        sweep.set("inconclusive", inconclusive);
        payload.set("converse_sweep", std::move(sweep));
    }

    {  // repetition-code metrics
        DmcSpec bsc = DmcSpec::bsc(0.11);
        CapacitySolution sol = blahut_arimoto(bsc, 1e-10, 200000, units);
        Codebook rep;
        rep.n = 3;
        rep.M = 2;
        rep.criterion = ErrorCriterion::max_error;
        rep.words = {{0, 0, 0}, {1, 1, 1}};
        CodeMetrics m = code_metrics(bsc, rep, sol, cfg.enumeration_guard, par);
        JValue jm = JValue::object();
        jm.set("eps_max", m.eps_max);
        jm.set("D_out", m.D_out);
        jm.set("I_code", m.I_code);
        jm.set("H_out", m.H_out);
        jm.set("aep_var", m.aep_var);
        jm.set("d1_emp", m.empirical[0].d_to_caod_k);
        payload.set("repetition_metrics", std::move(jm));
    }

    {  // transport identities on seeded pairs
        CounterRng rng(cfg.master_seed ^ 0xabcd);
        double max_w1_tv_diff = 0.0, max_gap = 0.0;
        for (int trial = 0; trial < 64; ++trial) {
            size_t k = 2 + rng.bits(21, std::uint64_t(trial)) % 6;
            std::vector<double> p(k), q(k);
            double sp = 0.0, sq = 0.0;
            for (size_t i = 0; i < k; ++i) {
                p[i] = rng.uniform(22, std::uint64_t(trial) * 64 + i) + 1e-3;
                q[i] = rng.uniform(23, std::uint64_t(trial) * 64 + i) + 1e-3;
                sp += p[i];
                sq += q[i];
            }
            for (size_t i = 0; i < k; ++i) {
                p[i] /= sp;
                q[i] /= sq;
            }
            TransportResult tr = wasserstein(hamming_transport(FiniteDist{p}, FiniteDist{q}));
            max_w1_tv_diff = std::max(max_w1_tv_diff, std::fabs(tr.value - tv_distance(p, q)));
            max_gap = std::max(max_gap, std::fabs(tr.duality_gap));
        }
        JValue jt = JValue::object();
        jt.set("max_w1_tv_diff", max_w1_tv_diff);
        jt.set("max_duality_gap", max_gap);
        payload.set("transport", std::move(jt));
    }

    {  // ratio lemma sweep
        CounterRng rng(cfg.master_seed ^ 0x5eed);
        int pass = 0, total = 128;
        for (int trial = 0; trial < total; ++trial) {
            size_t k = 2 + rng.bits(31, std::uint64_t(trial)) % 5;
            std::vector<double> v(k), pr(k);
            double s = 0.0;
            for (size_t i = 0; i < k; ++i) {
                v[i] = 0.05 + 2.0 * rng.uniform(32, std::uint64_t(trial) * 64 + i);
                pr[i] = rng.uniform(33, std::uint64_t(trial) * 64 + i) + 1e-3;
                s += pr[i];
            }
            for (size_t i = 0; i < k; ++i) pr[i] /= s;
            double mean = 0.0;
            for (size_t i = 0; i < k; ++i) mean += pr[i] * v[i];
            for (size_t i = 0; i < k; ++i) v[i] /= std::max(1.0, mean);  // force E[X] <= 1
            if (ratio_mean_lemma_check(v, pr).passed()) ++pass;
        }
        JValue jr = JValue::object();
        jr.set("pass", pass);
        jr.set("total", total);
        payload.set("ratio_lemma", std::move(jr));
    }

    {  // concentration transfer on a fixed small code
        DmcSpec bsc = DmcSpec::bsc(0.11);
        CapacitySolution sol = blahut_arimoto(bsc, 1e-10, 200000, units);
        Codebook code = random_dmc_code(6, 4, 2, cfg.master_seed + 17);
        OutcomeSpace sp{6, 2};
        std::vector<double> f = hamming_weight_table(sp);
        ConcentrationCert cert = make_cert_azuma(6, 1.0);
        std::vector<double> py = induced_output(bsc, code, cfg.enumeration_guard, par);
        std::vector<double> qn = caod_product(sol, 6, 2, cfg.enumeration_guard);
        BoundReport p1 = expectation_transfer(f, py, qn, cert);
        JValue jc = JValue::object();
        jc.set("prop1_lhs", p1.lhs);
        jc.set("prop1_rhs", p1.rhs);
        jc.set("prop1_verdict", verdict_name(p1.verdict));
        payload.set("concentration", std::move(jc));
    }

    {  // AWGN Monte Carlo determinism probe
        GaussianGenSpec gs;
        gs.kind = GaussianKind::spherical;
        gs.n = 8;
        gs.M = 4;
        gs.power = 1.0;
        gs.seed = cfg.master_seed + 29;
        GenerateResult gen = generate_gaussian_code(gs);
        AwgnMcReport mc = awgn_mc_report(AwgnSpec{1.0}, gen.code, 20000, cfg.master_seed + 31, par, units);
        JValue jm = JValue::object();
        jm.set("eps_estimate", mc.eps.estimate);
        jm.set("d_out_estimate", mc.d_out.estimate);
        jm.set("aep_var_estimate", mc.aep_var.estimate);
        payload.set("awgn_mc", std::move(jm));
    }

    {  // norm profiles
        GaussianGenSpec gs;
        gs.kind = GaussianKind::iid_gaussian;
        gs.n = 32;
        gs.M = 64;
        gs.power = 1.0;
        gs.seed = cfg.master_seed + 41;
        GenerateResult gen = generate_gaussian_code(gs);
        std::vector<double> qs = {1.0, 2.0, 4.0, kInf};
        LqProfile prof = lq_profile(gen.code, qs);
        JValue jn = JValue::object();
        jn.set("medians", JValue::array_of(prof.median));
        jn.set("mean_l4_pow4", prof.mean_l4_pow4);
        jn.set("rescaled", gen.rescaled_count);
        payload.set("norms", std::move(jn));
    }

    return payload;
}

// -------------------------------------------------------------------- sweep

SweepOutput run_sweep(const RunConfig& cfg, const std::string& spec_json) {
    nlohmann::json spec = nlohmann::json::parse(spec_json);
    std::string family = spec.at("family").get<std::string>();
    std::vector<int> n_grid;
    for (const auto& v : spec.at("n_grid")) n_grid.push_back(v.get<int>());
    std::vector<std::string> metrics;
    for (const auto& v : spec.value("metrics", nlohmann::json::array()))
        metrics.push_back(v.get<std::string>());
    std::uint64_t seed = spec.value("seed", std::uint64_t(1));
    const Parallel par = cfg.parallel();
    const Units units = cfg.units;

    SweepOutput out;
    std::ostringstream csv;
    csv << "n";
    for (const auto& m : metrics) csv << "," << m;
    csv << "\n";
    JValue rows = JValue::array();

    for (int n : n_grid) {
        JValue row = JValue::object();
        row.set("n", n);
        csv << n;
        try {
            std::vector<std::pair<std::string, double>> values;
            if (family == "dmc_code" || family == "merged_composition") {
                DmcSpec dmc = spec.contains("channel")
                                  ? as_dmc(parse_channel_json(spec["channel"].dump()))
                                  : DmcSpec::bsc(spec.value("bsc", 0.11));
                CapacitySolution sol = blahut_arimoto(dmc, 1e-10, 200000, units);
                Codebook code;
                if (family == "merged_composition") {
                    int M = spec.value("M", 2);
                    code.n = n;
                    code.M = M;
                    code.criterion = ErrorCriterion::avg_error;
                    for (int i = 0; i < M; ++i)
                        code.words.push_back(std::vector<int>(size_t(n), i % 2 == 0 ? 0 : 1));
                } else {
                    double rate_frac = spec.value("rate_frac", 0.8);
                    double log_m = rate_frac * sol.C / units.scale() * n;  // nats
                    int M = std::max(2, int(std::llround(std::exp(log_m))));
                    code = random_dmc_code(n, M, dmc.input_size, seed + std::uint64_t(n) * 1315423911ULL);
                }
                CodeMetrics cm = code_metrics(dmc, code, sol, cfg.enumeration_guard, par);
                values = {{"eps_avg", cm.eps_avg},
                          {"eps_max", cm.eps_max},
                          {"D_out", cm.D_out},
                          {"I_code", cm.I_code},
                          {"H_out", cm.H_out},
                          {"aep_var", cm.aep_var},
                          {"aep_var_over_n", cm.aep_var / n},
                          {"aep_var_over_n2", cm.aep_var / double(n) / double(n)},
                          {"d1_emp", cm.empirical.empty() ? 0.0 : cm.empirical[0].d_to_caod_k},
                          {"M", double(code.M)}};
                if (std::find(metrics.begin(), metrics.end(), "stein_proxy") != metrics.end()) {
                    SteinScan ss = stein_scan(dmc, code, sol, 0.5, cfg.enumeration_guard, par);
                    values.emplace_back("stein_proxy", ss.exponent_proxy);
                }
            } else if (family == "gaussian") {
                GaussianGenSpec gs;
                std::string kind = spec.value("kind", std::string("iid"));
                gs.kind = kind == "sphere" ? GaussianKind::spherical
                          : kind == "peaky" ? GaussianKind::peaky
                                            : GaussianKind::iid_gaussian;
                gs.power = spec.value("P", 1.0);
                gs.M = spec.value("M", 1024);
                gs.seed = seed + std::uint64_t(n) * 2654435761ULL;
                gs.n = n;
                std::string drule = spec.value("delta_rule", std::string("none"));
                if (drule == "const") gs.delta_n = spec.value("delta", 0.1);
                else if (drule == "inv_sqrt") gs.delta_n = 1.0 / std::sqrt(double(n));
                GenerateResult gen = generate_gaussian_code(gs);
                double q = spec.value("q", 4.0);
                std::vector<double> qs = {q, kInf};
                LqProfile prof = lq_profile(gen.code, qs);
                values = {{"median_lq", prof.median[0]},
                          {"linf_median", prof.median[1]},
                          {"mean_l4_pow4", prof.mean_l4_pow4},
                          {"rescaled", double(gen.rescaled_count)}};
            } else {
                throw FblabError("sweep: unknown family " + family);
            }
            for (const auto& m : metrics) {
                double v = kInf;
                bool found = false;
                for (const auto& kv : values)
                    if (kv.first == m) {
                        v = kv.second;
                        found = true;
                        break;
                    }
                if (!found) throw FblabError("sweep: unknown metric " + m);
                row.set(m, v);
                csv << "," << format_sig12(v);
            }
            row.set("status", "ok");
        } catch (const std::exception& e) {
            row.set("status", std::string("failed: ") + e.what());
            csv << ",failed";
        }
        csv << "\n";
        rows.push_back(std::move(row));
    }
    out.series.set("family", family);
    out.series.set("rows", std::move(rows));
    out.csv = csv.str();
    return out;
}

// ------------------------------------------------------------------ dispatch

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"finite-blocklength channel code laboratory"};
    app.fallthrough(true);

    RunConfig cfg;
    std::string base_str = "2";
    app.add_option("--base", base_str, "log base: 2 or e")->check(CLI::IsMember({"2", "e"}));
    app.add_option("--guard", cfg.enumeration_guard, "enumeration guard (states)");
    app.add_option("--seed", cfg.master_seed, "master seed");
    app.add_option("--threads", cfg.thread_count, "worker threads")->envname("FBLAB_THREADS");
    app.add_option("--out", cfg.output_path, "write the report envelope to this path");
    app.add_option("--tol", cfg.tol, "solver tolerance");

    std::string channel_path, code_path, p_path, q_path, cost_path, f_path, a_path, spec_path, csv_path;
    double alpha = 0.5, delta = 0.05, t_param = 0.5, theta = 1.0, eps_opt = -1.0, power_opt = -1.0;
    std::string op, variant = "avg", bound_name, gen_kind = "iid", q_list = "1,2,4,inf", tgrid_str;
    std::uint64_t mc_samples = 0;
    int gen_n = 128, gen_m = 1024, prop = 1;
    double gen_p = 1.0, gen_delta = 0.1;
    double log_m_opt = -1.0;
    int n_opt = -1;

    CLI::App* c_cap = app.add_subcommand("capacity", "capacity, caod, dispersion");
    c_cap->add_option("--channel", channel_path)->required();

    CLI::App* c_div = app.add_subcommand("div", "divergences and transport distances");
    c_div->add_option("--op", op, "kl|tv|w1|w2")->required();
    c_div->add_option("--p", p_path)->required();
    c_div->add_option("--q", q_path)->required();
    c_div->add_option("--cost", cost_path);

    CLI::App* c_beta = app.add_subcommand("beta", "exact Neyman-Pearson beta");
    c_beta->add_option("--alpha", alpha)->required();
    c_beta->add_option("--p", p_path)->required();
    c_beta->add_option("--q", q_path)->required();

    CLI::App* c_meta = app.add_subcommand("metaconverse", "output-distribution meta-converse");
    c_meta->add_option("--channel", channel_path)->required();
    c_meta->add_option("--code", code_path)->required();
    c_meta->add_option("--alpha", alpha)->required();
    c_meta->add_option("--variant", variant)->check(CLI::IsMember({"avg", "max"}));
    c_meta->add_option("--delta", delta);

    CLI::App* c_bound = app.add_subcommand("bound", "converse bound evaluation");
    c_bound->add_option("--name", bound_name, "augustin|sf|sfvar|outkl|tilt")->required();
    c_bound->add_option("--channel", channel_path)->required();
    c_bound->add_option("--code", code_path);
    c_bound->add_option("--eps", eps_opt, "error probability (default: exact code error)");
    c_bound->add_option("--t", t_param);
    c_bound->add_option("--F", f_path);
    c_bound->add_option("--logM", log_m_opt);
    c_bound->add_option("--n", n_opt);

    CLI::App* c_an = app.add_subcommand("analyze", "exact or MC code statistics");
    c_an->add_option("--channel", channel_path)->required();
    c_an->add_option("--code", code_path)->required();
    c_an->add_option("--mc", mc_samples, "Monte Carlo samples (AWGN)");

    CLI::App* c_conc = app.add_subcommand("conc", "concentration transfer checks");
    c_conc->add_option("--channel", channel_path)->required();
    c_conc->add_option("--code", code_path)->required();
    c_conc->add_option("--F", f_path)->required();
    c_conc->add_option("--prop", prop)->check(CLI::Range(1, 3));
    c_conc->add_option("--theta", theta);
    c_conc->add_option("--tgrid", tgrid_str, "comma-separated deviations");

    CLI::App* c_norms = app.add_subcommand("norms", "Gaussian codebook norm profiles");
    c_norms->add_option("--gen", gen_kind)->check(CLI::IsMember({"iid", "sphere", "peaky"}));
    c_norms->add_option("--n", gen_n);
    c_norms->add_option("--M", gen_m);
    c_norms->add_option("--P", gen_p);
    c_norms->add_option("--delta", gen_delta);
    c_norms->add_option("--q", q_list);

    CLI::App* c_qform = app.add_subcommand("qform", "quadratic form isotropy report");
    c_qform->add_option("--code", code_path)->required();
    c_qform->add_option("--A", a_path)->required();
    c_qform->add_option("--eps", eps_opt)->required();
    c_qform->add_option("--P", power_opt);
    c_qform->add_option("--channel", channel_path);

    CLI::App* c_sweep = app.add_subcommand("sweep", "n-grid experiment series");
    c_sweep->add_option("--spec", spec_path)->required();
    c_sweep->add_option("--csv", csv_path, "also write a CSV table here");

    CLI::App* c_self = app.add_subcommand("selftest", "deterministic small-instance battery");
    (void)c_self;

    app.require_subcommand(1);

    std::vector<const char*> argv;
    argv.push_back("fblab");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        std::string name = e.get_name();
        if (name == "CallForHelp" || name == "CallForAllHelp" || name == "CallForVersion") {
            CLI::App* help_app = &app;
            for (auto* sub : app.get_subcommands())
                help_app = sub;
            out << help_app->help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        cfg.units = base_str == "e" ? Units::nats() : Units::bits();
        cfg.validate();
        const Parallel par = cfg.parallel();
        const Units units = cfg.units;
        std::vector<std::pair<std::string, std::string>> digests;
        auto digest_file = [&](const std::string& label, const std::string& path) {
            if (!path.empty()) digests.emplace_back(label, sha256_file_hex(path));
        };
        digest_file("channel", channel_path);
        digest_file("code", code_path);
        digest_file("p", p_path);
        digest_file("q", q_path);
        digest_file("cost", cost_path);
        digest_file("F", f_path);
        digest_file("A", a_path);
        digest_file("spec", spec_path);

        JValue payload = JValue::object();
        std::vector<Verdict> verdicts;

        if (*c_cap) {
            Channel ch = load_channel(channel_path);
            CapacitySolution sol = solve_capacity(ch, cfg.tol, 200000, units);
            BoundReport audit = caod_audit(ch, sol, std::max(cfg.tol, 1e-9));
            payload = sol.to_json();
            payload.set("caod_audit", audit.to_json());
            verdicts.push_back(audit.verdict);
        } else if (*c_div) {
            FiniteDist p{parse_prob_vector(read_text_file(p_path), "p")};
            FiniteDist q{parse_prob_vector(read_text_file(q_path), "q")};
            p.validate(1e-9);
            q.validate(1e-9);
            payload.set("op", op);
            if (op == "kl") {
                payload.set("value", kl_nats(p, q) * units.scale());
                payload.set("units", units.name());
            } else if (op == "tv") {
                payload.set("value", tv_distance(p, q));
            } else if (op == "w1" || op == "w2") {
                TransportProblem prob;
                if (!cost_path.empty()) {
                    prob.cost = parse_cost_csv(read_text_file(cost_path));
                    prob.source = p;
                    prob.target = q;
                    prob.order = op == "w2" ? 2 : 1;
                } else {
                    prob = hamming_transport(p, q, op == "w2" ? 2 : 1);
                }
                TransportResult tr = wasserstein(prob);
                payload.set("value", tr.value);
                payload.set("duality_gap", tr.duality_gap);
                payload.set("marginal_err", tr.marginal_err);
                JValue coup = JValue::array();
                for (const auto& row : tr.coupling) coup.push_back(JValue::array_of(row));
                payload.set("coupling", std::move(coup));
            } else {
                throw FblabError("div: unknown op " + op);
            }
        } else if (*c_beta) {
            FiniteDist p{parse_prob_vector(read_text_file(p_path), "p")};
            FiniteDist q{parse_prob_vector(read_text_file(q_path), "q")};
            p.validate(1e-9);
            q.validate(1e-9);
            BetaValue bv = beta_alpha(alpha, p.masses, q.masses, units);
            payload.set("alpha", bv.alpha);
            payload.set("beta", bv.beta);
            payload.set("tau", bv.test.tau);
            payload.set("threshold_log_ratio", bv.test.threshold_log_ratio);
            payload.set("achieved_alpha", bv.test.achieved_alpha);
        } else if (*c_meta) {
            Channel ch = load_channel(channel_path);
            if (!is_dmc(ch)) throw FblabError("metaconverse: DMC only");
            const DmcSpec& dmc = as_dmc(ch);
            Codebook code = Codebook::load(code_path);
            code.validate(ch);
            CapacitySolution sol = blahut_arimoto(dmc, cfg.tol, 200000, units);
            std::vector<double> qn = caod_product(sol, code.n, dmc.output_size, cfg.enumeration_guard);
            BoundReport rep = metaconverse(dmc, code, qn, alpha,
                                           variant == "max" ? MetaconverseVariant::max
                                                            : MetaconverseVariant::avg,
                                           delta, cfg.enumeration_guard, par, units);
            payload = rep.to_json();
            verdicts.push_back(rep.verdict);
        } else if (*c_bound) {
            Channel ch = load_channel(channel_path);
            if (bound_name == "outkl") {
                CapacitySolution sol = solve_capacity(ch, cfg.tol, 200000, units);
                double log_m, eps = eps_opt;
                int n;
                std::optional<double> exact_d;
                if (!code_path.empty()) {
                    Codebook code = Codebook::load(code_path);
                    code.validate(ch);
                    n = code.n;
                    log_m = std::log(double(code.M)) * units.scale();
                    if (is_dmc(ch)) {
                        const DmcSpec& dmc = as_dmc(ch);
                        CodeMetrics cm = code_metrics(dmc, code, sol, cfg.enumeration_guard, par);
                        exact_d = cm.D_out;
                        if (eps < 0.0)
                            eps = code.criterion == ErrorCriterion::avg_error ? cm.eps_avg : cm.eps_max;
                    }
                } else {
                    if (n_opt < 0 || log_m_opt < 0.0 || eps_opt < 0.0)
                        throw FblabError("bound outkl: need --code or all of --n --logM --eps");
                    n = n_opt;
                    log_m = log_m_opt;
                }
                if (eps < 0.0) throw FblabError("bound outkl: eps unavailable");
                BoundReport rep = output_kl_upper(ch, sol, n, log_m, eps, exact_d);
                payload = rep.to_json();
                verdicts.push_back(rep.verdict);
            } else {
                if (!is_dmc(ch)) throw FblabError("bound: this bound requires a DMC");
                const DmcSpec& dmc = as_dmc(ch);
                Codebook code = Codebook::load(code_path);
                code.validate(ch);
                CapacitySolution sol = blahut_arimoto(dmc, cfg.tol, 200000, units);
                ProductQ q = ProductQ::iid(sol.caod, code.n);
                BoundReport rep;
                if (bound_name == "augustin") {
                    rep = augustin_bound(dmc, code, q, AugustinRhoMode::d_plus_delta, std::nullopt,
                                         cfg.enumeration_guard, par, units);
                } else if (bound_name == "sf") {
                    rep = kl_lower_bound(dmc, code, q, KlLowerMode::sf, std::nullopt,
                                         cfg.enumeration_guard, par, units);
                } else if (bound_name == "sfvar") {
                    rep = kl_lower_bound(dmc, code, q, KlLowerMode::sfvar, std::nullopt,
                                         cfg.enumeration_guard, par, units);
                } else if (bound_name == "tilt") {
                    if (f_path.empty()) throw FblabError("bound tilt: --F required");
                    FSpec f = parse_f_json(read_text_file(f_path));
                    OutcomeSpace sp{code.n, dmc.output_size};
                    std::vector<double> table = f_outcome_table(f, sp);
                    rep = tilted_bound(dmc, code, q, table, t_param, std::nullopt, std::nullopt,
                                       cfg.enumeration_guard, par);
                } else {
                    throw FblabError("bound: unknown name " + bound_name);
                }
                payload = rep.to_json();
                verdicts.push_back(rep.verdict);
            }
        } else if (*c_an) {
            Channel ch = load_channel(channel_path);
            Codebook code = Codebook::load(code_path);
            code.validate(ch);
            if (is_dmc(ch)) {
                const DmcSpec& dmc = as_dmc(ch);
                CapacitySolution sol = blahut_arimoto(dmc, cfg.tol, 200000, units);
                CodeMetrics cm = code_metrics(dmc, code, sol, cfg.enumeration_guard, par);
                payload = cm.to_json();
            } else {
                std::uint64_t samples = mc_samples ? mc_samples : 100000;
                AwgnMcReport rep = awgn_mc_report(as_awgn(ch), code, samples, cfg.master_seed, par, units);
                payload = rep.to_json();
            }
        } else if (*c_conc) {
            Channel ch = load_channel(channel_path);
            if (!is_dmc(ch)) throw FblabError("conc: DMC only");
            const DmcSpec& dmc = as_dmc(ch);
            Codebook code = Codebook::load(code_path);
            code.validate(ch);
            CapacitySolution sol = blahut_arimoto(dmc, cfg.tol, 200000, units);
            FSpec f = parse_f_json(read_text_file(f_path));
            OutcomeSpace sp{code.n, dmc.output_size};
            if (prop == 3) {
                if (f.table.empty()) throw FblabError("conc prop 3: single-letter table required");
                BoundReport rep = cramer_transfer(f.table, theta, dmc, code, sol, cfg.enumeration_guard, par);
                payload = rep.to_json();
                verdicts.push_back(rep.verdict);
            } else {
                std::vector<double> table = f_outcome_table(f, sp);
                double lip = lipschitz_constant(table, sp, cfg.enumeration_guard);
                ConcentrationCert cert = make_cert_azuma(code.n, lip);
                if (prop == 1) {
                    std::vector<double> py = induced_output(dmc, code, cfg.enumeration_guard, par);
                    std::vector<double> qn = caod_product(sol, code.n, dmc.output_size, cfg.enumeration_guard);
                    BoundReport rep = expectation_transfer(table, py, qn, cert);
                    payload = rep.to_json();
                    payload.set("lipschitz", lip);
                    verdicts.push_back(rep.verdict);
                } else {
                    std::vector<double> tg = tgrid_str.empty() ? std::vector<double>{0.0, 1.0, 2.0, 4.0, 8.0}
                                                               : parse_number_list(tgrid_str);
                    TailTransfer tt = tail_transfer(table, dmc, code, sol, cert, tg, cfg.enumeration_guard, par);
                    JValue tails = JValue::array();
                    for (const auto& r : tt.tails) {
                        tails.push_back(r.to_json());
                        verdicts.push_back(r.verdict);
                    }
                    payload.set("tails", std::move(tails));
                    payload.set("variance", tt.variance.to_json());
                    verdicts.push_back(tt.variance.verdict);
                }
            }
        } else if (*c_norms) {
            GaussianGenSpec gs;
            gs.kind = gen_kind == "sphere" ? GaussianKind::spherical
                      : gen_kind == "peaky" ? GaussianKind::peaky
                                            : GaussianKind::iid_gaussian;
            gs.n = gen_n;
            gs.M = gen_m;
            gs.power = gen_p;
            gs.seed = cfg.master_seed;
            gs.delta_n = gen_delta;
            GenerateResult gen = generate_gaussian_code(gs);
            std::vector<double> qs = parse_number_list(q_list);
            LqProfile prof = lq_profile(gen.code, qs);
            payload.set("kind", gen_kind);
            payload.set("n", gen_n);
            payload.set("M", gen_m);
            payload.set("P", gen_p);
            payload.set("rescaled", gen.rescaled_count);
            payload.set("qs", JValue::array_of(prof.qs));
            payload.set("median", JValue::array_of(prof.median));
            payload.set("upper_half_quantile", JValue::array_of(prof.upper_half_quantile));
            payload.set("mean_l4_pow4", prof.mean_l4_pow4);
        } else if (*c_qform) {
            double power = power_opt;
            if (!channel_path.empty()) power = as_awgn(load_channel(channel_path)).power;
            if (power <= 0.0) throw FblabError("qform: provide --P or an AWGN --channel");
            Codebook code = Codebook::load(code_path);
            std::vector<std::vector<double>> a_mat = parse_cost_csv(read_text_file(a_path));
            QuadraticFormReport rep = quadratic_form_report(AwgnSpec{power}, code, a_mat, eps_opt);
            payload.set("bound", rep.bound.to_json());
            payload.set("refinement", rep.refinement.to_json());
            payload.set("a_eig_min", rep.a_eig_min);
            payload.set("a_eig_max", rep.a_eig_max);
            payload.set("sigma_eig_min", rep.sigma_eig_min);
            payload.set("sigma_eig_max", rep.sigma_eig_max);
            verdicts.push_back(rep.bound.verdict);
            verdicts.push_back(rep.refinement.verdict);
        } else if (*c_sweep) {
            SweepOutput so = run_sweep(cfg, read_text_file(spec_path));
            payload = std::move(so.series);
            if (!csv_path.empty()) write_text_file(csv_path, so.csv);
            else payload.set("csv", so.csv);
        } else if (*c_self) {
            payload = selftest_payload(cfg);
        }

        emit(cfg, out, make_envelope(cfg, digests, std::move(payload)));
        return verdict_exit(verdicts);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace fblab

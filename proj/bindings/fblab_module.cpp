#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "fblab/capacity.hpp"
#include "fblab/channel.hpp"
#include "fblab/cli.hpp"
#include "fblab/codes.hpp"
#include "fblab/gaussian_norms.hpp"
#include "fblab/np_test.hpp"
#include "fblab/transport.hpp"

namespace py = pybind11;
using namespace fblab;

namespace {

Units units_of(const std::string& base) {
    if (base == "e" || base == "nats") return Units::nats();
    return Units::bits();
}

py::dict capacity_py(const std::string& channel_json, double tol, const std::string& base) {
    Channel ch = parse_channel_json(channel_json);
    CapacitySolution sol = solve_capacity(ch, tol, 200000, units_of(base));
    py::dict d;
    d["C"] = sol.C;
    d["V"] = sol.V;
    d["a1"] = sol.a1;
    d["gap"] = sol.gap;
    d["units"] = std::string(sol.units.name());
    if (!sol.is_awgn()) {
        d["input_dist"] = sol.input_dist;
        d["caod"] = sol.caod;
        d["d_per_input"] = sol.d_per_input;
    } else {
        d["caod_variance"] = 1.0 + sol.awgn_power;
    }
    return d;
}

py::dict beta_alpha_py(double alpha, const std::vector<double>& p, const std::vector<double>& q,
                       const std::string& base) {
    BetaValue bv = beta_alpha(alpha, p, q, units_of(base));
    py::dict d;
    d["alpha"] = bv.alpha;
    d["beta"] = bv.beta;
    d["tau"] = bv.test.tau;
    d["achieved_alpha"] = bv.test.achieved_alpha;
    d["threshold_log_ratio"] = bv.test.threshold_log_ratio;
    return d;
}

py::dict wasserstein_py(const std::vector<double>& p, const std::vector<double>& q,
                        const std::vector<std::vector<double>>& cost, int order) {
    TransportProblem prob;
    prob.source = FiniteDist{p};
    prob.target = FiniteDist{q};
    prob.order = order;
    if (cost.empty()) prob = hamming_transport(FiniteDist{p}, FiniteDist{q}, order);
    else prob.cost = cost;
    TransportResult tr = wasserstein(prob);
    py::dict d;
    d["value"] = tr.value;
    d["coupling"] = tr.coupling;
    d["duality_gap"] = tr.duality_gap;
    d["dual_u"] = tr.dual_u;
    d["dual_v"] = tr.dual_v;
    return d;
}

py::dict analyze_py(const std::string& channel_json, const std::string& code_json, double tol,
                    const std::string& base) {
    Channel ch = parse_channel_json(channel_json);
    Codebook code = Codebook::parse_json(code_json);
    code.validate(ch);
    if (!is_dmc(ch)) throw FblabError("analyze: use awgn_mc for AWGN codebooks");
    const DmcSpec& dmc = as_dmc(ch);
    CapacitySolution sol = blahut_arimoto(dmc, tol, 200000, units_of(base));
    CodeMetrics cm = code_metrics(dmc, code, sol);
    py::dict d;
    d["eps_avg"] = cm.eps_avg;
    d["eps_max"] = cm.eps_max;
    d["D_out"] = cm.D_out;
    d["I_code"] = cm.I_code;
    d["H_out"] = cm.H_out;
    d["aep_var"] = cm.aep_var;
    d["identity_resid"] = cm.identity_resid;
    return d;
}

py::dict generate_py(const std::string& kind, int n, int m, double power, std::uint64_t seed,
                     double delta) {
    GaussianGenSpec gs;
    gs.kind = kind == "sphere" ? GaussianKind::spherical
              : kind == "peaky" ? GaussianKind::peaky
                                : GaussianKind::iid_gaussian;
    gs.n = n;
    gs.M = m;
    gs.power = power;
    gs.seed = seed;
    gs.delta_n = delta;
    GenerateResult gen = generate_gaussian_code(gs);
    py::dict d;
    d["words"] = gen.code.xwords;
    d["rescaled"] = gen.rescaled_count;
    return d;
}

int cli_py(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = dispatch(args, out, err);
    py::print(out.str());
    if (!err.str().empty()) py::print(err.str());
    return code;
}

std::string selftest_py(std::uint64_t seed, int threads) {
    RunConfig cfg;
    cfg.master_seed = seed;
    cfg.thread_count = threads;
    return selftest_payload(cfg).dump();
}

}  // namespace

PYBIND11_MODULE(_fblab, m) {
    m.doc() = "finite-blocklength channel code laboratory";
    m.def("capacity", &capacity_py, py::arg("channel_json"), py::arg("tol") = 1e-9,
          py::arg("base") = "2");
    m.def("kl", [](const std::vector<double>& p, const std::vector<double>& q, const std::string& base) {
              return kl_nats(std::span<const double>(p), std::span<const double>(q)) * units_of(base).scale();
          },
          py::arg("p"), py::arg("q"), py::arg("base") = "2");
    m.def("tv", [](const std::vector<double>& p, const std::vector<double>& q) {
              return tv_distance(std::span<const double>(p), std::span<const double>(q));
          });
    m.def("beta_alpha", &beta_alpha_py, py::arg("alpha"), py::arg("p"), py::arg("q"),
          py::arg("base") = "2");
    m.def("wasserstein", &wasserstein_py, py::arg("p"), py::arg("q"),
          py::arg("cost") = std::vector<std::vector<double>>{}, py::arg("order") = 1);
    m.def("analyze", &analyze_py, py::arg("channel_json"), py::arg("code_json"), py::arg("tol") = 1e-9,
          py::arg("base") = "2");
    m.def("generate_code", &generate_py, py::arg("kind"), py::arg("n"), py::arg("M"),
          py::arg("power") = 1.0, py::arg("seed") = 1, py::arg("delta") = 0.0);
    m.def("selftest_payload", &selftest_py, py::arg("seed") = 1, py::arg("threads") = 1);
    m.def("cli", &cli_py, py::arg("args"));
    m.attr("__version__") = kToolVersion;
}

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fblab/capacity.hpp"
#include "fblab/channel.hpp"
#include "fblab/report.hpp"

namespace fblab {

enum class ErrorCriterion { max_error, avg_error };

// M codewords of blocklength n; symbol indices for a DMC, real vectors for
// AWGN. Repeated codewords are legal (multiset semantics).
struct Codebook {
    int n = 0;
    int M = 0;
    bool awgn_alphabet = false;
    std::vector<std::vector<int>> words;
    std::vector<std::vector<double>> xwords;
    ErrorCriterion criterion = ErrorCriterion::max_error;

    void validate(const Channel& ch, double power_tol = 1e-9) const;
    static Codebook parse_json(const std::string& json_text);
    static Codebook load(const std::string& path);
    std::string to_json() const;
};

// Mixed-radix enumeration of Y^n; outcome index digits are y_1 (least
// significant) through y_n.
struct OutcomeSpace {
    int n = 0;
    int ybase = 0;
    std::uint64_t size() const;
    void digits(std::uint64_t index, std::span<int> out) const;
};

inline constexpr std::uint64_t kDefaultGuard = std::uint64_t(1) << 24;

double word_outcome_prob(const DmcSpec& dmc, std::span<const int> word, std::uint64_t yindex);

struct DecoderTable {
    std::vector<std::uint32_t> map;  // outcome index -> codeword index
};

// ML decoding with ties broken to the lowest codeword index.
DecoderTable ml_decode(const DmcSpec& dmc, const Codebook& code,
                       std::uint64_t guard = kDefaultGuard, const Parallel& par = Parallel::single());

// exact (eps_avg, eps_max)
std::pair<double, double> exact_error(const DmcSpec& dmc, const Codebook& code,
                                      const DecoderTable& dec, const Parallel& par = Parallel::single());

// P_{Y^n} with equiprobable codewords, as an explicit vector over outcomes.
std::vector<double> induced_output(const DmcSpec& dmc, const Codebook& code,
                                   std::uint64_t guard = kDefaultGuard,
                                   const Parallel& par = Parallel::single());

// caod n-fold product over outcome indices.
std::vector<double> caod_product(const CapacitySolution& sol, int n, int ybase,
                                 std::uint64_t guard = kDefaultGuard);

struct EmpiricalOrderK {
    int k = 0;
    std::vector<double> dist;     // k-th order empirical output distribution
    double d_to_caod_k = 0.0;     // D(P-bar^{(k)} || (P_Y*)^k), units
    double dconvk_budget = 0.0;   // (k/(n-k+1)) D(P_{Y^n} || P*^n), units
};

struct CodeMetrics {
    double eps_avg = 0.0, eps_max = 0.0;
    double D_out = 0.0;        // D(P_{Y^n} || P*^n)
    double D_cond_caod = 0.0;  // D(P_{Y^n|X^n} || P*^n | P_X)
    double I_code = 0.0;       // I(X^n; Y^n)
    double H_out = 0.0;        // H(Y^n)
    std::vector<EmpiricalOrderK> empirical;  // k = 1, 2
    double aep_var = 0.0;                    // Var[log P_{Y^n}(Y^n)], units^2
    double aep_cond_var = 0.0;               // E_X Var[log P_{Y^n}(Y^n)|X]
    double aep_mean_var = 0.0;               // Var_X E[log P_{Y^n}(Y^n)|X]
    double identity_resid = 0.0;             // |I - (D_cond - D_out)|
    double recompute_resid = 0.0;            // max deviation of second-pass sums
    Units units;
    JValue to_json() const;
};

CodeMetrics code_metrics(const DmcSpec& dmc, const Codebook& code, const CapacitySolution& sol,
                         std::uint64_t guard = kDefaultGuard, const Parallel& par = Parallel::single());

// Average-error counterexample: appends copies of the constant-x0 word to a
// low-error base code and checks the exact output-divergence decomposition
//   D(P_{Y^n}||P*) >= P_S(1) n D(W_{x0}||P_Y*) + P_S(0) D(P'_{Y^n}||P*) - log 2.
struct CounterexampleResult {
    Codebook extended;
    BoundReport decomposition;
    double eps_avg_extended = 0.0;
    double base_eps_max = 0.0;
    int copies_appended = 0;
};
CounterexampleResult counterexample_extend(const DmcSpec& dmc, const Codebook& base_code, int x0,
                                           double eps_target, const CapacitySolution& sol,
                                           std::uint64_t guard = kDefaultGuard,
                                           const Parallel& par = Parallel::single());

struct AepVariance {
    double var = 0.0;            // Var[log P_{Y^n}(Y^n)], units^2
    double expected_cond_var = 0.0;
    double var_of_cond_mean = 0.0;
    double split_resid = 0.0;    // |var - (expected_cond_var + var_of_cond_mean)|
    Units units;
};
AepVariance aep_variance(const DmcSpec& dmc, const Codebook& code,
                         std::uint64_t guard = kDefaultGuard, const Parallel& par = Parallel::single(),
                         Units units = Units::bits());

// Monte Carlo report for AWGN codes under nearest-neighbor decoding.
// Deterministic given (seed); thread-count invariant.
struct AwgnMcReport {
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    ConfidenceInterval eps;      // block error probability
    ConfidenceInterval d_out;    // D(P_{Y^n} || P*^n) estimate, units
    ConfidenceInterval aep_var;  // Var[log p_{Y^n}(Y^n)], units^2
    double closed_form_d = -1.0; // exact D for M=1 codes, else -1
    Units units;
    JValue to_json() const;
};
AwgnMcReport awgn_mc_report(const AwgnSpec& awgn, const Codebook& code, std::uint64_t samples,
                            std::uint64_t seed, const Parallel& par = Parallel::single(),
                            Units units = Units::bits());

// Deterministic pseudo-random DMC codebook (distinct words when possible).
Codebook random_dmc_code(int n, int M, int xbase, std::uint64_t seed, bool distinct = true,
                         ErrorCriterion crit = ErrorCriterion::max_error);

}  // namespace fblab

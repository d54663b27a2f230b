#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fblab/capacity.hpp"
#include "fblab/codes.hpp"
#include "fblab/report.hpp"

namespace fblab {

// Explicit constants of the output-divergence chain for a DMC without zero
// transitions: a1_lip bounds the Hamming-Lipschitz constant of log P_{Y^n},
// a2_var the single-letter variance of log W(Y|x).
struct BoundConstants {
    double a1_lip = 0.0;   // units; +inf sentinel when W has a zero in a used column
    double a2_var = 0.0;   // units^2
    double S_m = 0.0;      // units^2 (2 n a2 + 2 n a1^2 when from the chain)
    double Delta = 0.0;    // units
    double delta_prime = 0.0;
    double eps = 0.0;
    bool finite() const { return std::isfinite(a1_lip); }
};

BoundConstants theorem4_chain_constants(const DmcSpec& dmc, int n, double eps, Units units = Units::bits());

// Auxiliary product output distribution with per-position marginals.
struct ProductQ {
    std::vector<std::vector<double>> per_position;  // n distributions over Y

    static ProductQ iid(const std::vector<double>& q_letter, int n);
    static ProductQ from_word(const DmcSpec& dmc, std::span<const int> word);

    int n() const { return int(per_position.size()); }
    double mass(std::uint64_t yindex, int ybase) const;
    // sum_j D(W(.|x_j) || q_j), nats
    double d_of_word_nats(const DmcSpec& dmc, std::span<const int> word) const;
    // sum_j Var[log(W(Y|x_j)/q_j(Y)) | x_j], nats^2
    double var_of_word_nats(const DmcSpec& dmc, std::span<const int> word) const;
    // sum_j max_x Var[log(W(Y|x)/q_j(Y)) | x], nats^2  (the S_m plug-in)
    double sup_var_nats(const DmcSpec& dmc) const;
};

enum class AugustinRhoMode { constant, d_plus_delta };

// M <= exp{E[rho(X)]} / (inf_x P_{Y|X=x}[log dP/dQ <= rho(x)] - eps)
BoundReport augustin_bound(const DmcSpec& dmc, const Codebook& code, const ProductQ& q,
                           AugustinRhoMode mode = AugustinRhoMode::d_plus_delta,
                           std::optional<double> delta_override = std::nullopt,
                           std::uint64_t guard = kDefaultGuard, const Parallel& par = Parallel::single(),
                           Units units = Units::bits());

// eps_max >= (1 - exp(rho_bar)/M) inf_j P[i_{W;Y} <= rho_j | W = j], compared
// with the exact max-error of the maximum-likelihood rule (uniform
// tie-breaking, so indistinguishable hypotheses give 1 - 1/M).
BoundReport poor_verdu_bound(const std::vector<FiniteDist>& hypotheses, std::span<const double> rhos,
                             Units units = Units::bits());

enum class KlLowerMode { sf, sfvar };

// D(P_{Y|X} || Q | P_X) >= log M - Delta + log(1 - eps - delta')      (sf)
// D(P_{Y|X} || Q | P_X) >= log M - sqrt(2 S_m/(1-eps)) + log((1-eps)/2) (sfvar)
BoundReport kl_lower_bound(const DmcSpec& dmc, const Codebook& code, const ProductQ& q, KlLowerMode mode,
                           std::optional<double> delta_override = std::nullopt,
                           std::uint64_t guard = kDefaultGuard, const Parallel& par = Parallel::single(),
                           Units units = Units::bits());

// Explicit upper budgets for D(P_{Y^n} || P*^n). DMC without zeros uses the
// variance chain, AWGN the explicit sqrt(6n(3+4P)) constant, and DMCs with
// zero transitions get the formula-only sqrt(n) log^{3/2} n shape with the
// multiplier left symbolic.
BoundReport output_kl_upper(const Channel& ch, const CapacitySolution& sol, int n, double log_m,
                            double eps, std::optional<double> exact_d = std::nullopt);

// t E[F(Y)] - log E[exp(t F(Y'))] <= D(P_{Y|X}||Q|P_X) - log M + a sqrt(S + t^2 S_F)
// with the Chebyshev plug-in constants recorded in the report. Nats only.
BoundReport tilted_bound(const DmcSpec& dmc, const Codebook& code, const ProductQ& q,
                         std::span<const double> f_outcomes, double t,
                         std::optional<double> s_override = std::nullopt,
                         std::optional<double> s_f_override = std::nullopt,
                         std::uint64_t guard = kDefaultGuard, const Parallel& par = Parallel::single());

}  // namespace fblab

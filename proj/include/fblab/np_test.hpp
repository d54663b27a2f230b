#pragma once

#include <span>
#include <vector>

#include "fblab/capacity.hpp"
#include "fblab/codes.hpp"
#include "fblab/report.hpp"

namespace fblab {

// Optimal randomized likelihood-ratio test: atoms with equal ratio are merged
// before randomization, Q-null P-positive atoms carry ratio +inf and are
// consumed first.
struct NpTest {
    double threshold_log_ratio = 0.0;  // log LR at the boundary group, units
    double tau = 0.0;                  // randomization on the boundary group
    std::uint64_t full_groups = 0;     // merged groups accepted with certainty
    double achieved_alpha = 0.0;
};

struct BetaValue {
    double alpha = 0.0;
    double beta = 0.0;
    NpTest test;
};

BetaValue beta_alpha(double alpha, std::span<const double> p, std::span<const double> q,
                     Units units = Units::bits());

// beta_{alpha}(P,Q) >= (P[log dP/dQ <= rho] - (1-alpha)) exp(-rho)
BoundReport beta_lower_bound_rho(double alpha, std::span<const double> p, std::span<const double> q,
                                 double rho, Units units = Units::bits());

// beta_alpha(P_{Y^n|X^n=x}, P*^n) >= (alpha/2) exp{-nC - sqrt(2 a1 n / alpha)}
// Exact NP for enumerable products; Monte Carlo with a conservative two-sided
// confidence construction for AWGN.
struct ProductBetaOptions {
    std::uint64_t exact_guard = 4096;
    std::uint64_t mc_samples = 1000000;
    std::uint64_t seed = 1;
};
BoundReport product_beta_bound(double alpha, const Channel& ch, const CapacitySolution& sol, int n,
                               std::span<const int> x_word_dmc, std::span<const double> x_word_awgn,
                               const ProductBetaOptions& opt = {});

enum class MetaconverseVariant { avg, max };

// beta_alpha(P_Y, Q_Y) >= M beta_{alpha-eps}(P_{XY}, P_X Q_Y), and the
// max-error refinement with the delta/(1 - alpha + delta) prefactor.
BoundReport metaconverse(const DmcSpec& dmc, const Codebook& code, std::span<const double> q_outcomes,
                         double alpha, MetaconverseVariant variant, double delta = 0.05,
                         std::uint64_t guard = kDefaultGuard, const Parallel& par = Parallel::single(),
                         Units units = Units::bits());

// Exact beta_alpha(P_{Y^n}, P*^n) against the weak converse evaluated with
// the explicit variance chain; reports the finite-n Stein-exponent proxy.
struct SteinScan {
    BoundReport report;           // exact beta >= weak-converse RHS
    double beta = 0.0;
    double exponent_proxy = 0.0;  // -(1/n) log beta, units
    double a2_required = 0.0;     // multiplier making the strong form tight
};
SteinScan stein_scan(const DmcSpec& dmc, const Codebook& code, const CapacitySolution& sol,
                     double alpha, std::uint64_t guard = kDefaultGuard,
                     const Parallel& par = Parallel::single());

}  // namespace fblab

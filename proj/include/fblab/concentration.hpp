#pragma once

#include <functional>
#include <span>
#include <vector>

#include "fblab/capacity.hpp"
#include "fblab/codes.hpp"
#include "fblab/converses.hpp"
#include "fblab/report.hpp"

namespace fblab {

enum class MeasureKind { product_discrete, gaussian, code_conditional };
enum class CertBasis { declared, azuma, gaussian_lipschitz, bounded, empirical_mgf };

// (b,c)-concentration: E_mu exp{t(F - E_mu F)} <= b exp{c t^2} for all t.
// Natural exponent convention; c carries the square of F's own units.
struct ConcentrationCert {
    double b = 1.0;
    double c = 0.0;
    MeasureKind measure_kind = MeasureKind::product_discrete;
    CertBasis basis = CertBasis::declared;
    std::vector<double> t_grid;       // validation grid actually used (empty if none)
    double max_mgf_excess = 0.0;      // max over grid of ln MGF - (ln b + c t^2)
};

struct LipschitzFn {
    std::vector<double> table;  // values over the outcome space (discrete case)
    double declared_lip = 0.0;
    std::string metric = "hamming";
};

// max over single-coordinate substitutions of |F(y) - F(y')|, exact.
double lipschitz_constant(std::span<const double> f_outcomes, const OutcomeSpace& space,
                          std::uint64_t guard = kDefaultGuard);

ConcentrationCert make_cert_azuma(int n, double lip);
ConcentrationCert make_cert_gaussian_lipschitz(double power, double declared_lip);
ConcentrationCert make_cert_bounded(double centered_sup, double c);
// c chosen by the caller; b fitted on the grid for the given finite measure
ConcentrationCert make_cert_empirical(std::span<const double> f_outcomes, std::span<const double> mu,
                                      double c);

// Exact MGF validation on the standard geometric grid (17 points per sign,
// clipped so the exponent stays in double range). Returns max excess of
// ln MGF over ln b + c t^2; <= tolerance means the certificate holds.
double validate_cert(const ConcentrationCert& cert, std::span<const double> f_outcomes,
                     std::span<const double> mu);

// |E_code F - E_caod F| <= 2 sqrt(c D + c log b), D = D(P_code || caod_prod)
BoundReport expectation_transfer(std::span<const double> f_outcomes, std::span<const double> p_code,
                                 std::span<const double> caod_prod, const ConcentrationCert& cert);

// P[|F(Y^n) - E_caod F| > t] <= 3b exp{nC - log M + a sqrt n - t^2/(16c)} and
// Var F(Y^n) <= 16 c (nC - log M + a sqrt n + log(6be)); `a` is always the
// explicit Theorem-4 chain constant for the channel at hand.
struct TailTransfer {
    std::vector<BoundReport> tails;  // one per grid point
    BoundReport variance;
    bool all_pass() const;
};
TailTransfer tail_transfer(std::span<const double> f_outcomes, const DmcSpec& dmc, const Codebook& code,
                           const CapacitySolution& sol, const ConcentrationCert& cert,
                           std::span<const double> t_grid, std::uint64_t guard = kDefaultGuard,
                           const Parallel& par = Parallel::single());

// (1/n) sum_j E f(Y_j) <= E f(Y*) + n^{-3/4} D(P_{Y^n}||P*^n) + b n^{-1/4}
// with 2b = m2 + 4 e^{-2} m1 / theta^2 (natural exponent).
BoundReport cramer_transfer(std::span<const double> f_letter, double theta, const DmcSpec& dmc,
                            const Codebook& code, const CapacitySolution& sol,
                            std::uint64_t guard = kDefaultGuard, const Parallel& par = Parallel::single());

// Table builders over the outcome space.
std::vector<double> hamming_weight_table(const OutcomeSpace& space);
std::vector<double> per_letter_sum_table(const OutcomeSpace& space, std::span<const double> f_letter,
                                         double normalizer = 1.0);

}  // namespace fblab

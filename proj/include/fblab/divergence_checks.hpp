#pragma once

#include <span>
#include <vector>

#include "fblab/dist.hpp"
#include "fblab/report.hpp"

namespace fblab {

// ||P-Q||_TV^2 <= D(P||Q) / (2 log e)
BoundReport pinsker_check(std::span<const double> p, std::span<const double> q,
                          Units units = Units::bits());

struct ConditionalKl {
    double d_cond = 0.0;   // D(P_{Y|X} || Q | P_X)
    double d_marg = 0.0;   // D(P_Y || Q)
    double mutual = 0.0;   // d_cond - d_marg
    double direct_mi = 0.0;  // double-sum cross-check
    Units units;
};

// Identity I(X;Y) = D(P_{Y|X}||Q|P_X) - D(P_Y||Q) for any dominating Q.
ConditionalKl conditional_kl_identity(const std::vector<std::vector<double>>& kernel_rows,
                                      std::span<const double> p_x, std::span<const double> q_y,
                                      Units units = Units::bits());

// E_P[g] - log E_Q[exp g] <= D(P||Q); g is measured in the configured units.
BoundReport donsker_varadhan_gap(std::span<const double> p, std::span<const double> q,
                                 std::span<const double> g, Units units = Units::bits());

// For X > 0 with E[X] <= 1:  E|X-1| <= sqrt(2 E[ln(1/X)])   (natural log)
BoundReport ratio_mean_lemma_check(std::span<const double> values, std::span<const double> probs);

}  // namespace fblab

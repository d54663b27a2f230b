#pragma once

#include <vector>

#include "fblab/dist.hpp"
#include "fblab/report.hpp"

namespace fblab {

struct TransportProblem {
    FiniteDist source;
    FiniteDist target;
    std::vector<std::vector<double>> cost;  // ground cost c[i][j] >= 0
    int order = 1;                          // order 2 squares the ground cost internally
};

struct TransportResult {
    double value = 0.0;      // W_1, or sqrt of optimal expected squared cost for order 2
    double objective = 0.0;  // optimal <coupling, cost-as-solved>
    std::vector<std::vector<double>> coupling;
    std::vector<double> dual_u;  // Kantorovich potentials, u_i + v_j <= c_ij
    std::vector<double> dual_v;
    double duality_gap = 0.0;         // primal - dual
    double max_dual_violation = 0.0;  // max over (i,j) of u_i + v_j - c_ij
    double marginal_err = 0.0;        // worst marginal deviation of the coupling
};

// Exact LP over couplings via successive shortest paths on the bipartite flow
// network; dual feasibility of the final potentials certifies optimality.
TransportResult wasserstein(const TransportProblem& prob, size_t guard = 512);

// 0/1 ground cost on a common alphabet (W_1 = TV in this metric).
TransportProblem hamming_transport(const FiniteDist& p, const FiniteDist& q, int order = 1);

// Quantile midpoint quantization of N(mean, var), for illustrative W_2
// reports against discrete laws (never used in assertions).
void gaussian_quadrature_1d(double mean, double var, int m, std::vector<double>& points,
                            std::vector<double>& masses);

}  // namespace fblab

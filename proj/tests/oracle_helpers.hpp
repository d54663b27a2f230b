#pragma once

// Independent brute-force oracles used by the tests. These deliberately avoid
// the library's solution paths: the NP oracle enumerates vertices of the
// randomized-test polytope, capacities come from closed forms or grid search.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "fblab/common.hpp"

namespace oracle {

inline double h2_bits(double p) {
    auto xlg = [](double x) { return x > 0.0 ? x * std::log2(x) : 0.0; };
    return -xlg(p) - xlg(1.0 - p);
}

inline double bsc_capacity_bits(double delta) { return 1.0 - h2_bits(delta); }
inline double bec_capacity_bits(double e) { return 1.0 - e; }

inline double bsc_dispersion_bits2(double delta) {
    double lr = std::log2((1.0 - delta) / delta);
    return delta * (1.0 - delta) * lr * lr;
}

// Exact optimum of  min sum q_i t_i  s.t.  sum p_i t_i >= alpha, 0 <= t_i <= 1,
// by enumerating all vertices: a 0/1 acceptance set plus at most one
// fractional coordinate. Exponential in the alphabet; fine for size <= 16.
inline double beta_alpha_bruteforce(double alpha, std::span<const double> p, std::span<const double> q) {
    const size_t k = p.size();
    double best = fblab::kInf;
    const std::uint32_t subsets = std::uint32_t(1) << k;
    for (std::uint32_t s = 0; s < subsets; ++s) {
        double pa = 0.0, qa = 0.0;
        for (size_t i = 0; i < k; ++i)
            if (s & (std::uint32_t(1) << i)) {
                pa += p[i];
                qa += q[i];
            }
        if (pa >= alpha - 1e-15) best = std::min(best, qa);
        for (size_t j = 0; j < k; ++j) {
            if (s & (std::uint32_t(1) << j)) continue;
            if (p[j] <= 0.0) continue;
            double tau = (alpha - pa) / p[j];
            if (tau >= -1e-15 && tau <= 1.0 + 1e-15) {
                tau = std::clamp(tau, 0.0, 1.0);
                best = std::min(best, qa + tau * q[j]);
            }
        }
    }
    return best;
}

// Capacity of a 2-input channel under an input-mass grid search (oracle for
// the cost-constrained solver on small cases).
inline double capacity_grid_2input_bits(const std::vector<std::vector<double>>& w, double max_p1,
                                        int grid = 200001) {
    auto xlg = [](double a, double b) { return a > 0.0 ? a * std::log2(a / b) : 0.0; };
    double best = 0.0;
    for (int g = 0; g < grid; ++g) {
        double t = max_p1 * g / (grid - 1);
        std::vector<double> py(w[0].size(), 0.0);
        for (size_t y = 0; y < py.size(); ++y) py[y] = (1.0 - t) * w[0][y] + t * w[1][y];
        double mi = 0.0;
        for (size_t y = 0; y < py.size(); ++y) {
            mi += xlg((1.0 - t) * w[0][y], py[y] * (1.0 - t)) * (w[0][y] > 0 ? 1.0 : 0.0);
        }
        mi = 0.0;
        for (size_t y = 0; y < py.size(); ++y) {
            if (w[0][y] > 0.0) mi += (1.0 - t) * w[0][y] * std::log2(w[0][y] / py[y]);
            if (w[1][y] > 0.0) mi += t * w[1][y] * std::log2(w[1][y] / py[y]);
        }
        best = std::max(best, mi);
    }
    return best;
}

// Deterministic Dirichlet-ish random stochastic row.
inline std::vector<double> random_row(fblab::CounterRng& rng, std::uint64_t stream, std::uint64_t salt,
                                      size_t k) {
    std::vector<double> row(k);
    double s = 0.0;
    for (size_t i = 0; i < k; ++i) {
        double u = rng.uniform(stream, salt * 64 + i);
        row[i] = -std::log(1.0 - u + 1e-15);
        s += row[i];
    }
    for (size_t i = 0; i < k; ++i) row[i] /= s;
    return row;
}

inline std::vector<double> random_dist(fblab::CounterRng& rng, std::uint64_t stream, std::uint64_t salt,
                                       size_t k, double floor_mass = 0.0) {
    std::vector<double> d = random_row(rng, stream, salt, k);
    if (floor_mass > 0.0) {
        double s = 0.0;
        for (double& v : d) {
            v += floor_mass;
            s += v;
        }
        for (double& v : d) v /= s;
    }
    return d;
}

}  // namespace oracle

#include "fblab/transport.hpp"

#include <algorithm>
#include <cmath>

namespace fblab {

TransportResult wasserstein(const TransportProblem& prob, size_t guard) {
    const size_t m = prob.source.size(), k = prob.target.size();
    if (m > guard || k > guard) throw FblabError("wasserstein: support exceeds guard");
    if (prob.cost.size() != m) throw FblabError("wasserstein: cost rows mismatch");
    for (const auto& row : prob.cost)
        if (row.size() != k) throw FblabError("wasserstein: cost cols mismatch");
    if (prob.order != 1 && prob.order != 2) throw FblabError("wasserstein: order must be 1 or 2");
    prob.source.validate(1e-9);
    prob.target.validate(1e-9);

    std::vector<std::vector<double>> c(m, std::vector<double>(k));
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < k; ++j) {
            double g = prob.cost[i][j];
            if (g < 0.0) throw FblabError("wasserstein: negative ground cost");
            c[i][j] = prob.order == 2 ? g * g : g;
        }

    std::vector<double> supply(prob.source.masses), demand(prob.target.masses);
    {  // make totals match exactly so the flow terminates cleanly
        double sa = 0.0, sb = 0.0;
        for (double v : supply) sa += v;
        for (double v : demand) sb += v;
        if (std::fabs(sa - sb) > 1e-9) throw FblabError("wasserstein: unbalanced masses");
        size_t jmax = 0;
        for (size_t j = 1; j < k; ++j)
            if (demand[j] > demand[jmax]) jmax = j;
        demand[jmax] += sa - sb;
    }

    // nodes: 0 = source hub, 1..m = left, m+1..m+k = right
    const size_t N = 1 + m + k;
    std::vector<double> pot(N, 0.0);
    std::vector<std::vector<double>> X(m, std::vector<double>(k, 0.0));
    std::vector<double> rem_s = supply, rem_d = demand;
    double total_rem = 1.0;

    std::vector<double> dist(N);
    std::vector<int> parent(N);  // predecessor node, -1 if none
    std::vector<char> done(N);

    auto left_id = [&](size_t i) { return 1 + i; };
    auto right_id = [&](size_t j) { return 1 + m + j; };

    const size_t max_phases = 64 * (m + k) + 64;
    size_t phases = 0;
    while (true) {
        total_rem = 0.0;
        for (double v : rem_d) total_rem += std::max(0.0, v);
        if (total_rem <= 1e-13) break;
        if (++phases > max_phases) throw FblabError("wasserstein: flow failed to converge");

        std::fill(dist.begin(), dist.end(), kInf);
        std::fill(parent.begin(), parent.end(), -1);
        std::fill(done.begin(), done.end(), 0);
        dist[0] = 0.0;
        int target_node = -1;
        while (true) {
            // dense extract-min
            int u = -1;
            double best = kInf;
            for (size_t v = 0; v < N; ++v)
                if (!done[v] && dist[v] < best) {
                    best = dist[v];
                    u = int(v);
                }
            if (u < 0) break;
            done[size_t(u)] = 1;
            if (u > int(m)) {  // a right node
                size_t j = size_t(u) - 1 - m;
                if (rem_d[j] > 1e-14) {
                    target_node = u;
                    break;
                }
            }
            if (u == 0) {
                for (size_t i = 0; i < m; ++i) {
                    if (rem_s[i] <= 1e-15) continue;
                    double nd = dist[0] + (pot[0] - pot[left_id(i)]);
                    if (nd < dist[left_id(i)] - 1e-18) {
                        dist[left_id(i)] = nd;
                        parent[left_id(i)] = 0;
                    }
                }
            } else if (u <= int(m)) {
                size_t i = size_t(u) - 1;
                double base = dist[size_t(u)] + pot[size_t(u)];
                for (size_t j = 0; j < k; ++j) {
                    double nd = base + c[i][j] - pot[right_id(j)];
                    if (nd < dist[right_id(j)] - 1e-18) {
                        dist[right_id(j)] = nd;
                        parent[right_id(j)] = u;
                    }
                }
            } else {
                size_t j = size_t(u) - 1 - m;
                double base = dist[size_t(u)] + pot[size_t(u)];
                for (size_t i = 0; i < m; ++i) {
                    if (X[i][j] <= 0.0) continue;
                    double nd = base - c[i][j] - pot[left_id(i)];
                    if (nd < dist[left_id(i)] - 1e-18) {
                        dist[left_id(i)] = nd;
                        parent[left_id(i)] = u;
                    }
                }
            }
        }
        if (target_node < 0) {
            if (total_rem < 1e-9) break;  // leftover numerical dust only
            throw FblabError("wasserstein: no augmenting path");
        }
        double dt = dist[size_t(target_node)];
        for (size_t v = 0; v < N; ++v) pot[v] += std::min(dist[v], dt);

        // walk the path, find bottleneck
        double delta = rem_d[size_t(target_node) - 1 - m];
        for (int v = target_node; parent[v] != -1; v = parent[v]) {
            int p = parent[v];
            if (p == 0) {
                delta = std::min(delta, rem_s[size_t(v) - 1]);
            } else if (p <= int(m) && v > int(m)) {
                // forward edge, unbounded
            } else {
                // backward edge right->left carries X[i][j]
                size_t j = size_t(p) - 1 - m, i = size_t(v) - 1;
                delta = std::min(delta, X[i][j]);
            }
        }
        for (int v = target_node; parent[v] != -1; v = parent[v]) {
            int p = parent[v];
            if (p == 0) {
                rem_s[size_t(v) - 1] -= delta;
            } else if (p <= int(m) && v > int(m)) {
                X[size_t(p) - 1][size_t(v) - 1 - m] += delta;
            } else {
                X[size_t(v) - 1][size_t(p) - 1 - m] -= delta;
            }
        }
        rem_d[size_t(target_node) - 1 - m] -= delta;
    }

    TransportResult res;
    res.coupling = X;
    res.objective = 0.0;
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < k; ++j) res.objective += X[i][j] * c[i][j];
    res.value = prob.order == 2 ? std::sqrt(std::max(0.0, res.objective)) : res.objective;

    // potentials: u_i + v_j <= c_ij with u_i = pot[0] - pot[left_i], v_j = pot[right_j] - pot[0]
    res.dual_u.resize(m);
    res.dual_v.resize(k);
    for (size_t i = 0; i < m; ++i) res.dual_u[i] = pot[0] - pot[left_id(i)];
    for (size_t j = 0; j < k; ++j) res.dual_v[j] = pot[right_id(j)] - pot[0];
    double dual_obj = 0.0;
    for (size_t i = 0; i < m; ++i) dual_obj += supply[i] * res.dual_u[i];
    for (size_t j = 0; j < k; ++j) dual_obj += demand[j] * res.dual_v[j];
    res.duality_gap = res.objective - dual_obj;
    res.max_dual_violation = -kInf;
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < k; ++j)
            res.max_dual_violation = std::max(res.max_dual_violation, res.dual_u[i] + res.dual_v[j] - c[i][j]);

    res.marginal_err = 0.0;
    for (size_t i = 0; i < m; ++i) {
        double row = 0.0;
        for (size_t j = 0; j < k; ++j) row += X[i][j];
        res.marginal_err = std::max(res.marginal_err, std::fabs(row - supply[i]));
    }
    for (size_t j = 0; j < k; ++j) {
        double col = 0.0;
        for (size_t i = 0; i < m; ++i) col += X[i][j];
        res.marginal_err = std::max(res.marginal_err, std::fabs(col - demand[j]));
    }
    return res;
}

TransportProblem hamming_transport(const FiniteDist& p, const FiniteDist& q, int order) {
    if (p.size() != q.size()) throw FblabError("hamming_transport: size mismatch");
    TransportProblem prob;
    prob.source = p;
    prob.target = q;
    prob.order = order;
    prob.cost.assign(p.size(), std::vector<double>(q.size(), 1.0));
    for (size_t i = 0; i < p.size(); ++i) prob.cost[i][i] = 0.0;
    return prob;
}

void gaussian_quadrature_1d(double mean, double var, int m, std::vector<double>& points,
                            std::vector<double>& masses) {
    if (m < 2) throw FblabError("gaussian_quadrature_1d: need m >= 2");
    points.resize(size_t(m));
    masses.assign(size_t(m), 1.0 / m);
    double sd = std::sqrt(var);
    for (int i = 0; i < m; ++i) {
        double u = (i + 0.5) / m;
        points[size_t(i)] = mean - sd * inverse_normal_ccdf(u);
    }
}

}  // namespace fblab

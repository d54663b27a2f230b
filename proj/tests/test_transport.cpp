#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "fblab/transport.hpp"
#include "oracle_helpers.hpp"

using namespace fblab;

namespace {
// 1-D optimal transport by the sorted-quantile coupling (closed form).
double one_d_w1(const std::vector<double>& xs, const std::vector<double>& pa,
                const std::vector<double>& ys, const std::vector<double>& pb) {
    // CDF walk over merged support
    struct Pt {
        double x, p;
        int side;
    };
    std::vector<Pt> pts;
    for (size_t i = 0; i < xs.size(); ++i) pts.push_back({xs[i], pa[i], 0});
    for (size_t j = 0; j < ys.size(); ++j) pts.push_back({ys[j], pb[j], 1});
    std::vector<double> grid;
    for (const auto& p : pts) grid.push_back(p.x);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    double w = 0.0;
    for (size_t g = 0; g + 1 < grid.size(); ++g) {
        double fa = 0.0, fb = 0.0;
        for (size_t i = 0; i < xs.size(); ++i)
            if (xs[i] <= grid[g] + 1e-12) fa += pa[i];
        for (size_t j = 0; j < ys.size(); ++j)
            if (ys[j] <= grid[g] + 1e-12) fb += pb[j];
        w += std::fabs(fa - fb) * (grid[g + 1] - grid[g]);
    }
    return w;
}
}  // namespace

TEST_CASE("W1 equals TV under the 0/1 ground cost") {
    CounterRng rng(31);
    for (int trial = 0; trial < 500; ++trial) {
        size_t k = 2 + rng.bits(50, std::uint64_t(trial)) % 7;
        auto p = oracle::random_dist(rng, 51, std::uint64_t(trial), k);
        auto q = oracle::random_dist(rng, 52, std::uint64_t(trial), k);
        TransportResult tr = wasserstein(hamming_transport(FiniteDist{p}, FiniteDist{q}));
        CHECK(std::fabs(tr.value - tv_distance(p, q)) <= 1e-10);
        CHECK(std::fabs(tr.duality_gap) <= 1e-9);
        CHECK(tr.max_dual_violation <= 1e-9);
        CHECK(tr.marginal_err <= 1e-9);
    }
}

TEST_CASE("identical marginals ship on the diagonal") {
    std::vector<double> p = {0.2, 0.3, 0.5};
    TransportProblem prob = hamming_transport(FiniteDist{p}, FiniteDist{p});
    TransportResult tr = wasserstein(prob);
    CHECK(tr.value == doctest::Approx(0.0).epsilon(1e-12));
    for (size_t i = 0; i < 3; ++i) CHECK(tr.coupling[i][i] == doctest::Approx(p[i]).epsilon(1e-9));
}

TEST_CASE("1-D costs match the quantile-coupling closed form") {
    CounterRng rng(37);
    for (int trial = 0; trial < 200; ++trial) {
        size_t k = 2 + rng.bits(53, std::uint64_t(trial)) % 5;
        std::vector<double> xs(k), ys(k);
        for (size_t i = 0; i < k; ++i) {
            xs[i] = 3.0 * rng.uniform(54, std::uint64_t(trial) * 16 + i);
            ys[i] = 3.0 * rng.uniform(55, std::uint64_t(trial) * 16 + i);
        }
        std::sort(xs.begin(), xs.end());
        std::sort(ys.begin(), ys.end());
        auto pa = oracle::random_dist(rng, 56, std::uint64_t(trial), k);
        auto pb = oracle::random_dist(rng, 57, std::uint64_t(trial), k);
        TransportProblem prob;
        prob.source = FiniteDist{pa};
        prob.target = FiniteDist{pb};
        prob.order = 1;
        prob.cost.assign(k, std::vector<double>(k));
        for (size_t i = 0; i < k; ++i)
            for (size_t j = 0; j < k; ++j) prob.cost[i][j] = std::fabs(xs[i] - ys[j]);
        TransportResult tr = wasserstein(prob);
        CHECK(tr.value == doctest::Approx(one_d_w1(xs, pa, ys, pb)).epsilon(1e-8));
        CHECK(std::fabs(tr.duality_gap) <= 1e-9);
    }
}

TEST_CASE("the spec'd two-point shift example") {
    // masses (1, 0) vs (1/2, 1/2) on points {0, 1}: W1 = 1/2 moves half a unit
    TransportProblem prob;
    prob.source = FiniteDist{{1.0, 0.0}};
    prob.target = FiniteDist{{0.5, 0.5}};
    prob.order = 1;
    prob.cost = {{0.0, 1.0}, {1.0, 0.0}};
    TransportResult tr = wasserstein(prob);
    CHECK(tr.value == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("W2 returns the root of the squared-cost optimum") {
    TransportProblem prob;
    prob.source = FiniteDist{{1.0, 0.0}};
    prob.target = FiniteDist{{0.0, 1.0}};
    prob.order = 2;
    prob.cost = {{0.0, 3.0}, {3.0, 0.0}};
    TransportResult tr = wasserstein(prob);
    CHECK(tr.objective == doctest::Approx(9.0).epsilon(1e-10));
    CHECK(tr.value == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("Kantorovich-Rubinstein spot check with random Lipschitz observables") {
    CounterRng rng(41);
    for (int trial = 0; trial < 200; ++trial) {
        size_t k = 3 + rng.bits(60, std::uint64_t(trial)) % 4;
        std::vector<double> pts(k);
        for (size_t i = 0; i < k; ++i) pts[i] = 2.0 * rng.uniform(61, std::uint64_t(trial) * 8 + i);
        auto p = oracle::random_dist(rng, 62, std::uint64_t(trial), k);
        auto q = oracle::random_dist(rng, 63, std::uint64_t(trial), k);
        TransportProblem prob;
        prob.source = FiniteDist{p};
        prob.target = FiniteDist{q};
        prob.order = 1;
        prob.cost.assign(k, std::vector<double>(k));
        for (size_t i = 0; i < k; ++i)
            for (size_t j = 0; j < k; ++j) prob.cost[i][j] = std::fabs(pts[i] - pts[j]);
        TransportResult tr = wasserstein(prob);

        // random 1-Lipschitz g built by clamping slopes between sorted points
        std::vector<size_t> order(k);
        for (size_t i = 0; i < k; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return pts[a] < pts[b]; });
        std::vector<double> g(k, 0.0);
        for (size_t r = 1; r < k; ++r) {
            double slope = 2.0 * rng.uniform(64, std::uint64_t(trial) * 8 + r) - 1.0;
            g[order[r]] = g[order[r - 1]] + slope * (pts[order[r]] - pts[order[r - 1]]);
        }
        double ep = 0.0, eq = 0.0;
        for (size_t i = 0; i < k; ++i) {
            ep += p[i] * g[i];
            eq += q[i] * g[i];
        }
        CHECK(std::fabs(ep - eq) <= tr.value + 1e-9);
        // W1 <= diameter * TV for bounded ground cost
        double diam = 0.0;
        for (size_t i = 0; i < k; ++i)
            for (size_t j = 0; j < k; ++j) diam = std::max(diam, prob.cost[i][j]);
        CHECK(tr.value <= diam * tv_distance(p, q) + 1e-9);
    }
}

TEST_CASE("guards and validation") {
    TransportProblem prob = hamming_transport(FiniteDist{{0.5, 0.5}}, FiniteDist{{0.5, 0.5}});
    CHECK_THROWS_AS((void)wasserstein(prob, 1), FblabError);
    prob.cost[0][1] = -1.0;
    CHECK_THROWS_AS((void)wasserstein(prob), FblabError);
    prob.cost[0][1] = 1.0;
    prob.order = 3;
    CHECK_THROWS_AS((void)wasserstein(prob), FblabError);
}

TEST_CASE("gaussian quadrature helper is a valid distribution with matching moments") {
    std::vector<double> pts, mass;
    gaussian_quadrature_1d(0.0, 2.0, 256, pts, mass);
    double s = 0.0, m1 = 0.0, m2 = 0.0;
    for (size_t i = 0; i < pts.size(); ++i) {
        s += mass[i];
        m1 += mass[i] * pts[i];
        m2 += mass[i] * pts[i] * pts[i];
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m1 == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(m2 == doctest::Approx(2.0).epsilon(0.02));  // midpoint quantization narrows tails slightly
}

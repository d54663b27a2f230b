#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "fblab/capacity.hpp"
#include "fblab/channel.hpp"
#include "oracle_helpers.hpp"

using namespace fblab;

namespace {
const Units kBits = Units::bits();

Channel channel_from_text(const std::string& text) { return parse_channel_json(text); }
}  // namespace

TEST_CASE("load_channel: BSC, AWGN, and validation failures") {
    Channel bsc = channel_from_text(R"({"type":"dmc","W":[[0.89,0.11],[0.11,0.89]]})");
    CHECK(is_dmc(bsc));
    CHECK(as_dmc(bsc).W[0][1] == doctest::Approx(0.11));

    Channel awgn = channel_from_text(R"({"type":"awgn","power":1.0})");
    CHECK(!is_dmc(awgn));
    CHECK(as_awgn(awgn).power == 1.0);

    CHECK_THROWS_WITH_AS((void)channel_from_text(R"({"type":"dmc","W":[[0.86,0.11],[0.11,0.89]]})"),
                         doctest::Contains("row 0 not stochastic"), FblabError);
    CHECK_THROWS_AS((void)channel_from_text(R"({"type":"dmc","W":[[1.2,-0.2],[0.11,0.89]]})"), FblabError);
    CHECK_THROWS_AS((void)channel_from_text(R"({"type":"dmc","W":[[0.5,0.5],[0.5,0.5]],"budget":1.0})"),
                    FblabError);
    CHECK_THROWS_AS((void)channel_from_text(R"({"type":"awgn","power":-3.0})"), FblabError);
    CHECK_THROWS_AS((void)channel_from_text(R"({not json)"), FblabError);
}

TEST_CASE("blahut_arimoto reaches the closed forms") {
    CapacitySolution bsc = blahut_arimoto(DmcSpec::bsc(0.11), 1e-9, 200000, kBits);
    CHECK(bsc.C == doctest::Approx(oracle::bsc_capacity_bits(0.11)).epsilon(1e-8));
    CHECK(bsc.C == doctest::Approx(0.500084041835472).epsilon(1e-8));
    CHECK(bsc.caod[0] == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(bsc.gap <= 1e-9);

    CapacitySolution ident = blahut_arimoto(DmcSpec{2, 2, {{1, 0}, {0, 1}}, {}, {}}, 1e-9, 200000, kBits);
    CHECK(ident.C == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(ident.input_dist[0] == doctest::Approx(0.5).epsilon(1e-9));

    CapacitySolution bec = blahut_arimoto(DmcSpec::bec(0.5), 1e-9, 200000, kBits);
    CHECK(bec.C == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("blahut_arimoto: caod unique across initializations") {
    DmcSpec dmc;
    dmc.input_size = 3;
    dmc.output_size = 3;
    dmc.W = {{0.7, 0.2, 0.1}, {0.1, 0.8, 0.1}, {0.25, 0.25, 0.5}};
    double tol = 1e-10;
    CapacitySolution a = blahut_arimoto(dmc, tol, 500000, kBits);
    CapacitySolution b = blahut_arimoto(dmc, tol, 500000, kBits, std::vector<double>{0.7, 0.2, 0.1});
    CHECK(tv_distance(a.caod, b.caod) <= 10 * tol + 1e-12);
    CHECK(a.C == doctest::Approx(b.C).epsilon(1e-9));
}

TEST_CASE("blahut_arimoto: KKT conditions on random 4x4 channels") {
    CounterRng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        DmcSpec dmc;
        dmc.input_size = 4;
        dmc.output_size = 4;
        for (int x = 0; x < 4; ++x) dmc.W.push_back(oracle::random_row(rng, 40, std::uint64_t(trial) * 4 + x, 4));
        CapacitySolution sol = blahut_arimoto(dmc, 1e-9, 500000, kBits);
        double dmax = -kInf;
        for (int x = 0; x < 4; ++x) {
            dmax = std::max(dmax, sol.d_per_input[size_t(x)]);
            if (sol.input_dist[size_t(x)] > 1e-4)
                CHECK(std::fabs(sol.d_per_input[size_t(x)] - sol.C) <= 1e-5);
        }
        CHECK(dmax <= sol.C + 1e-6);
        CHECK(caod_audit(Channel{dmc}, sol, 1e-6).passed());
        // expectation identity: E[i(x;Y)|X=x] = d(x) on single letters
        for (int x = 0; x < 4; ++x) {
            double e = 0.0;
            for (int y = 0; y < 4; ++y) {
                double w = dmc.W[size_t(x)][size_t(y)];
                if (w > 0.0) e += w * std::log2(w / sol.caod[size_t(y)]);
            }
            CHECK(std::fabs(e - sol.d_per_input[size_t(x)]) < 1e-9);
        }
    }
}

TEST_CASE("cost-constrained capacity against a grid-search oracle") {
    // Z-channel-like kernel with a costly second letter
    DmcSpec dmc;
    dmc.input_size = 2;
    dmc.output_size = 2;
    dmc.W = {{0.95, 0.05}, {0.1, 0.9}};
    dmc.cost = std::vector<double>{0.0, 1.0};
    dmc.budget = 0.25;
    CapacitySolution sol = blahut_arimoto(dmc, 1e-9, 500000, kBits);
    double oracle_c = oracle::capacity_grid_2input_bits(dmc.W, 0.25);
    CHECK(sol.C == doctest::Approx(oracle_c).epsilon(5e-6));
    double ec = sol.input_dist[1] * 1.0;
    CHECK(ec <= 0.25 * (1.0 + 1e-9) + 1e-12);

    // slack budget: constraint inactive, plain capacity
    dmc.budget = 1.0;
    CapacitySolution lax = blahut_arimoto(dmc, 1e-9, 500000, kBits);
    double unconstrained = oracle::capacity_grid_2input_bits(dmc.W, 1.0);
    CHECK(lax.C == doctest::Approx(unconstrained).epsilon(5e-6));

    dmc.budget = -0.5;
    CHECK_THROWS_AS((void)blahut_arimoto(dmc, 1e-9, 1000, kBits), FblabError);
}

TEST_CASE("awgn capacity and dispersion closed forms") {
    auto [c1, v1] = awgn_capacity_dispersion(AwgnSpec{1.0}, kBits);
    CHECK(c1 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(v1 == doctest::Approx(0.7805133678771029).epsilon(1e-12));

    auto [c2, v2] = awgn_capacity_dispersion(AwgnSpec{1e-6}, kBits);
    CHECK(c2 == doctest::Approx(0.5 * 1.4426950408889634e-6).epsilon(1e-6));
    CHECK(v2 <= 1e-6);

    CapacitySolution sol = awgn_capacity(AwgnSpec{1.0}, kBits);
    CHECK(sol.is_awgn());
    CHECK(caod_audit(Channel{AwgnSpec{1.0}}, sol).passed());
}

TEST_CASE("dmc_dispersion closed forms") {
    CapacitySolution bsc = blahut_arimoto(DmcSpec::bsc(0.11), 1e-10, 200000, kBits);
    CHECK(bsc.V == doctest::Approx(oracle::bsc_dispersion_bits2(0.11)).epsilon(1e-6));
    CHECK(bsc.V == doctest::Approx(0.8907017013975562).epsilon(1e-6));
    CHECK(bsc.a1 == doctest::Approx(0.8907017013975562).epsilon(1e-6));

    CapacitySolution ident = blahut_arimoto(DmcSpec{2, 2, {{1, 0}, {0, 1}}, {}, {}}, 1e-9, 200000, kBits);
    CHECK(ident.V == doctest::Approx(0.0).epsilon(1e-12));

    CapacitySolution bec = blahut_arimoto(DmcSpec::bec(0.5), 1e-10, 500000, kBits);
    CHECK(bec.V == doctest::Approx(0.25).epsilon(1e-5));
}

TEST_CASE("information_density single letters, empty words, zero transitions") {
    DmcSpec bsc = DmcSpec::bsc(0.11);
    CapacitySolution sol = blahut_arimoto(bsc, 1e-10, 200000, kBits);
    std::vector<int> x0 = {0}, y0 = {0}, y1 = {1};
    CHECK(information_density(Channel{bsc}, sol, x0, y0) == doctest::Approx(0.8318772411916731).epsilon(1e-7));
    CHECK(information_density(Channel{bsc}, sol, x0, y1) == doctest::Approx(-2.1844245711374275).epsilon(1e-7));
    std::vector<int> empty;
    CHECK(information_density(Channel{bsc}, sol, empty, empty) == 0.0);

    DmcSpec bec = DmcSpec::bec(0.5);
    CapacitySolution bsol = blahut_arimoto(bec, 1e-10, 500000, kBits);
    std::vector<int> x = {0}, y_impossible = {2};  // W(2|0) = 0
    CHECK(information_density(Channel{bec}, bsol, x, y_impossible) == -kInf);
}

TEST_CASE("awgn conditional divergence closed form vs capacity") {
    double P = 1.0;
    for (int n : {1, 8, 64}) {
        double d_boundary = awgn_d_of_word_nats(P, n, n * P);
        CHECK(d_boundary == doctest::Approx(n * 0.5 * std::log(2.0)).epsilon(1e-12));
        double d_inside = awgn_d_of_word_nats(P, n, 0.3 * n * P);
        CHECK(d_inside < d_boundary);
        // information-density variance at the boundary matches n * dispersion
        CHECK(awgn_infodens_var_nats(P, n, n * P) ==
              doctest::Approx(n * 0.7805133678771029 / (1.4426950408889634 * 1.4426950408889634))
                  .epsilon(1e-9));
    }
}

TEST_CASE("row stochasticity preserved and caod support covers used outputs") {
    CounterRng rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        DmcSpec dmc;
        dmc.input_size = 3;
        dmc.output_size = 5;
        for (int x = 0; x < 3; ++x) dmc.W.push_back(oracle::random_row(rng, 41, std::uint64_t(trial) * 4 + x, 5));
        CHECK_NOTHROW(dmc.validate());
        CapacitySolution sol = blahut_arimoto(dmc, 1e-9, 500000, kBits);
        double sum = 0.0;
        for (double v : sol.caod) {
            CHECK(v >= 0.0);
            sum += v;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
}

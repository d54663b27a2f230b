#pragma once

#include <optional>
#include <span>
#include <utility>

#include "fblab/channel.hpp"
#include "fblab/report.hpp"

namespace fblab {

// Capacity, capacity-achieving distributions and the derived single-letter
// quantities. All information values are stored in the configured units
// (variances in units^2).
struct CapacitySolution {
    Units units;
    double C = 0.0;
    std::vector<double> input_dist;  // DMC only
    std::vector<double> caod;        // DMC only
    double awgn_power = -1.0;        // >= 0  =>  caod is N(0, 1 + power)
    double V = 0.0;                  // dispersion
    std::vector<double> d_per_input; // d(x) = D(W(.|x) || caod)
    double a1 = 0.0;                 // max_x Var[i(x;Y) | X=x], single letter
    double gap = 0.0;                // certified optimality gap
    double cost_multiplier = 0.0;    // Lagrange multiplier when cost-constrained

    bool is_awgn() const { return awgn_power >= 0.0; }
    JValue to_json() const;
};

// Alternating maximization with the standard upper/lower sandwich
//   sum_x P(x) D(W_x||Q)  <=  C  <=  max_x D(W_x||Q)
// as the stopping certificate; cost constraints handled by bisection on a
// Lagrange multiplier. `init` overrides the uniform starting point.
CapacitySolution blahut_arimoto(const DmcSpec& dmc, double tol, int max_iter,
                                Units units = Units::bits(),
                                std::optional<std::vector<double>> init = std::nullopt);

CapacitySolution awgn_capacity(const AwgnSpec& spec, Units units = Units::bits());
std::pair<double, double> awgn_capacity_dispersion(const AwgnSpec& spec, Units units = Units::bits());

CapacitySolution solve_capacity(const Channel& ch, double tol = 1e-9, int max_iter = 200000,
                                Units units = Units::bits());

// Variance of the single-letter information density under P_X* x W
// (conditional-variance form; equals the usual dispersion when all active
// d(x) coincide with C).
double dmc_dispersion(const DmcSpec& dmc, const CapacitySolution& sol);

double information_density(const Channel& ch, const CapacitySolution& sol,
                           std::span<const int> x_word, std::span<const int> y_word);
double information_density_awgn(const AwgnSpec& spec, std::span<const double> x_word,
                                std::span<const double> y_word, Units units = Units::bits());

// Single-letter D(W(.|x) || caod) and Var[i(x;Y)|X=x] for one input, nats.
double dmc_d_of_input_nats(const DmcSpec& dmc, std::span<const double> caod, int x);
double dmc_infodens_var_nats(const DmcSpec& dmc, std::span<const double> caod, int x);

// AWGN closed forms (nats): conditional divergence and information-density
// variance of a word with squared norm `norm2` at blocklength n.
double awgn_d_of_word_nats(double power, int n, double norm2);     // D(P_{Y^n|x} || P*^n)
double awgn_infodens_var_nats(double power, int n, double norm2);  // Var[i(x;Y^n)|x]

BoundReport caod_audit(const Channel& ch, const CapacitySolution& sol, double tol = 1e-6);

}  // namespace fblab

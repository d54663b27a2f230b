#pragma once

#include <functional>
#include <span>
#include <vector>

#include "fblab/capacity.hpp"
#include "fblab/codes.hpp"
#include "fblab/report.hpp"

namespace fblab {

enum class GaussianKind { iid_gaussian, spherical, peaky };

struct GaussianGenSpec {
    GaussianKind kind = GaussianKind::iid_gaussian;
    int n = 0;
    int M = 0;
    double power = 1.0;
    std::uint64_t seed = 1;
    double delta_n = 0.0;  // peaky only, in (0,1)
};

struct GenerateResult {
    Codebook code;
    int rescaled_count = 0;  // iid rows projected back to the power sphere
};

GenerateResult generate_gaussian_code(const GaussianGenSpec& spec);

// |E[(A X, X)] - P tr A| against the explicit converse budget
//   2(1+P) sqrt(n) sqrt(nC - log M + b sqrt n),
//   b = sqrt(2 (9/4 + 3P) / (1-eps)) + ln(2/(1-eps))        (nats)
// plus the A = I refinement 2(1+P)(nC - log M + b sqrt n).
struct QuadraticFormReport {
    BoundReport bound;        // general A
    BoundReport refinement;   // A = I form evaluated on trace(Sigma)
    double trace_a = 0.0;
    double quad_mean = 0.0;        // E[(A X, X)] over the codebook
    double a_eig_min = 0.0, a_eig_max = 0.0;          // certification of -I <= A <= I
    double sigma_eig_min = 0.0, sigma_eig_max = 0.0;  // spectrum of E[x x^T]
    double b_const = 0.0;     // nats
};
QuadraticFormReport quadratic_form_report(const AwgnSpec& awgn, const Codebook& code,
                                          const std::vector<std::vector<double>>& a_matrix, double eps);

struct LqProfile {
    std::vector<double> qs;                        // kInf for the sup norm
    std::vector<std::vector<double>> norms_sorted; // per q, ascending per-codeword norms
    std::vector<double> median;
    std::vector<double> upper_half_quantile;       // 75th percentile
    double mean_l4_pow4 = 0.0;                     // codebook average of ||x||_4^4
    double sample_sd_l4_pow4 = 0.0;

    double fraction_exceeding(size_t q_index, double threshold) const;
};
LqProfile lq_profile(const Codebook& code, std::span<const double> qs);

double lq_norm(std::span<const double> x, double q);  // q = kInf for sup

// Least-squares slope of log(median ||x||_q) against log n over an n-grid of
// freshly generated codebooks; for q = inf the log log n slope is also fitted.
struct ScalingFit {
    double alpha_hat = 0.0;
    double ci_half = 0.0;  // approximate 95% half-width
    double alpha_hat_loglog = 0.0;
    double ci_half_loglog = 0.0;
    std::vector<double> n_grid;
    std::vector<double> medians;
};
ScalingFit scaling_exponent_fit(const GaussianGenSpec& base, std::span<const int> n_grid, double q,
                                const std::function<double(int)>& delta_of_n = nullptr);

// Empirical P[||x||_inf >= sqrt(lambda n)] per lambda, with the dispersion
// bracket nC - sqrt(nV) Q^{-1}(eps) + 2 log n - log(M/2) evaluated for
// reference (its additive log b is unspecified, so formula-only).
struct LinfTail {
    std::vector<double> lambdas;
    std::vector<double> fractions;
    double bracket = 0.0;  // units
    std::string note;
};
LinfTail linf_excess_tail(const AwgnSpec& awgn, const Codebook& code, std::span<const double> lambdas,
                          double eps, Units units = Units::bits());

// Right-multiplies every codeword by a Haar-random rotation (QR of a
// Gaussian matrix); used by invariance checks.
Codebook apply_random_rotation(const Codebook& code, std::uint64_t seed);

}  // namespace fblab

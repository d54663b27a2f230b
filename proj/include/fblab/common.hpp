#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fblab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Information quantities are computed in nats internally and converted on
// output. `scale` maps nats to the configured unit (bits by default);
// squared quantities (variances, dispersions) use scale^2.
enum class LogBase { bits, nats };

struct Units {
    LogBase base = LogBase::bits;
    double scale() const { return base == LogBase::bits ? 1.4426950408889634074 : 1.0; }
    double scale2() const { double s = scale(); return s * s; }
    const char* name() const { return base == LogBase::bits ? "bits" : "nats"; }
    static Units bits() { return Units{LogBase::bits}; }
    static Units nats() { return Units{LogBase::nats}; }
};

// 0*log(0) = 0; p*log(p/0) = +inf for p>0.
inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

inline double xlogy_ratio(double p, double q) {
    if (p <= 0.0) return 0.0;
    if (q <= 0.0) return kInf;
    return p * std::log(p / q);
}

// Binary entropy, nats.
inline double binary_entropy(double p) { return -xlogx(p) - xlogx(1.0 - p); }

double normal_cdf(double x);
double normal_ccdf(double x);          // Q(x)
double inverse_normal_ccdf(double p);  // Q^{-1}(p)

struct ConfidenceInterval {
    double estimate = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    double level = 0.99;
};

// Two-sided normal CI for a sample mean.
ConfidenceInterval mean_ci(double mean, double sample_var, std::uint64_t n, double level = 0.99);
// Wilson score interval for a binomial proportion.
ConfidenceInterval binomial_ci(std::uint64_t successes, std::uint64_t trials, double level = 0.99);

// Counter-based deterministic generator: the value of draw `i` on stream `s`
// depends only on (master, s, i), so results are independent of scheduling.
// Mixing function: two chained splitmix64 finalizer rounds.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t master) : master_(master) {}

    std::uint64_t bits(std::uint64_t stream, std::uint64_t index) const {
        std::uint64_t z = master_ ^ (0x9E3779B97F4A7C15ULL * (stream + 1));
        z = splitmix(z);
        z ^= 0xBF58476D1CE4E5B9ULL * (index + 1);
        return splitmix(z);
    }
    // in [0,1)
    double uniform(std::uint64_t stream, std::uint64_t index) const {
        return double(bits(stream, index) >> 11) * 0x1.0p-53;
    }
    // standard normal via Box-Muller; draw i consumes counters (2i, 2i+1)
    double gaussian(std::uint64_t stream, std::uint64_t index) const {
        double u1 = uniform(stream, 2 * index);
        double u2 = uniform(stream, 2 * index + 1);
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }
    std::uint64_t master() const { return master_; }

  private:
    static std::uint64_t splitmix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    std::uint64_t master_;
};

// Work is split into a fixed number of shards regardless of thread count and
// reduced in shard order, so numeric results are thread-count invariant.
struct Parallel {
    int threads = 1;
    int shards = 64;

    void for_shards(std::uint64_t items, const std::function<void(int shard, std::uint64_t lo, std::uint64_t hi)>& fn) const;

    static Parallel single() { return Parallel{1, 64}; }
};

// Deterministic pairwise tree reduction over fixed shards.
double sharded_sum(const Parallel& par, std::uint64_t items,
                   const std::function<double(std::uint64_t lo, std::uint64_t hi)>& block_sum);

std::string format_sig12(double v);  // 12 significant digits, used by all emitters

struct FblabError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace fblab

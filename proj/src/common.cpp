#include "fblab/common.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <thread>

namespace fblab {

double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.70710678118654752440); }
double normal_ccdf(double x) { return 0.5 * std::erfc(x * 0.70710678118654752440); }

// Wichura's AS241 (PPND16) rational approximation for the normal quantile.
double inverse_normal_ccdf(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        if (p == 0.0) return kInf;
        if (p == 1.0) return -kInf;
        throw FblabError("inverse_normal_ccdf: p outside [0,1]");
    }
    const double q = p - 0.5;  // computes Phi^{-1}(p), negated on return
    double r, val;
    if (std::fabs(q) <= 0.425) {
        r = 0.180625 - q * q;
        val = q *
              (((((((2509.0809287301226727 * r + 33430.575583588128105) * r + 67265.770927008700853) * r +
                   45921.953931549871457) * r +
                  13731.693765509461125) * r +
                 1971.5909503065514427) * r +
                133.14166789178437745) * r +
               3.387132872796366608) /
              (((((((5226.495278852545703 * r + 28729.085735721942674) * r + 39307.89580009271061) * r +
                   21213.794301586595867) * r +
                  5394.1960214247511077) * r +
                 687.1870074920579083) * r +
                42.313330701600911252) * r +
               1.0);
        return -val;
    }
    r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    if (r <= 5.0) {
        r -= 1.6;
        val = (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r + 0.24178072517745061177) * r +
                   1.27045825245236838258) * r +
                  3.64784832476320460504) * r +
                 5.7694972214606914055) * r +
                4.6303378461565452959) * r +
               1.42343711074968357734) /
              (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r + 0.0151986665636164571966) * r +
                   0.14810397642748007459) * r +
                  0.68976733498510000455) * r +
                 1.6763848301838038494) * r +
                2.05319162663775882187) * r +
               1.0);
    } else {
        r -= 5.0;
        val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r + 0.0012426609473880784386) * r +
                   0.026532189526576123093) * r +
                  0.29656057182850489123) * r +
                 1.7848265399172913358) * r +
                5.4637849111641143699) * r +
               6.6579046435011037772) /
              (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r + 1.8463183175100546818e-5) * r +
                   7.868691311456132591e-4) * r +
                  0.0148753612908506148525) * r +
                 0.13692988092273580531) * r +
                0.59983220655588793769) * r +
               1.0);
    }
    if (q < 0.0) val = -val;
    return -val;
}

namespace {
double z_for_level(double level) {
    // two-sided: z = Q^{-1}((1-level)/2)
    return inverse_normal_ccdf((1.0 - level) / 2.0);
}
}  // namespace

ConfidenceInterval mean_ci(double mean, double sample_var, std::uint64_t n, double level) {
    ConfidenceInterval ci;
    ci.estimate = mean;
    ci.level = level;
    double half = n > 1 ? z_for_level(level) * std::sqrt(std::max(sample_var, 0.0) / double(n)) : kInf;
    ci.lo = mean - half;
    ci.hi = mean + half;
    return ci;
}

ConfidenceInterval binomial_ci(std::uint64_t successes, std::uint64_t trials, double level) {
    ConfidenceInterval ci;
    ci.level = level;
    if (trials == 0) {
        ci.estimate = 0.0;
        ci.lo = 0.0;
        ci.hi = 1.0;
        return ci;
    }
    double z = z_for_level(level);
    double n = double(trials);
    double phat = double(successes) / n;
    ci.estimate = phat;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (phat + z2 / (2.0 * n)) / denom;
    double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    ci.lo = std::max(0.0, center - half);
    ci.hi = std::min(1.0, center + half);
    return ci;
}

void Parallel::for_shards(std::uint64_t items,
                          const std::function<void(int, std::uint64_t, std::uint64_t)>& fn) const {
    if (items == 0) return;
    int ns = std::max(1, shards);
    auto bounds = [&](int s) {
        std::uint64_t lo = items * std::uint64_t(s) / std::uint64_t(ns);
        std::uint64_t hi = items * std::uint64_t(s + 1) / std::uint64_t(ns);
        return std::pair<std::uint64_t, std::uint64_t>(lo, hi);
    };
    int nthreads = std::max(1, threads);
    if (nthreads == 1) {
        for (int s = 0; s < ns; ++s) {
            auto [lo, hi] = bounds(s);
            if (lo < hi) fn(s, lo, hi);
        }
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(size_t(nthreads));
    std::atomic<int> next{0};
    for (int t = 0; t < nthreads; ++t) {
        pool.emplace_back([&]() {
            while (true) {
                int s = next.fetch_add(1);
                if (s >= ns) break;
                auto [lo, hi] = bounds(s);
                if (lo < hi) fn(s, lo, hi);
            }
        });
    }
    for (auto& th : pool) th.join();
}

double sharded_sum(const Parallel& par, std::uint64_t items,
                   const std::function<double(std::uint64_t, std::uint64_t)>& block_sum) {
    int ns = std::max(1, par.shards);
    std::vector<double> partial(size_t(ns), 0.0);
    par.for_shards(items, [&](int s, std::uint64_t lo, std::uint64_t hi) { partial[size_t(s)] = block_sum(lo, hi); });
    // pairwise tree reduction in fixed order
    std::vector<double> cur = partial;
    while (cur.size() > 1) {
        std::vector<double> nxt;
        nxt.reserve((cur.size() + 1) / 2);
        for (size_t i = 0; i + 1 < cur.size(); i += 2) nxt.push_back(cur[i] + cur[i + 1]);
        if (cur.size() % 2) nxt.push_back(cur.back());
        cur.swap(nxt);
    }
    return cur.empty() ? 0.0 : cur[0];
}

std::string format_sig12(double v) {
    char buf[64];
    if (std::isnan(v)) return "null";
    if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace fblab

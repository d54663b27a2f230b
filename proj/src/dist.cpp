#include "fblab/dist.hpp"

#include <cmath>

namespace fblab {

void FiniteDist::validate(double tol) const {
    double sum = 0.0;
    for (double m : masses) {
        if (m < 0.0) throw FblabError("distribution has a negative mass");
        sum += m;
    }
    if (std::fabs(sum - 1.0) > tol) throw FblabError("distribution masses do not sum to 1");
}

std::uint64_t ProductDist::size() const {
    std::uint64_t s = 1;
    for (int i = 0; i < n; ++i) s *= base.size();
    return s;
}

double ProductDist::mass(std::uint64_t index) const {
    double m = 1.0;
    std::uint64_t b = base.size();
    for (int i = 0; i < n; ++i) {
        m *= base[size_t(index % b)];
        index /= b;
    }
    return m;
}

double kl_nats(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw FblabError("kl: dimension mismatch");
    double d = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
        if (p[i] > 0.0 && q[i] <= 0.0) return kInf;
        d += xlogy_ratio(p[i], q[i]);
    }
    return d < 0.0 ? 0.0 : d;
}

double binary_kl_nats(double x, double y) {
    if (x < 0.0 || x > 1.0) throw FblabError("binary_kl: x outside [0,1]");
    if (y < 0.0 || y > 1.0) throw FblabError("binary_kl: y outside [0,1]");
    double d = xlogy_ratio(x, y) + xlogy_ratio(1.0 - x, 1.0 - y);
    return d < 0.0 ? 0.0 : d;
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw FblabError("tv: dimension mismatch");
    double s = 0.0;
    for (size_t i = 0; i < p.size(); ++i) s += std::fabs(p[i] - q[i]);
    return 0.5 * s;
}

double entropy_nats(std::span<const double> p) {
    double h = 0.0;
    for (double x : p) h -= xlogx(x);
    return h;
}

}  // namespace fblab

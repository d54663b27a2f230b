#pragma once

#include <span>
#include <vector>

#include "fblab/common.hpp"

namespace fblab {

// Explicit probability vector over an indexed alphabet.
struct FiniteDist {
    std::vector<double> masses;

    FiniteDist() = default;
    explicit FiniteDist(std::vector<double> m) : masses(std::move(m)) {}

    size_t size() const { return masses.size(); }
    double operator[](size_t i) const { return masses[i]; }

    // entries >= 0, sum within tol of 1
    void validate(double tol = 1e-12) const;
};

// Lazily evaluated n-fold product of a base distribution.
struct ProductDist {
    FiniteDist base;
    int n = 0;

    std::uint64_t size() const;
    // mass of the product event given by outcome index (mixed-radix digits of base.size())
    double mass(std::uint64_t index) const;
};

// All divergences below are returned in nats; callers convert via Units.
double kl_nats(std::span<const double> p, std::span<const double> q);
double binary_kl_nats(double x, double y);
double tv_distance(std::span<const double> p, std::span<const double> q);
double entropy_nats(std::span<const double> p);

inline double kl_nats(const FiniteDist& p, const FiniteDist& q) { return kl_nats(std::span(p.masses), std::span(q.masses)); }
inline double tv_distance(const FiniteDist& p, const FiniteDist& q) { return tv_distance(std::span(p.masses), std::span(q.masses)); }

}  // namespace fblab

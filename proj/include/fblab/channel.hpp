#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fblab/common.hpp"
#include "fblab/dist.hpp"

namespace fblab {

// Single-letter DMC: row-stochastic matrix W[x][y], optional per-letter cost
// with budget (both present or both absent).
struct DmcSpec {
    int input_size = 0;
    int output_size = 0;
    std::vector<std::vector<double>> W;
    std::optional<std::vector<double>> cost;
    std::optional<double> budget;

    void validate(double tol = 1e-12) const;
    std::span<const double> row(int x) const { return W[size_t(x)]; }
    bool cost_constrained() const { return cost.has_value(); }
    // max_{a,a'} D(W_a || W_a') is finite iff no zero entries in used columns
    bool has_zero_entry() const;

    static DmcSpec bsc(double delta);
    static DmcSpec bec(double erasure);
};

// AWGN(P): per-dimension power budget, unit noise variance.
struct AwgnSpec {
    double power = 0.0;
    void validate() const;
};

using Channel = std::variant<DmcSpec, AwgnSpec>;

Channel load_channel(const std::string& path);
Channel parse_channel_json(const std::string& json_text);
std::string channel_to_json(const Channel& ch);

inline bool is_dmc(const Channel& c) { return std::holds_alternative<DmcSpec>(c); }
inline const DmcSpec& as_dmc(const Channel& c) { return std::get<DmcSpec>(c); }
inline const AwgnSpec& as_awgn(const Channel& c) { return std::get<AwgnSpec>(c); }

}  // namespace fblab

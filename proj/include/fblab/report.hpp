#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fblab/common.hpp"
#include "fblab/json_io.hpp"

namespace fblab {

enum class Verdict { pass, fail, inconclusive };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        default: return "inconclusive";
    }
}

// One named inequality evaluation. `relation` documents the orientation;
// slack is defined so that pass <=> slack >= -1e-9 in exact mode.
struct BoundReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    std::string relation = "lhs<=rhs";  // or "lhs>=rhs"
    double slack = 0.0;
    Verdict verdict = Verdict::pass;
    std::vector<std::pair<std::string, double>> constants;
    std::string note;
    std::string units = "bits";

    static constexpr double kSlackTol = 1e-9;

    void finish_exact() {
        slack = relation == "lhs<=rhs" ? rhs - lhs : lhs - rhs;
        if (std::isnan(slack)) {
            verdict = Verdict::inconclusive;
        } else {
            verdict = slack >= -kSlackTol ? Verdict::pass : Verdict::fail;
        }
    }
    void add_constant(const std::string& k, double v) { constants.emplace_back(k, v); }
    bool passed() const { return verdict == Verdict::pass; }

    JValue to_json() const;
};

}  // namespace fblab

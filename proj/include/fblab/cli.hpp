#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fblab/common.hpp"
#include "fblab/json_io.hpp"

namespace fblab {

struct RunConfig {
    Units units = Units::bits();
    std::uint64_t enumeration_guard = std::uint64_t(1) << 24;
    std::uint64_t master_seed = 1;
    int thread_count = 1;
    std::string output_path;
    double tol = 1e-9;

    void validate() const;
    Parallel parallel() const { return Parallel{thread_count, 64}; }
    JValue to_json() const;
};

// Exit codes: 0 computed/pass, 1 usage or I/O error, 2 bound violation,
// 3 inconclusive verdict.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Deterministic small-instance battery; payload is byte-identical across
// thread counts for a fixed seed.
JValue selftest_payload(const RunConfig& cfg);

struct SweepOutput {
    JValue series = JValue::object();
    std::string csv;
    int exit_code = 0;
};
SweepOutput run_sweep(const RunConfig& cfg, const std::string& spec_json);

JValue make_envelope(const RunConfig& cfg,
                     const std::vector<std::pair<std::string, std::string>>& input_digests,
                     JValue payload);

extern const char* kToolVersion;

}  // namespace fblab

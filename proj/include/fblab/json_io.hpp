#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "fblab/common.hpp"

namespace fblab {

// Deterministic JSON value for emitted reports: insertion-ordered objects,
// doubles rendered with 12 significant digits. Inputs are parsed with
// nlohmann::json (json_io.cpp); this type is only for output.
class JValue {
  public:
    enum class Kind { null, boolean, number, integer, string, array, object };

    JValue() : kind_(Kind::null) {}
    JValue(bool b) : kind_(Kind::boolean), bool_(b) {}
    JValue(double d) : kind_(Kind::number), num_(d) {}
    JValue(int i) : kind_(Kind::integer), int_(i) {}
    JValue(std::int64_t i) : kind_(Kind::integer), int_(i) {}
    JValue(std::uint64_t i) : kind_(Kind::integer), int_(std::int64_t(i)) {}
    JValue(const char* s) : kind_(Kind::string), str_(s) {}
    JValue(std::string s) : kind_(Kind::string), str_(std::move(s)) {}

    static JValue array();
    static JValue object();
    static JValue array_of(const std::vector<double>& xs);

    JValue& push_back(JValue v);
    JValue& set(const std::string& key, JValue v);  // insertion order preserved

    std::string dump() const;
    Kind kind() const { return kind_; }

  private:
    void write(std::string& out) const;
    Kind kind_;
    bool bool_ = false;
    double num_ = 0.0;
    std::int64_t int_ = 0;
    std::string str_;
    std::vector<JValue> arr_;
    std::vector<std::pair<std::string, JValue>> obj_;
};

std::string sha256_hex(const std::string& bytes);
std::string sha256_file_hex(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Parse helpers over nlohmann (throw FblabError with context on failure).
std::vector<double> parse_prob_vector(const std::string& json_text, const std::string& what);
std::vector<std::vector<double>> parse_cost_csv(const std::string& csv_text);

}  // namespace fblab

#include "fblab/channel.hpp"

#include <cmath>
#include <sstream>

#include "fblab/json_io.hpp"
#include "json.hpp"

namespace fblab {

void DmcSpec::validate(double tol) const {
    if (input_size < 1 || output_size < 1) throw FblabError("dmc: empty alphabet");
    if (int(W.size()) != input_size) throw FblabError("dmc: matrix row count mismatch");
    for (int x = 0; x < input_size; ++x) {
        if (int(W[size_t(x)].size()) != output_size) throw FblabError("dmc: ragged matrix");
        double sum = 0.0;
        for (double w : W[size_t(x)]) {
            if (w < 0.0) throw FblabError("dmc: negative probability in row " + std::to_string(x));
            sum += w;
        }
        if (std::fabs(sum - 1.0) > tol)
            throw FblabError("row " + std::to_string(x) + " not stochastic (sum " + std::to_string(sum) + ")");
    }
    if (cost.has_value() != budget.has_value())
        throw FblabError("dmc: cost and budget must both be present or both absent");
    if (cost) {
        if (int(cost->size()) != input_size) throw FblabError("dmc: cost vector length mismatch");
        for (double c : *cost)
            if (c < 0.0) throw FblabError("dmc: negative cost");
        double cmin = kInf;
        for (double c : *cost) cmin = std::min(cmin, c);
        if (*budget < cmin) throw FblabError("dmc: infeasible budget (below min cost)");
    }
}

bool DmcSpec::has_zero_entry() const {
    for (int y = 0; y < output_size; ++y) {
        bool used = false, zero = false;
        for (int x = 0; x < input_size; ++x) {
            if (W[size_t(x)][size_t(y)] > 0.0) used = true;
            else zero = true;
        }
        if (used && zero) return true;
    }
    return false;
}

DmcSpec DmcSpec::bsc(double delta) {
    DmcSpec d;
    d.input_size = d.output_size = 2;
    d.W = {{1.0 - delta, delta}, {delta, 1.0 - delta}};
    return d;
}

DmcSpec DmcSpec::bec(double erasure) {
    DmcSpec d;
    d.input_size = 2;
    d.output_size = 3;
    d.W = {{1.0 - erasure, erasure, 0.0}, {0.0, erasure, 1.0 - erasure}};
    return d;
}

void AwgnSpec::validate() const {
    if (!(power > 0.0) || !std::isfinite(power)) throw FblabError("awgn: power must be finite and positive");
}

Channel parse_channel_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const std::exception& e) {
        throw FblabError(std::string("channel file: malformed JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("type")) throw FblabError("channel file: missing \"type\"");
    std::string type = j["type"].get<std::string>();
    if (type == "dmc") {
        DmcSpec d;
        if (!j.contains("W") || !j["W"].is_array()) throw FblabError("channel file: dmc requires matrix \"W\"");
        for (const auto& row : j["W"]) {
            std::vector<double> r;
            for (const auto& v : row) r.push_back(v.get<double>());
            d.W.push_back(std::move(r));
        }
        d.input_size = int(d.W.size());
        d.output_size = d.W.empty() ? 0 : int(d.W[0].size());
        if (j.contains("cost")) {
            std::vector<double> c;
            for (const auto& v : j["cost"]) c.push_back(v.get<double>());
            d.cost = std::move(c);
        }
        if (j.contains("budget")) d.budget = j["budget"].get<double>();
        d.validate();
        return d;
    }
    if (type == "awgn") {
        AwgnSpec a;
        if (!j.contains("power")) throw FblabError("channel file: awgn requires \"power\"");
        a.power = j["power"].get<double>();
        a.validate();
        return a;
    }
    throw FblabError("channel file: unknown type \"" + type + "\"");
}

Channel load_channel(const std::string& path) { return parse_channel_json(read_text_file(path)); }

std::string channel_to_json(const Channel& ch) {
    JValue j = JValue::object();
    if (is_dmc(ch)) {
        const DmcSpec& d = as_dmc(ch);
        j.set("type", "dmc");
        JValue w = JValue::array();
        for (const auto& row : d.W) w.push_back(JValue::array_of(row));
        j.set("W", std::move(w));
        if (d.cost) j.set("cost", JValue::array_of(*d.cost));
        if (d.budget) j.set("budget", *d.budget);
    } else {
        j.set("type", "awgn");
        j.set("power", as_awgn(ch).power);
    }
    return j.dump();
}

}  // namespace fblab

#include "fblab/json_io.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fblab {

JValue JValue::array() {
    JValue v;
    v.kind_ = Kind::array;
    return v;
}

JValue JValue::object() {
    JValue v;
    v.kind_ = Kind::object;
    return v;
}

JValue JValue::array_of(const std::vector<double>& xs) {
    JValue v = array();
    for (double x : xs) v.push_back(JValue(x));
    return v;
}

JValue& JValue::push_back(JValue v) {
    if (kind_ != Kind::array) throw FblabError("JValue: push_back on non-array");
    arr_.push_back(std::move(v));
    return *this;
}

JValue& JValue::set(const std::string& key, JValue v) {
    if (kind_ != Kind::object) throw FblabError("JValue: set on non-object");
    for (auto& kv : obj_) {
        if (kv.first == key) {
            kv.second = std::move(v);
            return *this;
        }
    }
    obj_.emplace_back(key, std::move(v));
    return *this;
}

namespace {
void write_escaped(std::string& out, const std::string& s) {
    out.push_back('"');
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out.push_back(c);
                }
        }
    }
    out.push_back('"');
}
}  // namespace

void JValue::write(std::string& out) const {
    switch (kind_) {
        case Kind::null: out += "null"; break;
        case Kind::boolean: out += bool_ ? "true" : "false"; break;
        case Kind::number: out += format_sig12(num_); break;
        case Kind::integer: out += std::to_string(int_); break;
        case Kind::string: write_escaped(out, str_); break;
        case Kind::array: {
            out.push_back('[');
            for (size_t i = 0; i < arr_.size(); ++i) {
                if (i) out.push_back(',');
                arr_[i].write(out);
            }
            out.push_back(']');
            break;
        }
        case Kind::object: {
            out.push_back('{');
            for (size_t i = 0; i < obj_.size(); ++i) {
                if (i) out.push_back(',');
                write_escaped(out, obj_[i].first);
                out.push_back(':');
                obj_[i].second.write(out);
            }
            out.push_back('}');
            break;
        }
    }
}

std::string JValue::dump() const {
    std::string out;
    write(out);
    return out;
}

// ---------------------------------------------------------------- sha256

namespace {
struct Sha256 {
    std::array<std::uint32_t, 8> h = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                                      0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
    std::array<std::uint8_t, 64> buf{};
    std::uint64_t len = 0;

    static std::uint32_t rotr(std::uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

    void block(const std::uint8_t* p) {
        static const std::uint32_t K[64] = {
            0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4, 0xab1c5ed5,
            0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174,
            0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
            0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967,
            0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85,
            0xa2bfe8a1, 0xa81a664b, 0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
            0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
            0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2};
        std::uint32_t w[64];
        for (int i = 0; i < 16; ++i)
            w[i] = (std::uint32_t(p[4 * i]) << 24) | (std::uint32_t(p[4 * i + 1]) << 16) |
                   (std::uint32_t(p[4 * i + 2]) << 8) | std::uint32_t(p[4 * i + 3]);
        for (int i = 16; i < 64; ++i) {
            std::uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
            std::uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
            w[i] = w[i - 16] + s0 + w[i - 7] + s1;
        }
        auto a = h;
        for (int i = 0; i < 64; ++i) {
            std::uint32_t S1 = rotr(a[4], 6) ^ rotr(a[4], 11) ^ rotr(a[4], 25);
            std::uint32_t ch = (a[4] & a[5]) ^ (~a[4] & a[6]);
            std::uint32_t t1 = a[7] + S1 + ch + K[i] + w[i];
            std::uint32_t S0 = rotr(a[0], 2) ^ rotr(a[0], 13) ^ rotr(a[0], 22);
            std::uint32_t maj = (a[0] & a[1]) ^ (a[0] & a[2]) ^ (a[1] & a[2]);
            std::uint32_t t2 = S0 + maj;
            a[7] = a[6]; a[6] = a[5]; a[5] = a[4]; a[4] = a[3] + t1;
            a[3] = a[2]; a[2] = a[1]; a[1] = a[0]; a[0] = t1 + t2;
        }
        for (int i = 0; i < 8; ++i) h[i] += a[i];
    }

    void update(const std::uint8_t* p, size_t n) {
        size_t fill = size_t(len % 64);
        len += n;
        if (fill) {
            size_t take = std::min(n, 64 - fill);
            std::memcpy(buf.data() + fill, p, take);
            p += take;
            n -= take;
            if (fill + take == 64) block(buf.data());
            else return;
        }
        while (n >= 64) {
            block(p);
            p += 64;
            n -= 64;
        }
        if (n) std::memcpy(buf.data(), p, n);
    }

    std::string finish() {
        std::uint64_t bits = len * 8;
        std::uint8_t pad[72] = {0x80};
        size_t padlen = size_t((len % 64 < 56) ? (56 - len % 64) : (120 - len % 64));
        update(pad, padlen);
        std::uint8_t lenb[8];
        for (int i = 0; i < 8; ++i) lenb[i] = std::uint8_t(bits >> (56 - 8 * i));
        update(lenb, 8);
        static const char* hex = "0123456789abcdef";
        std::string out;
        out.reserve(64);
        for (std::uint32_t v : h)
            for (int i = 28; i >= 0; i -= 4) out.push_back(hex[(v >> i) & 0xf]);
        return out;
    }
};
}  // namespace

std::string sha256_hex(const std::string& bytes) {
    Sha256 s;
    s.update(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size());
    return s.finish();
}

std::string sha256_file_hex(const std::string& path) { return sha256_hex(read_text_file(path)); }

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FblabError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FblabError("cannot write file: " + path);
    out << content;
}

std::vector<double> parse_prob_vector(const std::string& json_text, const std::string& what) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const std::exception& e) {
        throw FblabError(what + ": malformed JSON: " + e.what());
    }
    const nlohmann::json* arr = &j;
    if (j.is_object()) {
        if (!j.contains("masses")) throw FblabError(what + ": expected array or {\"masses\": [...]}");
        arr = &j["masses"];
    }
    if (!arr->is_array()) throw FblabError(what + ": expected a JSON array of masses");
    std::vector<double> out;
    for (const auto& x : *arr) {
        if (!x.is_number()) throw FblabError(what + ": non-numeric mass");
        out.push_back(x.get<double>());
    }
    return out;
}

std::vector<std::vector<double>> parse_cost_csv(const std::string& csv_text) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(csv_text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace fblab

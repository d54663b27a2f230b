#include "fblab/report.hpp"

namespace fblab {

JValue BoundReport::to_json() const {
    JValue j = JValue::object();
    j.set("name", name);
    j.set("relation", relation);
    j.set("lhs", lhs);
    j.set("rhs", rhs);
    j.set("slack", slack);
    j.set("verdict", verdict_name(verdict));
    j.set("units", units);
    JValue c = JValue::object();
    for (const auto& kv : constants) c.set(kv.first, kv.second);
    j.set("constants", std::move(c));
    if (!note.empty()) j.set("note", note);
    return j;
}

}  // namespace fblab

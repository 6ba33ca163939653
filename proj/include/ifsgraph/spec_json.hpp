#pragma once

// Canonical IFS dataset JSON:
//   { "field": {"a": "3/2"}, "expansion": {"b": "2", "c": "-1"},
//     "maps": [ {"sym": {"x": "0", "y": "-1", "reflected": false}, "t": [0, -1]}, ... ] }
// Rationals are strings "p/q" or "p"; key order is fixed; unknown keys are
// rejected.

#include "ifsgraph/ifs.hpp"

#include <json.hpp>

#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace ifsgraph {

using Json = nlohmann::ordered_json;

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Violation> violations)
      : std::runtime_error(summarize(violations)), violations_(std::move(violations)) {}
  [[nodiscard]] const std::vector<Violation>& violations() const { return violations_; }

 private:
  static std::string summarize(const std::vector<Violation>& vs) {
    std::string s = "invalid IFS specification";
    for (const auto& v : vs) s += "; " + describe(v);
    return s;
  }
  std::vector<Violation> violations_;
};

namespace json_detail {

inline void expect_object(const Json& j, std::string_view where, std::initializer_list<std::string_view> keys) {
  if (!j.is_object()) throw SchemaError(std::string(where) + ": expected an object");
  for (const auto& [k, _] : j.items()) {
    bool known = false;
    for (auto key : keys) known = known || k == key;
    if (!known) throw SchemaError(std::string(where) + ": unknown key \"" + k + "\"");
  }
  for (auto key : keys)
    if (!j.contains(key)) throw SchemaError(std::string(where) + ": missing key \"" + std::string(key) + "\"");
}

inline Rational rational(const Json& j, std::string_view where) {
  if (!j.is_string()) throw SchemaError(std::string(where) + ": rational must be a string \"p/q\"");
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const std::exception& e) {
    throw SchemaError(std::string(where) + ": " + e.what());
  }
}

inline Rational integer(const Json& j, std::string_view where) {
  if (!j.is_number_integer()) throw SchemaError(std::string(where) + ": expected an integer");
  if (j.is_number_unsigned()) return Rational(Integer(std::to_string(j.get<std::uint64_t>())));
  return Rational(static_cast<long>(j.get<std::int64_t>()));
}

inline Json integer_json(const Rational& r) {
  if (!r.is_integer() || !r.num().fits_slong_p()) throw SchemaError("translation entry not representable: " + r.str());
  return static_cast<std::int64_t>(r.num().get_si());
}

}  // namespace json_detail

inline Json symmetry_to_json(const SymmetryDescriptor& s) {
  Json j;
  j["x"] = s.x.str();
  j["y"] = s.y.str();
  j["reflected"] = s.reflected;
  return j;
}

inline SymmetryDescriptor symmetry_from_json(const Json& j, std::string_view where) {
  json_detail::expect_object(j, where, {"x", "y", "reflected"});
  if (!j["reflected"].is_boolean()) throw SchemaError(std::string(where) + ": reflected must be a boolean");
  return {json_detail::rational(j["x"], where), json_detail::rational(j["y"], where), j["reflected"].get<bool>()};
}

inline Json spec_to_json(const IfsSpec& spec) {
  Json j;
  j["field"] = Json{{"a", spec.field.a.str()}};
  j["expansion"] = Json{{"b", spec.b.str()}, {"c", spec.c.str()}};
  Json maps = Json::array();
  for (const MapSpec& m : spec.maps) {
    Json mj;
    mj["sym"] = symmetry_to_json(m.sym);
    mj["t"] = Json::array({json_detail::integer_json(m.t.x), json_detail::integer_json(m.t.y)});
    maps.push_back(std::move(mj));
  }
  j["maps"] = std::move(maps);
  return j;
}

/// Parses the schema; structural errors raise SchemaError. Does not run
/// validate(); a degenerate rotation parameter is a schema error.
inline IfsSpec spec_from_json(const Json& j) {
  using namespace json_detail;
  expect_object(j, "spec", {"field", "expansion", "maps"});
  expect_object(j["field"], "field", {"a"});
  expect_object(j["expansion"], "expansion", {"b", "c"});
  IfsSpec spec;
  try {
    spec.field = make_field(rational(j["field"]["a"], "field.a"));
  } catch (const SchemaError&) {
    throw;
  } catch (const std::exception& e) {
    throw SchemaError(std::string("field.a: ") + e.what());
  }
  spec.b = rational(j["expansion"]["b"], "expansion.b");
  spec.c = rational(j["expansion"]["c"], "expansion.c");
  if (!j["maps"].is_array()) throw SchemaError("maps: expected an array");
  for (std::size_t k = 0; k < j["maps"].size(); ++k) {
    const std::string where = "maps[" + std::to_string(k) + "]";
    const Json& mj = j["maps"][k];
    expect_object(mj, where, {"sym", "t"});
    MapSpec m;
    m.sym = symmetry_from_json(mj["sym"], where + ".sym");
    if (!mj["t"].is_array() || mj["t"].size() != 2) throw SchemaError(where + ".t: expected [x, y]");
    m.t = {integer(mj["t"][0], where + ".t"), integer(mj["t"][1], where + ".t")};
    spec.maps.push_back(std::move(m));
  }
  return spec;
}

inline IfsSpec spec_from_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
  return spec_from_json(j);
}

/// Compact canonical serialization; the content hash is taken over this.
inline std::string canonical_spec_text(const IfsSpec& spec) { return spec_to_json(spec).dump(); }

}  // namespace ifsgraph

#pragma once

// ExampleRecord: a specification together with its full analysis, and the
// record JSON used by the CLI, the service and collection files.

#include "ifsgraph/dimension.hpp"
#include "ifsgraph/spec_json.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

namespace ifsgraph {

/// Lowercase hex SHA-256.
inline std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::string hex;
  hex.reserve(2 * len);
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

inline std::string spec_id(const IfsSpec& spec) { return sha256_hex(canonical_spec_text(spec)); }

struct OutcomeSummary {
  std::string kind;  // Graph | Empty | TooComplex | OscViolation
  std::size_t candidates = 0;
  std::size_t pruned_far = 0;
  std::size_t pruned_dead = 0;
  std::optional<std::string> reason;
  std::optional<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> witness;  // 0-based words
};

struct ExampleRecord {
  std::string id;
  std::optional<std::string> parent_id;
  IfsSpec spec;
  OutcomeSummary outcome;
  std::size_t neighbor_count = 0;
  std::size_t fli = 0;
  std::optional<TopologyReport> topology;
  std::optional<DimensionReport> dimension;
  std::optional<std::string> created_at;  // set when persisted

  [[nodiscard]] bool is_graph() const { return outcome.kind == "Graph"; }
};

inline OutcomeSummary summarize(const BuildOutcome& o) {
  OutcomeSummary s;
  s.kind = outcome_kind(o);
  const BuildStats& st = outcome_stats(o);
  s.candidates = st.candidates;
  s.pruned_far = st.pruned_far;
  s.pruned_dead = st.pruned_dead;
  if (const auto* tc = std::get_if<TooComplexOutcome>(&o)) s.reason = tc->reason;
  if (const auto* osc = std::get_if<OscViolationOutcome>(&o)) s.witness = std::make_pair(osc->word_w, osc->word_v);
  return s;
}

/// Builds the record from an already computed outcome.
inline ExampleRecord make_record(const IfsSpec& spec, const BuildOutcome& outcome) {
  ExampleRecord r;
  r.id = spec_id(spec);
  r.spec = spec;
  r.outcome = summarize(outcome);
  if (const auto* g = std::get_if<GraphOutcome>(&outcome)) {
    r.neighbor_count = g->graph.type_count();
    r.fli = g->graph.fli();
    r.topology = topology_report(g->graph);
    r.dimension = boundary_dimension(g->graph, spec.expansion_det());
  }
  return r;
}

/// Validates, builds the neighbor graph and derives all reports.
/// Throws ValidationError when the specification is invalid.
inline ExampleRecord analyze(const IfsSpec& spec, const BuildCaps& caps = {}) {
  if (auto violations = validate(spec); !violations.empty()) throw ValidationError(std::move(violations));
  return make_record(spec, build(spec, caps));
}

// ---------------------------------------------------------------- JSON

namespace json_detail {

inline std::string vertex_name(std::size_t v) { return "n" + std::to_string(v + 1); }

inline std::size_t vertex_index(const Json& j, std::size_t count, std::string_view where) {
  if (!j.is_string()) throw SchemaError(std::string(where) + ": vertex name must be a string");
  const std::string s = j.get<std::string>();
  if (s.size() < 2 || s[0] != 'n') throw SchemaError(std::string(where) + ": bad vertex name \"" + s + "\"");
  std::size_t idx = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw SchemaError(std::string(where) + ": bad vertex name \"" + s + "\"");
    idx = idx * 10 + static_cast<std::size_t>(s[i] - '0');
  }
  if (idx == 0 || idx > count) throw SchemaError(std::string(where) + ": vertex out of range \"" + s + "\"");
  return idx - 1;
}

inline std::size_t count(const Json& j, std::string_view where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
    throw SchemaError(std::string(where) + ": expected a non-negative integer");
  return j.get<std::size_t>();
}

inline double number(const Json& j, std::string_view where) {
  if (!j.is_number()) throw SchemaError(std::string(where) + ": expected a number");
  return j.get<double>();
}

inline bool boolean(const Json& j, std::string_view where) {
  if (!j.is_boolean()) throw SchemaError(std::string(where) + ": expected a boolean");
  return j.get<bool>();
}

inline Json word_json(const std::vector<std::size_t>& w) {
  Json a = Json::array();
  for (std::size_t k : w) a.push_back(k + 1);
  return a;
}

inline std::vector<std::size_t> word_from_json(const Json& j, std::string_view where) {
  if (!j.is_array()) throw SchemaError(std::string(where) + ": expected an array");
  std::vector<std::size_t> w;
  for (const auto& e : j) {
    const std::size_t k = count(e, where);
    if (k == 0) throw SchemaError(std::string(where) + ": letters are 1-based");
    w.push_back(k - 1);
  }
  return w;
}

}  // namespace json_detail

inline Json topology_to_json(const TopologyReport& t) {
  using json_detail::vertex_name;
  Json j;
  j["connected"] = t.connected;
  j["has_jordan_curve"] = t.has_jordan_curve;
  j["classification"] = to_string(t.classification);
  j["fli"] = t.fli;
  Json edges = Json::array();
  for (const auto& [k, l] : t.connectedness_edges) edges.push_back(Json::array({k + 1, l + 1}));
  j["connectedness_edges"] = std::move(edges);
  Json per = Json::object();
  for (std::size_t v = 0; v < t.per_vertex_class.size(); ++v) per[vertex_name(v)] = to_string(t.per_vertex_class[v]);
  j["per_vertex_class"] = std::move(per);
  return j;
}

inline TopologyReport topology_from_json(const Json& j, std::size_t vertices) {
  using namespace json_detail;
  expect_object(j, "topology",
                {"connected", "has_jordan_curve", "classification", "fli", "connectedness_edges", "per_vertex_class"});
  TopologyReport t;
  t.connected = boolean(j["connected"], "topology.connected");
  t.has_jordan_curve = boolean(j["has_jordan_curve"], "topology.has_jordan_curve");
  if (!j["classification"].is_string()) throw SchemaError("topology.classification: expected a string");
  try {
    t.classification = attractor_class_from_string(j["classification"].get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("topology.classification: ") + e.what());
  }
  t.fli = count(j["fli"], "topology.fli");
  if (!j["connectedness_edges"].is_array()) throw SchemaError("topology.connectedness_edges: expected an array");
  for (const auto& e : j["connectedness_edges"]) {
    if (!e.is_array() || e.size() != 2) throw SchemaError("topology.connectedness_edges: expected pairs");
    const std::size_t a = count(e[0], "topology.connectedness_edges");
    const std::size_t b = count(e[1], "topology.connectedness_edges");
    if (a == 0 || b == 0) throw SchemaError("topology.connectedness_edges: pieces are 1-based");
    t.connectedness_edges.emplace_back(a - 1, b - 1);
  }
  const Json& per = j["per_vertex_class"];
  if (!per.is_object() || per.size() != vertices) throw SchemaError("topology.per_vertex_class: one entry per vertex");
  t.per_vertex_class.resize(vertices);
  std::size_t expected = 0;
  for (const auto& [name, cls] : per.items()) {
    if (vertex_index(Json(name), vertices, "topology.per_vertex_class") != expected++)
      throw SchemaError("topology.per_vertex_class: vertices out of order");
    if (!cls.is_string()) throw SchemaError("topology.per_vertex_class: expected strings");
    try {
      t.per_vertex_class[expected - 1] = intersection_class_from_string(cls.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw SchemaError(std::string("topology.per_vertex_class: ") + e.what());
    }
  }
  return t;
}

inline Json dimension_to_json(const DimensionReport& d) {
  using json_detail::vertex_name;
  Json j;
  j["alpha"] = d.alpha;
  j["beta_global"] = d.beta_global;
  j["spectral_radius"] = d.spectral_radius;
  j["converged"] = d.converged;
  Json beta = Json::object();
  Json rho = Json::object();
  for (std::size_t v = 0; v < d.beta_per_vertex.size(); ++v) {
    beta[vertex_name(v)] = d.beta_per_vertex[v];
    rho[vertex_name(v)] = d.spectral_radius_per_vertex[v];
  }
  j["beta_per_vertex"] = std::move(beta);
  j["spectral_radius_per_vertex"] = std::move(rho);
  Json eqs = Json::array();
  for (const auto& eq : d.boundary_equations) {
    Json terms = Json::array();
    for (const auto& t : eq.terms) terms.push_back(Json{{"map", t.map + 1}, {"source", vertex_name(t.source)}});
    eqs.push_back(Json{{"target", vertex_name(eq.target)}, {"terms", std::move(terms)}});
  }
  j["boundary_equations"] = std::move(eqs);
  return j;
}

inline DimensionReport dimension_from_json(const Json& j, std::size_t vertices) {
  using namespace json_detail;
  expect_object(j, "dimension",
                {"alpha", "beta_global", "spectral_radius", "converged", "beta_per_vertex",
                 "spectral_radius_per_vertex", "boundary_equations"});
  DimensionReport d;
  d.alpha = number(j["alpha"], "dimension.alpha");
  d.beta_global = number(j["beta_global"], "dimension.beta_global");
  d.spectral_radius = number(j["spectral_radius"], "dimension.spectral_radius");
  d.converged = boolean(j["converged"], "dimension.converged");
  auto per_vertex = [&](const Json& obj, std::string_view where) {
    if (!obj.is_object() || obj.size() != vertices) throw SchemaError(std::string(where) + ": one entry per vertex");
    std::vector<double> out;
    for (const auto& [name, val] : obj.items()) {
      if (vertex_index(Json(name), vertices, where) != out.size())
        throw SchemaError(std::string(where) + ": vertices out of order");
      out.push_back(number(val, where));
    }
    return out;
  };
  d.beta_per_vertex = per_vertex(j["beta_per_vertex"], "dimension.beta_per_vertex");
  d.spectral_radius_per_vertex = per_vertex(j["spectral_radius_per_vertex"], "dimension.spectral_radius_per_vertex");
  if (!j["boundary_equations"].is_array() || j["boundary_equations"].size() != vertices)
    throw SchemaError("dimension.boundary_equations: one equation per vertex");
  for (const auto& eq : j["boundary_equations"]) {
    expect_object(eq, "dimension.boundary_equations[]", {"target", "terms"});
    BoundaryEquation be;
    be.target = vertex_index(eq["target"], vertices, "dimension.boundary_equations.target");
    if (!eq["terms"].is_array()) throw SchemaError("dimension.boundary_equations.terms: expected an array");
    for (const auto& t : eq["terms"]) {
      expect_object(t, "dimension.boundary_equations.terms[]", {"map", "source"});
      const std::size_t k = count(t["map"], "dimension.boundary_equations.terms.map");
      if (k == 0) throw SchemaError("dimension.boundary_equations.terms.map: 1-based");
      be.terms.push_back({k - 1, vertex_index(t["source"], vertices, "dimension.boundary_equations.terms.source")});
    }
    d.boundary_equations.push_back(std::move(be));
  }
  return d;
}

inline Json outcome_to_json(const OutcomeSummary& o) {
  Json j;
  j["kind"] = o.kind;
  j["candidates"] = o.candidates;
  j["pruned_far"] = o.pruned_far;
  j["pruned_dead"] = o.pruned_dead;
  j["reason"] = o.reason ? Json(*o.reason) : Json(nullptr);
  if (o.witness)
    j["witness"] = Json{{"w", json_detail::word_json(o.witness->first)}, {"v", json_detail::word_json(o.witness->second)}};
  else
    j["witness"] = nullptr;
  return j;
}

inline OutcomeSummary outcome_from_json(const Json& j) {
  using namespace json_detail;
  expect_object(j, "outcome", {"kind", "candidates", "pruned_far", "pruned_dead", "reason", "witness"});
  OutcomeSummary o;
  if (!j["kind"].is_string()) throw SchemaError("outcome.kind: expected a string");
  o.kind = j["kind"].get<std::string>();
  if (o.kind != "Graph" && o.kind != "Empty" && o.kind != "TooComplex" && o.kind != "OscViolation")
    throw SchemaError("outcome.kind: unknown kind \"" + o.kind + "\"");
  o.candidates = count(j["candidates"], "outcome.candidates");
  o.pruned_far = count(j["pruned_far"], "outcome.pruned_far");
  o.pruned_dead = count(j["pruned_dead"], "outcome.pruned_dead");
  if (!j["reason"].is_null()) {
    if (!j["reason"].is_string()) throw SchemaError("outcome.reason: expected a string or null");
    o.reason = j["reason"].get<std::string>();
  }
  if (!j["witness"].is_null()) {
    expect_object(j["witness"], "outcome.witness", {"w", "v"});
    o.witness = std::make_pair(word_from_json(j["witness"]["w"], "outcome.witness.w"),
                               word_from_json(j["witness"]["v"], "outcome.witness.v"));
  }
  return o;
}

inline Json record_to_json(const ExampleRecord& r) {
  Json j;
  j["id"] = r.id;
  j["parent_id"] = r.parent_id ? Json(*r.parent_id) : Json(nullptr);
  j["spec"] = spec_to_json(r.spec);
  j["outcome"] = outcome_to_json(r.outcome);
  j["neighbor_count"] = r.neighbor_count;
  j["fli"] = r.fli;
  j["topology"] = r.topology ? topology_to_json(*r.topology) : Json(nullptr);
  j["dimension"] = r.dimension ? dimension_to_json(*r.dimension) : Json(nullptr);
  j["created_at"] = r.created_at ? Json(*r.created_at) : Json(nullptr);
  return j;
}

/// Single-line record JSON (also one line of a collection file).
inline std::string export_record(const ExampleRecord& r) { return record_to_json(r).dump(); }

class HashMismatch : public SchemaError {
 public:
  using SchemaError::SchemaError;
};

/// Parses and checks a record: schema, spec validity, the reports-iff-Graph
/// rule, and that the id is the hash of the spec.
inline ExampleRecord record_from_json(const Json& j) {
  using namespace json_detail;
  expect_object(j, "record",
                {"id", "parent_id", "spec", "outcome", "neighbor_count", "fli", "topology", "dimension", "created_at"});
  ExampleRecord r;
  if (!j["id"].is_string()) throw SchemaError("id: expected a string");
  r.id = j["id"].get<std::string>();
  if (!j["parent_id"].is_null()) {
    if (!j["parent_id"].is_string()) throw SchemaError("parent_id: expected a string or null");
    r.parent_id = j["parent_id"].get<std::string>();
  }
  r.spec = spec_from_json(j["spec"]);
  if (auto violations = validate(r.spec); !violations.empty()) throw ValidationError(std::move(violations));
  r.outcome = outcome_from_json(j["outcome"]);
  r.neighbor_count = count(j["neighbor_count"], "neighbor_count");
  r.fli = count(j["fli"], "fli");
  const bool graph = r.is_graph();
  if (graph == j["topology"].is_null() || graph == j["dimension"].is_null())
    throw SchemaError("reports must be present exactly when the outcome is Graph");
  if (graph) {
    r.topology = topology_from_json(j["topology"], r.neighbor_count);
    r.dimension = dimension_from_json(j["dimension"], r.neighbor_count);
  }
  if (!j["created_at"].is_null()) {
    if (!j["created_at"].is_string()) throw SchemaError("created_at: expected a string or null");
    r.created_at = j["created_at"].get<std::string>();
  }
  const std::string expected = spec_id(r.spec);
  if (expected != r.id) throw HashMismatch("id does not match the spec hash (expected " + expected + ")");
  return r;
}

inline ExampleRecord import_record(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
  return record_from_json(j);
}

}  // namespace ifsgraph

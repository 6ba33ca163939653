#pragma once

// Neighbor graph of an IFS: vertices are the isometries h = f_w^{-1} f_v
// for which the pieces f_w(A) and f_v(A) intersect; an edge h -> h' with
// label (k, j) records h' = f_k^{-1} h f_j. Piece indices are 0-based in
// memory and printed 1-based.

#include "ifsgraph/ifs.hpp"

#include <array>
#include <cstddef>
#include <deque>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

namespace ifsgraph {

struct Label {
  std::size_t k = 0;
  std::size_t j = 0;
  friend bool operator==(const Label&, const Label&) = default;
  friend auto operator<=>(const Label&, const Label&) = default;
};

struct Edge {
  std::size_t from = 0;
  std::size_t to = 0;
  Label label;
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct InitialEdge {
  std::size_t to = 0;
  Label label;
  friend bool operator==(const InitialEdge&, const InitialEdge&) = default;
};

struct BuildStats {
  std::size_t candidates = 0;   // distinct maps that passed the ball test
  std::size_t pruned_far = 0;   // compositions rejected by the ball test
  std::size_t pruned_dead = 0;  // candidates removed for lack of a cycle
};

struct NeighborGraph {
  std::size_t m = 0;
  std::vector<Isometry> vertices;  // discovery order, named n1, n2, ...
  std::vector<Edge> edges;
  std::vector<InitialEdge> initial_edges;
  BuildStats stats;

  [[nodiscard]] std::size_t type_count() const { return vertices.size(); }

  /// Number of initial labels (k, j) with k < j.
  [[nodiscard]] std::size_t fli() const {
    std::size_t n = 0;
    for (const auto& e : initial_edges)
      if (e.label.k < e.label.j) ++n;
    return n;
  }

  [[nodiscard]] std::vector<std::vector<std::size_t>> out_edges() const {
    std::vector<std::vector<std::size_t>> out(vertices.size());
    for (std::size_t i = 0; i < edges.size(); ++i) out[edges[i].from].push_back(i);
    return out;
  }
};

struct GraphOutcome {
  NeighborGraph graph;
};
struct EmptyOutcome {
  std::size_t m = 0;
  BuildStats stats;
};
struct TooComplexOutcome {
  std::size_t candidate_count = 0;
  std::string reason;
  BuildStats stats;
};
struct OscViolationOutcome {
  std::vector<std::size_t> word_w;  // h = f_w^{-1} f_v is the identity
  std::vector<std::size_t> word_v;
  BuildStats stats;
};

using BuildOutcome = std::variant<GraphOutcome, EmptyOutcome, TooComplexOutcome, OscViolationOutcome>;

inline const char* outcome_kind(const BuildOutcome& o) {
  switch (o.index()) {
    case 0: return "Graph";
    case 1: return "Empty";
    case 2: return "TooComplex";
    default: return "OscViolation";
  }
}

inline const BuildStats& outcome_stats(const BuildOutcome& o) {
  return std::visit([](const auto& v) -> const BuildStats& {
    if constexpr (std::is_same_v<std::decay_t<decltype(v)>, GraphOutcome>) return v.graph.stats;
    else return v.stats;
  }, o);
}

/// The graph for Graph outcomes; an edgeless graph on m pieces for Empty.
inline std::optional<NeighborGraph> graph_of(const BuildOutcome& o) {
  if (const auto* g = std::get_if<GraphOutcome>(&o)) return g->graph;
  if (const auto* e = std::get_if<EmptyOutcome>(&o)) {
    NeighborGraph ng;
    ng.m = e->m;
    ng.stats = e->stats;
    return ng;
  }
  return std::nullopt;
}

struct Successor {
  Label label;
  Isometry map;
};

/// All m^2 compositions f_k^{-1} h f_j, k-major.
inline std::vector<Successor> successors(const Isometry& h, const SpecAnalysis& an) {
  std::vector<Successor> out;
  const std::size_t m = an.maps.size();
  out.reserve(m * m);
  for (std::size_t k = 0; k < m; ++k) {
    const AffineMap left = an.inverses[k].then_after(h);
    for (std::size_t j = 0; j < m; ++j) out.push_back({{k, j}, left.then_after(an.maps[j])});
  }
  return out;
}

/// True certifies h(A) and A are disjoint: the centroid moves further than
/// twice the radius of a ball containing A.
inline bool is_certainly_far(const Isometry& h, const SpecAnalysis& an) {
  return gram_norm_sq(an.field, h(an.centroid) - an.centroid) > an.radius_sq_bound;
}

struct BuildCaps {
  std::size_t max_types = 100;
  std::size_t max_candidates = 100000;
};

namespace detail {

struct Candidate {
  Isometry map;
  std::optional<std::size_t> parent;  // none for roots
  Label label;
};

/// Floating-point shadow of an affine map, used only to settle ball tests
/// that are far from the threshold.
struct AffineD {
  double l[4];
  double t[2];

  explicit AffineD(const AffineMap& f) {
    for (std::size_t i = 0; i < 4; ++i) l[i] = f.linear.e[i].to_double();
    t[0] = f.translation.x.to_double();
    t[1] = f.translation.y.to_double();
  }
  void apply(const double p[2], double out[2]) const {
    out[0] = l[0] * p[0] + l[1] * p[1] + t[0];
    out[1] = l[2] * p[0] + l[3] * p[1] + t[1];
  }
};

enum class Ball { Far, Near, Unsure };

/// Relative margin far above the rounding error of a handful of products of
/// moderate doubles; anything inside it is decided exactly.
inline Ball ball_test_double(double g, double threshold) {
  const double margin = 1e-9 * (threshold + 1.0);
  if (g > threshold + margin) return Ball::Far;
  if (g < threshold - margin) return Ball::Near;
  return Ball::Unsure;
}

inline void witness_words(const std::vector<Candidate>& cands, std::optional<std::size_t> at, Label last,
                          std::vector<std::size_t>& w, std::vector<std::size_t>& v) {
  std::vector<Label> labels{last};
  while (at) {
    labels.push_back(cands[*at].label);
    at = cands[*at].parent;
  }
  for (auto it = labels.rbegin(); it != labels.rend(); ++it) {
    w.push_back(it->k);
    v.push_back(it->j);
  }
}

}  // namespace detail

/// Breadth-first expansion from the root compositions f_k^{-1} f_j (k != j).
/// Compositions certified far by the ball test are dropped; afterwards
/// vertices without a surviving successor are removed repeatedly, leaving
/// exactly the maps from which a cycle is reachable.
inline BuildOutcome build(const IfsSpec& spec, const SpecAnalysis& an, const BuildCaps& caps = {}) {
  const std::size_t m = spec.m();
  BuildStats stats;
  std::vector<detail::Candidate> cands;
  std::vector<detail::AffineD> shadows;  // parallel to cands
  std::unordered_map<std::string, std::size_t> index;
  std::vector<Edge> raw_edges;
  std::vector<InitialEdge> raw_initial;
  std::deque<std::size_t> queue;

  auto too_complex = [&](std::string reason) {
    stats.candidates = cands.size();
    return BuildOutcome{TooComplexOutcome{cands.size(), std::move(reason), stats}};
  };

  // Returns the candidate id, or nullopt when pruned. Sets `osc` on identity.
  auto admit = [&](Isometry&& h, std::optional<std::size_t> parent, Label label, bool& osc,
                   bool ball_checked) -> std::optional<std::size_t> {
    if (h.is_identity()) {
      osc = true;
      return std::nullopt;
    }
    if (!ball_checked && is_certainly_far(h, an)) {
      ++stats.pruned_far;
      return std::nullopt;
    }
    std::string key = canonical_key(h);
    auto [it, inserted] = index.try_emplace(std::move(key), cands.size());
    if (inserted) {
      shadows.emplace_back(h);
      cands.push_back({std::move(h), parent, label});
      queue.push_back(it->second);
    }
    return it->second;
  };

  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t j = 0; j < m; ++j) {
      if (k == j) continue;
      bool osc = false;
      auto id = admit(an.inverses[k].then_after(an.maps[j]), std::nullopt, {k, j}, osc, false);
      if (osc) {
        stats.candidates = cands.size();
        return OscViolationOutcome{{k}, {j}, stats};
      }
      if (id) raw_initial.push_back({*id, {k, j}});
    }
  }
  if (cands.size() > caps.max_candidates) return too_complex("candidate cap exceeded");

  // Images f_j(x~), so the ball test on f_k^{-1} h f_j needs one point
  // evaluation instead of a full composition. Doubles settle most tests;
  // the exact test runs only near the threshold.
  std::vector<Vec2Q> piece_centers;
  std::vector<std::array<double, 2>> piece_centers_d;
  std::vector<detail::AffineD> inverses_d;
  for (std::size_t j = 0; j < m; ++j) {
    piece_centers.push_back(an.maps[j](an.centroid));
    piece_centers_d.push_back({piece_centers.back().x.to_double(), piece_centers.back().y.to_double()});
    inverses_d.emplace_back(an.inverses[j]);
  }
  const double cx = an.centroid.x.to_double(), cy = an.centroid.y.to_double();
  const double a_d = an.field.a.to_double();
  const double threshold = an.radius_sq_bound.to_double();

  std::vector<std::array<double, 2>> moved(m);
  while (!queue.empty()) {
    const std::size_t cur = queue.front();
    queue.pop_front();
    const detail::AffineD shadow = shadows[cur];
    for (std::size_t j = 0; j < m; ++j) shadow.apply(piece_centers_d[j].data(), moved[j].data());
    for (std::size_t k = 0; k < m; ++k) {
      std::optional<AffineMap> left;
      for (std::size_t j = 0; j < m; ++j) {
        double p[2];
        inverses_d[k].apply(moved[j].data(), p);
        const double dx = p[0] - cx, dy = p[1] - cy;
        const detail::Ball quick = detail::ball_test_double(dx * dx + dy * dy - a_d * dx * dy, threshold);
        const bool far = quick == detail::Ball::Far ||
                         (quick == detail::Ball::Unsure &&
                          gram_norm_sq(an.field, an.inverses[k](cands[cur].map(piece_centers[j])) - an.centroid) >
                              an.radius_sq_bound);
        if (far) {
          ++stats.pruned_far;
          continue;
        }
        if (!left) left = an.inverses[k].then_after(cands[cur].map);
        bool osc = false;
        auto id = admit(left->then_after(an.maps[j]), cur, {k, j}, osc, true);
        if (osc) {
          OscViolationOutcome out;
          detail::witness_words(cands, cur, {k, j}, out.word_w, out.word_v);
          stats.candidates = cands.size();
          out.stats = stats;
          return out;
        }
        if (id) raw_edges.push_back({cur, *id, {k, j}});
      }
    }
    if (cands.size() > caps.max_candidates) return too_complex("candidate cap exceeded");
  }

  // Remove vertices with no outgoing edge to a surviving vertex.
  const std::size_t n = cands.size();
  std::vector<std::size_t> outdeg(n, 0);
  std::vector<std::vector<std::size_t>> preds(n);
  for (const Edge& e : raw_edges) {
    ++outdeg[e.from];
    preds[e.to].push_back(e.from);
  }
  std::vector<bool> alive(n, true);
  std::vector<std::size_t> dead;
  for (std::size_t i = 0; i < n; ++i)
    if (outdeg[i] == 0) dead.push_back(i);
  while (!dead.empty()) {
    const std::size_t x = dead.back();
    dead.pop_back();
    alive[x] = false;
    ++stats.pruned_dead;
    for (std::size_t p : preds[x])
      if (alive[p] && --outdeg[p] == 0) dead.push_back(p);
  }

  std::vector<std::size_t> renumber(n, SIZE_MAX);
  std::size_t survivors = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (alive[i]) renumber[i] = survivors++;
  stats.candidates = n;

  if (survivors > caps.max_types)
    return TooComplexOutcome{n, "more than " + std::to_string(caps.max_types) + " neighbor types", stats};

  NeighborGraph g;
  g.m = m;
  g.vertices.reserve(survivors);
  for (std::size_t i = 0; i < n; ++i)
    if (alive[i]) g.vertices.push_back(cands[i].map);
  for (const Edge& e : raw_edges)
    if (alive[e.from] && alive[e.to]) g.edges.push_back({renumber[e.from], renumber[e.to], e.label});
  for (const InitialEdge& e : raw_initial)
    if (alive[e.to]) g.initial_edges.push_back({renumber[e.to], e.label});
  g.stats = stats;

  if (g.initial_edges.empty()) return EmptyOutcome{m, stats};
  return GraphOutcome{std::move(g)};
}

inline BuildOutcome build(const IfsSpec& spec, const BuildCaps& caps = {}) {
  return build(spec, analyze_spec(spec), caps);
}

}  // namespace ifsgraph

#pragma once

// Connectedness and intersection-cardinality classification read off the
// neighbor graph.

#include "ifsgraph/neighbor_graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ifsgraph {

enum class IntersectionClass { Singleton, Finite, CountablyInfinite, Uncountable };

enum class AttractorClass { TotallyDisconnectedOrEmpty, Dendrite, PCF, CountableWeb, UncountableCarpet };

inline const char* to_string(IntersectionClass c) {
  switch (c) {
    case IntersectionClass::Singleton: return "Singleton";
    case IntersectionClass::Finite: return "Finite";
    case IntersectionClass::CountablyInfinite: return "CountablyInfinite";
    case IntersectionClass::Uncountable: return "Uncountable";
  }
  return "?";
}

inline const char* to_string(AttractorClass c) {
  switch (c) {
    case AttractorClass::TotallyDisconnectedOrEmpty: return "TotallyDisconnectedOrEmpty";
    case AttractorClass::Dendrite: return "Dendrite";
    case AttractorClass::PCF: return "PCF";
    case AttractorClass::CountableWeb: return "CountableWeb";
    case AttractorClass::UncountableCarpet: return "UncountableCarpet";
  }
  return "?";
}

inline IntersectionClass intersection_class_from_string(std::string_view s) {
  for (auto c : {IntersectionClass::Singleton, IntersectionClass::Finite, IntersectionClass::CountablyInfinite,
                 IntersectionClass::Uncountable})
    if (s == to_string(c)) return c;
  throw std::invalid_argument("unknown intersection class \"" + std::string(s) + "\"");
}

inline AttractorClass attractor_class_from_string(std::string_view s) {
  for (auto c : {AttractorClass::TotallyDisconnectedOrEmpty, AttractorClass::Dendrite, AttractorClass::PCF,
                 AttractorClass::CountableWeb, AttractorClass::UncountableCarpet})
    if (s == to_string(c)) return c;
  throw std::invalid_argument("unknown attractor class \"" + std::string(s) + "\"");
}

/// Pieces 0..m-1; edge {k, j} (k < j) whenever A_k meets A_j.
struct ConnectednessGraph {
  std::size_t m = 0;
  std::set<std::pair<std::size_t, std::size_t>> edges;
};

inline ConnectednessGraph connectedness_graph(const NeighborGraph& ng) {
  ConnectednessGraph gc;
  gc.m = ng.m;
  for (const InitialEdge& e : ng.initial_edges)
    gc.edges.insert(std::minmax(e.label.k, e.label.j));
  return gc;
}

namespace detail {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

/// Tarjan's strongly connected components; comp[v] numbers components in
/// reverse topological order (sinks first).
struct Components {
  std::vector<std::size_t> comp;
  std::size_t count = 0;
};

inline Components strong_components(std::size_t n, const std::vector<std::vector<std::size_t>>& adj) {
  Components out;
  out.comp.assign(n, SIZE_MAX);
  std::vector<std::size_t> low(n, 0), order(n, SIZE_MAX), stack;
  std::vector<bool> on_stack(n, false);
  std::size_t counter = 0;
  // Iterative DFS: frame = (vertex, next adjacency position).
  std::vector<std::pair<std::size_t, std::size_t>> frames;
  for (std::size_t root = 0; root < n; ++root) {
    if (order[root] != SIZE_MAX) continue;
    frames.push_back({root, 0});
    order[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      if (pos < adj[v].size()) {
        const std::size_t w = adj[v][pos++];
        if (order[w] == SIZE_MAX) {
          order[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], order[w]);
        }
        continue;
      }
      if (low[v] == order[v]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          out.comp[w] = out.count;
        } while (w != v);
        ++out.count;
      }
      const std::size_t done = v;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().first] = std::min(low[frames.back().first], low[done]);
    }
  }
  return out;
}

/// Adjacency with one entry per edge, so parallel edges repeat.
inline std::vector<std::vector<std::size_t>> adjacency(const NeighborGraph& ng) {
  std::vector<std::vector<std::size_t>> adj(ng.vertices.size());
  for (const Edge& e : ng.edges) adj[e.from].push_back(e.to);
  return adj;
}

inline std::vector<bool> reachable_from(std::size_t start, const std::vector<std::vector<std::size_t>>& adj) {
  std::vector<bool> seen(adj.size(), false);
  std::vector<std::size_t> todo{start};
  seen[start] = true;
  while (!todo.empty()) {
    const std::size_t v = todo.back();
    todo.pop_back();
    for (std::size_t w : adj[v])
      if (!seen[w]) {
        seen[w] = true;
        todo.push_back(w);
      }
  }
  return seen;
}

}  // namespace detail

inline bool is_connected(const NeighborGraph& ng) {
  if (ng.m <= 1) return true;
  detail::DisjointSets ds(ng.m);
  std::size_t parts = ng.m;
  for (const auto& [k, j] : connectedness_graph(ng).edges)
    if (ds.unite(k, j)) --parts;
  return parts == 1;
}

/// Reads the cycle structure reachable from vertex h. A strongly connected
/// component carries two distinct cycles exactly when it has more internal
/// edges (with multiplicity) than vertices.
inline IntersectionClass classify_intersection(const NeighborGraph& ng, std::size_t h) {
  if (h >= ng.vertices.size()) throw std::out_of_range("unknown vertex");
  const auto adj = detail::adjacency(ng);
  const auto reach = detail::reachable_from(h, adj);
  const auto scc = detail::strong_components(ng.vertices.size(), adj);

  std::vector<std::size_t> comp_vertices(scc.count, 0), comp_edges(scc.count, 0);
  bool all_outdeg_one = true;
  for (std::size_t v = 0; v < adj.size(); ++v) {
    if (!reach[v]) continue;
    ++comp_vertices[scc.comp[v]];
    if (adj[v].size() != 1) all_outdeg_one = false;
    for (std::size_t w : adj[v])
      if (scc.comp[w] == scc.comp[v]) ++comp_edges[scc.comp[v]];
  }
  std::vector<bool> cyclic(scc.count, false);
  for (std::size_t c = 0; c < scc.count; ++c) {
    if (comp_vertices[c] == 0) continue;
    if (comp_edges[c] > comp_vertices[c]) return IntersectionClass::Uncountable;
    cyclic[c] = comp_edges[c] > 0;
  }
  if (all_outdeg_one) return IntersectionClass::Singleton;

  // Finite unless some cyclic component leads to a different cyclic one.
  // Components are numbered sinks first, so a reverse sweep is a DP over
  // the condensation.
  std::vector<bool> reaches_cycle(scc.count, false);  // strictly downstream
  std::vector<std::vector<std::size_t>> comp_succ(scc.count);
  for (std::size_t v = 0; v < adj.size(); ++v) {
    if (!reach[v]) continue;
    for (std::size_t w : adj[v])
      if (scc.comp[w] != scc.comp[v]) comp_succ[scc.comp[v]].push_back(scc.comp[w]);
  }
  for (std::size_t c = 0; c < scc.count; ++c) {
    for (std::size_t d : comp_succ[c]) {
      if (cyclic[d] || reaches_cycle[d]) reaches_cycle[c] = true;
    }
    if (cyclic[c] && reaches_cycle[c]) return IntersectionClass::CountablyInfinite;
  }
  return IntersectionClass::Finite;
}

/// A closed Jordan curve exists iff the connectedness graph has a cycle or
/// two pieces meet in more than one point.
inline bool has_jordan_curve(const NeighborGraph& ng) {
  if (!is_connected(ng)) throw std::logic_error("undefined for disconnected attractor");
  const auto gc = connectedness_graph(ng);
  // A forest on m vertices has exactly m - 1 edges when connected.
  if (gc.m > 0 && gc.edges.size() > gc.m - 1) return true;
  for (std::size_t h = 0; h < ng.vertices.size(); ++h)
    if (classify_intersection(ng, h) != IntersectionClass::Singleton) return true;
  return false;
}

struct TopologyReport {
  bool connected = false;
  bool has_jordan_curve = false;
  std::vector<IntersectionClass> per_vertex_class;
  std::size_t fli = 0;
  std::vector<std::pair<std::size_t, std::size_t>> connectedness_edges;
  AttractorClass classification = AttractorClass::TotallyDisconnectedOrEmpty;
};

inline AttractorClass attractor_class(const TopologyReport& r) {
  if (!r.connected) return AttractorClass::TotallyDisconnectedOrEmpty;
  const auto has = [&](IntersectionClass c) {
    return std::find(r.per_vertex_class.begin(), r.per_vertex_class.end(), c) != r.per_vertex_class.end();
  };
  if (has(IntersectionClass::Uncountable)) return AttractorClass::UncountableCarpet;
  if (has(IntersectionClass::CountablyInfinite)) return AttractorClass::CountableWeb;
  if (!has(IntersectionClass::Finite) && !r.has_jordan_curve) return AttractorClass::Dendrite;
  return AttractorClass::PCF;
}

inline TopologyReport topology_report(const NeighborGraph& ng) {
  TopologyReport r;
  r.connected = is_connected(ng);
  r.fli = ng.fli();
  const auto gc = connectedness_graph(ng);
  r.connectedness_edges.assign(gc.edges.begin(), gc.edges.end());
  r.per_vertex_class.reserve(ng.vertices.size());
  for (std::size_t h = 0; h < ng.vertices.size(); ++h) r.per_vertex_class.push_back(classify_intersection(ng, h));
  r.has_jordan_curve = r.connected && has_jordan_curve(ng);
  r.classification = attractor_class(r);
  return r;
}

}  // namespace ifsgraph

#pragma once

#include "ifsgraph/record.hpp"

#include <sstream>
#include <string>

namespace ifsgraph {

/// DOT digraph; vertices n1..nK in discovery order, a synthetic root "id"
/// with dashed initial edges, labels "k,j" (1-based). Parallel edges are
/// emitted one line each.
inline std::string export_dot(const NeighborGraph& ng) {
  std::ostringstream os;
  os << "digraph neighbor_graph {\n";
  os << "  id [shape=point];\n";
  for (std::size_t v = 0; v < ng.vertices.size(); ++v) os << "  n" << v + 1 << ";\n";
  for (const InitialEdge& e : ng.initial_edges)
    os << "  id -> n" << e.to + 1 << " [label=\"" << e.label.k + 1 << ',' << e.label.j + 1 << "\", style=dashed];\n";
  for (const Edge& e : ng.edges)
    os << "  n" << e.from + 1 << " -> n" << e.to + 1 << " [label=\"" << e.label.k + 1 << ',' << e.label.j + 1
       << "\"];\n";
  os << "}\n";
  return os.str();
}

inline Json affine_to_json(const AffineMap& h) {
  Json lin = Json::array();
  for (const Rational& r : h.linear.e) lin.push_back(r.str());
  return Json{{"linear", std::move(lin)},
              {"translation", Json::array({h.translation.x.str(), h.translation.y.str()})}};
}

/// JSON mirror of the NeighborGraph fields.
inline Json graph_to_json(const NeighborGraph& ng) {
  using json_detail::vertex_name;
  Json j;
  j["m"] = ng.m;
  Json vs = Json::array();
  for (std::size_t v = 0; v < ng.vertices.size(); ++v) {
    Json vj = affine_to_json(ng.vertices[v]);
    vj["name"] = vertex_name(v);
    vs.push_back(std::move(vj));
  }
  j["vertices"] = std::move(vs);
  Json init = Json::array();
  for (const InitialEdge& e : ng.initial_edges)
    init.push_back(Json{{"to", vertex_name(e.to)}, {"label", Json::array({e.label.k + 1, e.label.j + 1})}});
  j["initial_edges"] = std::move(init);
  Json edges = Json::array();
  for (const Edge& e : ng.edges)
    edges.push_back(Json{{"from", vertex_name(e.from)},
                         {"to", vertex_name(e.to)},
                         {"label", Json::array({e.label.k + 1, e.label.j + 1})}});
  j["edges"] = std::move(edges);
  j["stats"] = Json{{"type_count", ng.type_count()},
                    {"fli", ng.fli()},
                    {"candidates", ng.stats.candidates},
                    {"pruned_far", ng.stats.pruned_far},
                    {"pruned_dead", ng.stats.pruned_dead}};
  return j;
}

}  // namespace ifsgraph

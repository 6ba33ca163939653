#pragma once

// Hausdorff dimensions of the attractor and of the boundary sets
// B_h = A ∩ h(A), which form a graph-directed system along the neighbor
// graph: B_h = U_{edges h -> h' labelled (k, j)} f_k(B_h').

#include "ifsgraph/topology.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

namespace ifsgraph {

inline double attractor_dimension(std::size_t m, const Rational& det) {
  return 2.0 * std::log(static_cast<double>(m)) / std::log(det.to_double());
}

inline double attractor_dimension(const IfsSpec& spec) { return attractor_dimension(spec.m(), spec.expansion_det()); }

struct BoundaryTerm {
  std::size_t map = 0;     // k
  std::size_t source = 0;  // h'
  friend bool operator==(const BoundaryTerm&, const BoundaryTerm&) = default;
};

struct BoundaryEquation {
  std::size_t target = 0;
  std::vector<BoundaryTerm> terms;
};

inline std::vector<BoundaryEquation> boundary_equations(const NeighborGraph& ng) {
  std::vector<BoundaryEquation> eqs(ng.vertices.size());
  for (std::size_t h = 0; h < eqs.size(); ++h) eqs[h].target = h;
  for (const Edge& e : ng.edges) eqs[e.from].terms.push_back({e.label.k, e.to});
  return eqs;
}

struct SpectralRadius {
  double value = 0.0;
  bool converged = true;
  std::size_t iterations = 0;
};

/// Perron root of a non-negative irreducible count matrix. Iterates with
/// C + I, which is primitive and has Perron root rho + 1, and stops when
/// the Collatz-Wielandt bounds min/max (Cx)_i / x_i are within `tol`.
inline SpectralRadius perron_root(const std::vector<std::vector<double>>& c, double tol = 1e-10,
                                  std::size_t max_iter = 100000) {
  const std::size_t n = c.size();
  SpectralRadius out;
  if (n == 0) return out;
  std::vector<double> x(n, 1.0), y(n);
  double lo = 0.0, hi = 0.0;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += c[i][j] * x[j];
      y[i] = s;
    }
    lo = INFINITY;
    hi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ratio = y[i] / x[i];
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    out.iterations = it;
    if (hi - lo <= tol) {
      out.value = 0.5 * (lo + hi);
      return out;
    }
    // Shifted step keeps the iterate positive and aperiodic.
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = y[i] + x[i];
      norm = std::max(norm, x[i]);
    }
    for (double& xi : x) xi /= norm;
  }
  out.value = 0.5 * (lo + hi);
  out.converged = false;
  return out;
}

struct DimensionReport {
  double alpha = 0.0;
  double beta_global = 0.0;
  std::vector<double> beta_per_vertex;
  double spectral_radius = 0.0;
  std::vector<double> spectral_radius_per_vertex;
  bool converged = true;
  std::vector<BoundaryEquation> boundary_equations;
};

inline double boundary_dimension_from_radius(double rho, const Rational& det) {
  if (rho <= 1.0) return 0.0;
  return std::max(0.0, 2.0 * std::log(rho) / std::log(det.to_double()));
}

/// Spectral radius of the edge-count matrix, computed per strongly
/// connected component; a vertex sees the largest radius among the
/// components it can reach.
inline DimensionReport boundary_dimension(const NeighborGraph& ng, const Rational& det) {
  DimensionReport r;
  r.alpha = attractor_dimension(ng.m, det);
  r.boundary_equations = boundary_equations(ng);
  const std::size_t n = ng.vertices.size();
  if (n == 0) return r;

  const auto adj = detail::adjacency(ng);
  const auto scc = detail::strong_components(n, adj);
  std::vector<std::vector<std::size_t>> members(scc.count);
  std::vector<std::size_t> local(n);
  for (std::size_t v = 0; v < n; ++v) {
    local[v] = members[scc.comp[v]].size();
    members[scc.comp[v]].push_back(v);
  }
  std::vector<double> comp_rho(scc.count, 0.0);
  for (std::size_t c = 0; c < scc.count; ++c) {
    const auto& vs = members[c];
    std::vector<std::vector<double>> mat(vs.size(), std::vector<double>(vs.size(), 0.0));
    for (std::size_t v : vs)
      for (std::size_t w : adj[v])
        if (scc.comp[w] == c) mat[local[v]][local[w]] += 1.0;
    const SpectralRadius sr = perron_root(mat);
    comp_rho[c] = sr.value;
    if (!sr.converged) r.converged = false;
  }

  // Reachable maximum; components are numbered sinks first.
  std::vector<double> best(scc.count, 0.0);
  for (std::size_t c = 0; c < scc.count; ++c) {
    best[c] = comp_rho[c];
    for (std::size_t v : members[c])
      for (std::size_t w : adj[v])
        if (scc.comp[w] != c) best[c] = std::max(best[c], best[scc.comp[w]]);
  }
  r.spectral_radius = *std::max_element(comp_rho.begin(), comp_rho.end());
  r.beta_global = boundary_dimension_from_radius(r.spectral_radius, det);
  r.beta_per_vertex.resize(n);
  r.spectral_radius_per_vertex.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    r.spectral_radius_per_vertex[v] = best[scc.comp[v]];
    r.beta_per_vertex[v] = boundary_dimension_from_radius(best[scc.comp[v]], det);
  }
  return r;
}

}  // namespace ifsgraph

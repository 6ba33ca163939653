#pragma once

// Independent reference computations for the test suites. Nothing here
// calls into the neighbor-graph builder or the dimension code; maps are
// rebuilt from the raw spec with plain GMP rationals and doubles.

#include "ifsgraph/ifsgraph.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

namespace oracle {

// ---------------------------------------------------------------- triples

struct Triple {
  long u, v, w;
  friend bool operator==(const Triple&, const Triple&) = default;
};

/// Every primitive (u, v, w) with u, v > 0, w <= bound, u^2 + d v^2 = w^2,
/// sorted by (w, u, v).
inline std::vector<Triple> brute_triples(long d, long bound) {
  std::vector<Triple> out;
  for (long w = 1; w <= bound; ++w)
    for (long u = 1; u < w; ++u) {
      const long rest = w * w - u * u;
      if (rest % d != 0) continue;
      const long v2 = rest / d;
      const long v = std::lround(std::sqrt(static_cast<double>(v2)));
      if (v <= 0 || v * v != v2) continue;
      if (std::gcd(std::gcd(u, v), w) != 1) continue;
      out.push_back({u, v, w});
    }
  return out;
}

// ---------------------------------------------------------------- polynomials

using Poly = std::vector<mpq_class>;  // coefficients, lowest degree first

inline void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

/// Characteristic polynomial det(xI - C) by Faddeev-LeVerrier.
inline Poly char_poly(const std::vector<std::vector<long>>& c) {
  const std::size_t n = c.size();
  using Mat = std::vector<std::vector<mpq_class>>;
  auto mul = [n](const Mat& x, const Mat& y) {
    Mat z(n, std::vector<mpq_class>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        if (x[i][k] != 0)
          for (std::size_t j = 0; j < n; ++j) z[i][j] += x[i][k] * y[k][j];
    return z;
  };
  Mat a(n, std::vector<mpq_class>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = c[i][j];
  Poly coeff(n + 1, 0);
  coeff[n] = 1;
  Mat m(n, std::vector<mpq_class>(n, 0));  // M_0 = 0
  mpq_class ck = 1;
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::size_t i = 0; i < n; ++i) m[i][i] += ck;  // M_k = A M_{k-1} + c_{n-k+1} I
    const Mat am = mul(a, m);
    mpq_class tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += am[i][i];
    ck = -tr / static_cast<long>(k);
    coeff[n - k] = ck;
    m = am;
  }
  return coeff;
}

inline Poly derivative(const Poly& p) {
  Poly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<long>(i));
  trim(d);
  return d;
}

inline Poly poly_mod(Poly a, const Poly& b) {
  trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    const mpq_class f = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    trim(a);
  }
  return a;
}

inline Poly poly_div(Poly a, const Poly& b) {
  trim(a);
  if (a.size() < b.size()) return {};
  Poly q(a.size() - b.size() + 1, 0);
  while (a.size() >= b.size() && !a.empty()) {
    const mpq_class f = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    q[shift] = f;
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    trim(a);
  }
  return q;
}

inline Poly poly_gcd(Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

inline double eval(const Poly& p, double x) {
  long double s = 0;
  for (std::size_t i = p.size(); i-- > 0;) s = s * x + p[i].get_d();
  return static_cast<double>(s);
}

/// Largest real root of the characteristic polynomial of a non-negative
/// integer matrix. The square-free part is bisected, so repeated Perron
/// roots still give a sign change.
inline double perron_root(const std::vector<std::vector<long>>& c) {
  if (c.empty()) return 0.0;
  Poly p = char_poly(c);
  trim(p);
  const Poly g = poly_gcd(p, derivative(p));
  Poly q = g.size() > 1 ? poly_div(p, g) : p;
  if (q.back() < 0)
    for (auto& x : q) x = -x;
  double hi = 1.0;
  for (const auto& row : c) hi = std::max(hi, static_cast<double>(std::accumulate(row.begin(), row.end(), 0L)) + 1.0);
  // q > 0 above the largest root; step down until it is not.
  const double step = 1e-3;
  double x = hi;
  while (x > -1.0 && eval(q, x) > 0.0) x -= step;
  if (x <= -1.0) return 0.0;
  double lo = x, up = x + step;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + up);
    if (eval(q, mid) > 0.0) up = mid; else lo = mid;
  }
  return std::max(0.0, 0.5 * (lo + up));
}

/// Edge-count matrix of the graph, rows = source vertex.
inline std::vector<std::vector<long>> count_matrix(const ifsgraph::NeighborGraph& ng) {
  const std::size_t n = ng.vertices.size();
  std::vector<std::vector<long>> c(n, std::vector<long>(n, 0));
  for (const auto& e : ng.edges) ++c[e.from][e.to];
  return c;
}

/// Number of directed paths of length `len` starting anywhere.
inline std::vector<mpz_class> path_counts(const std::vector<std::vector<long>>& c, std::size_t len) {
  const std::size_t n = c.size();
  std::vector<mpz_class> ways(n, 1), out;
  for (std::size_t step = 0; step < len; ++step) {
    std::vector<mpz_class> next(n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (c[i][j]) next[i] += c[i][j] * ways[j];
    ways = std::move(next);
    mpz_class total = 0;
    for (const auto& w : ways) total += w;
    out.push_back(total);
  }
  return out;
}

// ---------------------------------------------------------------- maps

/// Exact planar affine map in companion coordinates, x -> L x + t.
struct QMap {
  std::array<mpq_class, 4> l{1, 0, 0, 1};
  std::array<mpq_class, 2> t{0, 0};

  [[nodiscard]] QMap after(const QMap& o) const {  // this o o
    QMap r;
    r.l = {l[0] * o.l[0] + l[1] * o.l[2], l[0] * o.l[1] + l[1] * o.l[3], l[2] * o.l[0] + l[3] * o.l[2],
           l[2] * o.l[1] + l[3] * o.l[3]};
    r.t = {l[0] * o.t[0] + l[1] * o.t[1] + t[0], l[2] * o.t[0] + l[3] * o.t[1] + t[1]};
    return r;
  }
  [[nodiscard]] QMap inverse() const {
    const mpq_class det = l[0] * l[3] - l[1] * l[2];
    QMap r;
    r.l = {l[3] / det, -l[1] / det, -l[2] / det, l[0] / det};
    r.t = {-(r.l[0] * t[0] + r.l[1] * t[1]), -(r.l[2] * t[0] + r.l[3] * t[1])};
    return r;
  }
  [[nodiscard]] std::string key() const {
    std::string s;
    for (const auto& x : l) s += x.get_str() + ",";
    return s + t[0].get_str() + "," + t[1].get_str();
  }
  [[nodiscard]] bool is_identity() const { return l[0] == 1 && l[1] == 0 && l[2] == 0 && l[3] == 1 && t[0] == 0 && t[1] == 0; }
};

inline QMap from_library(const ifsgraph::AffineMap& h) {
  QMap q;
  for (std::size_t i = 0; i < 4; ++i) q.l[i] = h.linear.e[i].to_mpq();
  q.t = {h.translation.x.to_mpq(), h.translation.y.to_mpq()};
  return q;
}

/// f_k = M^{-1} S_k (x + t_k), rebuilt from the raw spec fields.
inline std::vector<QMap> contractions(const ifsgraph::IfsSpec& spec) {
  const mpq_class a = spec.field.a.to_mpq();
  // x s + y 1 with s = [[0, -1], [1, -a]].
  auto combo = [&](const mpq_class& x, const mpq_class& y) {
    return std::array<mpq_class, 4>{y, -x, x, y - a * x};
  };
  QMap m;
  m.l = combo(spec.b.to_mpq(), spec.c.to_mpq());
  const QMap minv = m.inverse();
  std::vector<QMap> out;
  for (const auto& map : spec.maps) {
    QMap s;
    s.l = combo(map.sym.x.to_mpq(), map.sym.y.to_mpq());
    if (map.sym.reflected) s.l = {s.l[1], s.l[0], s.l[3], s.l[2]};  // right-multiply by [[0,1],[1,0]]
    QMap shift;
    shift.t = {map.t.x.to_mpq(), map.t.y.to_mpq()};
    out.push_back(minv.after(s).after(shift));
  }
  return out;
}

// ---------------------------------------------------------------- point clouds

using P2 = std::array<double, 2>;

struct Cloud {
  std::vector<P2> points;  // standard (Euclidean) coordinates
  double eps = 0.0;        // A lies in the union of closed eps-balls around the points
  double radius = 0.0;     // A lies in the ball of this radius around `center`
  P2 center{};
  double ratio = 0.0;
};

struct DMap {
  std::array<double, 4> l{};
  std::array<double, 2> t{};
  [[nodiscard]] P2 operator()(const P2& p) const { return {l[0] * p[0] + l[1] * p[1] + t[0], l[2] * p[0] + l[3] * p[1] + t[1]}; }
};

/// Companion coordinates to an orthonormal frame of the Gram form
/// x^2 + y^2 - a x y (Cholesky).
struct Frame {
  double a = 0.0;
  [[nodiscard]] P2 to_std(double x, double y) const { return {x - 0.5 * a * y, y * std::sqrt(1.0 - 0.25 * a * a)}; }
  [[nodiscard]] P2 from_std(const P2& p) const {
    const double y = p[1] / std::sqrt(1.0 - 0.25 * a * a);
    return {p[0] + 0.5 * a * y, y};
  }
  [[nodiscard]] DMap conj(const QMap& q) const {
    // Columns of the standard-frame matrix are the images of the unit vectors.
    DMap d;
    const P2 o = to_std(q.t[0].get_d(), q.t[1].get_d());
    auto img = [&](const P2& e) {
      const P2 c = from_std(e);
      const double x = q.l[0].get_d() * c[0] + q.l[1].get_d() * c[1];
      const double y = q.l[2].get_d() * c[0] + q.l[3].get_d() * c[1];
      return to_std(x, y);
    };
    const P2 c0 = img({1, 0}), c1 = img({0, 1});
    d.l = {c0[0], c1[0], c0[1], c1[1]};
    d.t = o;
    return d;
  }
};

/// Points f_w(c) for all words of length `depth`, with c the fixed point of
/// the averaged map, plus the covering radius from the contraction bound.
inline Cloud point_cloud(const ifsgraph::IfsSpec& spec, int depth) {
  const Frame fr{spec.field.a.to_double()};
  const auto qs = oracle::contractions(spec);
  std::vector<DMap> fs;
  for (const auto& q : qs) fs.push_back(fr.conj(q));
  const double m = static_cast<double>(fs.size());
  // Centroid by iteration of the averaged map (a contraction).
  P2 c{0, 0};
  for (int it = 0; it < 2000; ++it) {
    P2 s{0, 0};
    for (const auto& f : fs) {
      const P2 p = f(c);
      s[0] += p[0] / m;
      s[1] += p[1] / m;
    }
    c = s;
  }
  Cloud out;
  out.center = c;
  out.ratio = std::sqrt(std::abs(fs[0].l[0] * fs[0].l[3] - fs[0].l[1] * fs[0].l[2]));
  double delta = 0.0;
  for (const auto& f : fs) {
    const P2 p = f(c);
    delta = std::max(delta, std::hypot(p[0] - c[0], p[1] - c[1]));
  }
  out.radius = delta / (1.0 - out.ratio);
  out.eps = out.radius * std::pow(out.ratio, depth);
  std::vector<P2> layer{c};
  for (int d = 0; d < depth; ++d) {
    std::vector<P2> next;
    next.reserve(layer.size() * fs.size());
    for (const auto& f : fs)
      for (const auto& p : layer) next.push_back(f(p));
    layer = std::move(next);
  }
  out.points = std::move(layer);
  return out;
}

inline double cloud_distance(const Cloud& cl, const DMap& h) {
  double best = INFINITY;
  std::vector<P2> moved;
  moved.reserve(cl.points.size());
  for (const auto& p : cl.points) moved.push_back(h(p));
  for (const auto& p : cl.points)
    for (const auto& q : moved) best = std::min(best, std::hypot(p[0] - q[0], p[1] - q[1]));
  return best;
}

struct OverlapCheck {
  std::size_t maps_checked = 0;
  std::size_t vertex_hits = 0;  // generated maps that are graph vertices
  std::size_t far_hits = 0;     // generated maps certified far
  std::vector<std::string> failures;
};

/// Generates the neighbor maps f_w^{-1} f_v for word pairs up to length
/// `max_len` (first letters distinct), deduplicated, and checks each one:
/// a graph vertex must have overlapping cloud balls; a map the library
/// certifies far must not. Expansion stops below maps whose clouds are
/// separated by more than the covering slack, since their descendants
/// are disjoint as well.
inline OverlapCheck check_overlap(const ifsgraph::IfsSpec& spec, const ifsgraph::NeighborGraph& ng, int max_len = 4,
                                  int cloud_depth = 3) {
  OverlapCheck out;
  const Frame fr{spec.field.a.to_double()};
  const Cloud cl = point_cloud(spec, cloud_depth);
  const auto fs = oracle::contractions(spec);
  std::vector<QMap> inv;
  for (const auto& f : fs) inv.push_back(f.inverse());
  const ifsgraph::SpecAnalysis an = ifsgraph::analyze_spec(spec);

  std::set<std::string> vertices;
  for (const auto& v : ng.vertices) vertices.insert(from_library(v).key());

  const double tol = 1e-9 * (1.0 + cl.radius);
  std::set<std::string> seen;
  std::vector<QMap> level;
  for (std::size_t k = 0; k < fs.size(); ++k)
    for (std::size_t j = 0; j < fs.size(); ++j)
      if (k != j) {
        QMap h = inv[k].after(fs[j]);
        if (seen.insert(h.key()).second) level.push_back(std::move(h));
      }
  for (int len = 1; len <= max_len && !level.empty(); ++len) {
    std::vector<QMap> next;
    for (const QMap& h : level) {
      ++out.maps_checked;
      const double dist = cloud_distance(cl, fr.conj(h));
      const bool overlap = dist <= 2.0 * cl.eps + tol;
      const bool is_vertex = vertices.count(h.key()) != 0;
      if (h.is_identity()) {
        // f_w = f_v for distinct words: the builder must have reported an OSC violation.
        out.failures.push_back("identity generated at length " + std::to_string(len));
        continue;
      }
      ifsgraph::AffineMap lib;
      for (std::size_t i = 0; i < 4; ++i) lib.linear.e[i] = ifsgraph::Rational(h.l[i]);
      lib.translation = {ifsgraph::Rational(h.t[0]), ifsgraph::Rational(h.t[1])};
      const bool far = ifsgraph::is_certainly_far(lib, an);
      if (is_vertex) {
        ++out.vertex_hits;
        if (!overlap) out.failures.push_back("vertex without overlap at length " + std::to_string(len) + ": " + h.key());
      }
      if (far) {
        ++out.far_hits;
        if (dist <= 2.0 * cl.eps - tol) out.failures.push_back("certified-far map overlaps: " + h.key());
        if (is_vertex) out.failures.push_back("certified-far map is a vertex: " + h.key());
      }
      if (len == max_len) continue;
      if (dist > 2.0 * cl.eps + tol && !is_vertex) continue;  // clouds apart: A and h(A) disjoint
      for (std::size_t k = 0; k < fs.size(); ++k)
        for (std::size_t j = 0; j < fs.size(); ++j) {
          QMap g = inv[k].after(h).after(fs[j]);
          if (seen.insert(g.key()).second) next.push_back(std::move(g));
        }
    }
    level = std::move(next);
  }
  for (const auto& v : ng.vertices) {
    const QMap h = from_library(v);
    if (h.is_identity()) out.failures.push_back("identity appears as a vertex");
    else if (cloud_distance(cl, fr.conj(h)) > 2.0 * cl.eps + tol) out.failures.push_back("vertex without overlap: " + h.key());
  }
  return out;
}

}  // namespace oracle

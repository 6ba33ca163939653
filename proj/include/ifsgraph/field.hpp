#pragma once

// Quadratic number field bookkeeping for a base rotation s with
// characteristic polynomial z^2 + a z + 1, and linear algebra in the
// companion basis {b1, s(b1)}.

#include "ifsgraph/rational.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace ifsgraph {

struct FieldSpec {
  Rational a;            // trace parameter, |a| < 2
  std::int64_t u = 0;    // a = 2u/w, w > 0, sign of a carried by u
  std::int64_t v = 1;
  std::int64_t w = 1;
  std::int64_t d = 1;    // square-free part of w^2 - u^2
  Mat2Q gram;            // [[1, -a/2], [-a/2, 1]]

  friend bool operator==(const FieldSpec& x, const FieldSpec& y) { return x.a == y.a; }
};

namespace detail {

inline std::int64_t to_int64(const Integer& z, const char* what) {
  if (!z.fits_slong_p()) throw std::invalid_argument(std::string(what) + " out of range");
  return z.get_si();
}

/// Splits n > 0 as n = core * root^2 with core square-free.
inline std::pair<std::int64_t, std::int64_t> squarefree_decompose(std::int64_t n) {
  std::int64_t core = 1;
  std::int64_t root = 1;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    for (int i = 0; i < e / 2; ++i) root *= p;
    if (e % 2 == 1) core *= p;
  }
  core *= n;
  return {core, root};
}

inline bool is_squarefree(std::int64_t n) {
  return n >= 1 && squarefree_decompose(n).second == 1;
}

}  // namespace detail

inline FieldSpec make_field(const Rational& a) {
  if (a.abs() >= Rational(2)) throw std::invalid_argument("degenerate rotation parameter");
  FieldSpec f;
  f.a = a;
  // u/w = a/2 in lowest terms.
  const Rational half = a / Rational(2);
  f.u = detail::to_int64(half.num(), "rotation parameter numerator");
  f.w = detail::to_int64(half.den(), "rotation parameter denominator");
  const std::int64_t disc = f.w * f.w - f.u * f.u;
  const auto [core, root] = detail::squarefree_decompose(disc);
  f.d = core;
  f.v = root;
  const Rational off = -a / Rational(2);
  f.gram = Mat2Q(1, off, off, 1);
  return f;
}

/// Companion matrix of the base rotation: s(b1) = b2, s(b2) = -b1 - a b2.
inline Mat2Q rotation_matrix(const FieldSpec& field) { return {0, -1, 1, -field.a}; }

/// Exchange matrix swapping b1 and b2.
inline Mat2Q reflection_matrix() { return {0, 1, 1, 0}; }

/// x * s + y * 1, optionally followed (on the right) by the exchange reflection.
inline Mat2Q linear_combo(const FieldSpec& field, const Rational& x, const Rational& y, bool reflected) {
  Mat2Q out = x * rotation_matrix(field) + y * Mat2Q::identity();
  if (reflected) out = out * reflection_matrix();
  return out;
}

/// det(x M_s + y I) = x^2 + y^2 - a x y; a rotation iff this equals one.
inline Rational combo_determinant(const FieldSpec& field, const Rational& x, const Rational& y) {
  return x * x + y * y - field.a * x * y;
}

inline bool is_rotation(const FieldSpec& field, const Rational& x, const Rational& y) {
  return combo_determinant(field, x, y) == Rational(1);
}

/// Rational angles occur only for the crystallographic parameters 0, 1, -1.
inline bool is_irrational_rotation(const FieldSpec& field) {
  return field.a != Rational(0) && field.a != Rational(1) && field.a != Rational(-1);
}

/// Exact squared Euclidean length of a companion-basis vector.
inline Rational gram_norm_sq(const FieldSpec& field, const Vec2Q& v) {
  return v.x * v.x + v.y * v.y - field.a * v.x * v.y;
}

/// True when L^T G L = G, i.e. L is an isometry of the standard plane.
inline bool is_gram_orthogonal(const FieldSpec& field, const Mat2Q& linear) {
  return linear.transpose() * field.gram * linear == field.gram;
}

struct Triple {
  std::int64_t u;
  std::int64_t v;
  std::int64_t w;
  friend bool operator==(const Triple&, const Triple&) = default;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

/// Primitive solutions of u^2 + d v^2 = w^2 with u, v > 0 and w <= bound,
/// produced by Euclid's parametrisation u = n^2 - d m^2, v = 2mn,
/// w = n^2 + d m^2 (gcd(m, n) = 1, n > m sqrt(d)) and reduced to lowest
/// terms. The common factor of a parametrised triple divides 2d, so
/// parameters are scanned up to w <= 2 d bound. Sorted by (w, u, v).
inline std::vector<Triple> euclid_triples(std::int64_t d, std::int64_t bound) {
  if (!detail::is_squarefree(d)) throw std::invalid_argument("d must be a positive square-free integer");
  if (bound < 1) throw std::invalid_argument("bound must be at least 1");
  const std::int64_t scan = 2 * d * bound;
  std::vector<Triple> out;
  for (std::int64_t m = 1; 1 + d * m * m <= scan; ++m) {
    for (std::int64_t n = 1; n * n + d * m * m <= scan; ++n) {
      if (n * n <= d * m * m) continue;
      if (std::gcd(m, n) != 1) continue;
      std::int64_t u = n * n - d * m * m;
      std::int64_t v = 2 * m * n;
      std::int64_t w = n * n + d * m * m;
      const std::int64_t g = std::gcd(std::gcd(u, v), w);
      u /= g;
      v /= g;
      w /= g;
      if (w <= bound) out.push_back({u, v, w});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Triple& p, const Triple& q) { return std::tie(p.w, p.u, p.v) < std::tie(q.w, q.u, q.v); });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct ExpansionReport {
  Rational det;
  Rational trace;
  bool is_algebraic_integer = false;
};

/// Determinant and trace of g = b s + c in the companion basis.
inline ExpansionReport expansion_report(const FieldSpec& field, const Rational& b, const Rational& c) {
  ExpansionReport r;
  r.det = b * b + c * c - field.a * b * c;
  r.trace = Rational(2) * c - field.a * b;
  if (r.det <= Rational(1)) throw std::invalid_argument("not expanding");
  r.is_algebraic_integer = r.det.is_integer() && r.trace.is_integer();
  return r;
}

/// Row-major float matrix taking companion coordinates to standard ones.
/// Rendering only; never used for decisions.
inline std::array<double, 4> embed_to_standard(const FieldSpec& field) {
  const double a = field.a.to_double();
  return {1.0, -a / 2.0, 0.0, std::sqrt(1.0 - a * a / 4.0)};
}

/// Rational p with p <= sqrt(q) and sqrt(q) - p <= tol. Newton's iteration
/// from above, rounded up onto a dyadic grid finer than tol / 8 so that
/// denominators stay bounded; q / x is then a lower bound.
inline Rational sqrt_lower_bound(const Rational& q, const Rational& tol) {
  if (q.sign() <= 0) throw std::invalid_argument("sqrt_lower_bound requires q > 0");
  if (tol.sign() <= 0) throw std::invalid_argument("sqrt_lower_bound requires tol > 0");
  Integer grid = 1;
  while (Rational(Integer(1), grid) * Rational(8) > tol) grid *= 2;
  auto round_up = [&](const Rational& x) { return Rational(ceil(x * Rational(grid)), grid); };
  auto round_down = [&](const Rational& x) { return Rational(floor(x * Rational(grid)), grid); };

  Rational x = std::max(q, Rational(1));
  const Rational half_tol = tol / Rational(2);
  for (int iter = 0; iter < 4096; ++iter) {
    const Rational lower = q / x;
    if (x - lower <= half_tol) break;
    x = round_up((x + lower) / Rational(2));
  }
  return round_down(q / x);
}

/// Default tolerance for the pruning radius.
inline Rational default_sqrt_tolerance() { return Rational(Integer(1), Integer(1000000000)); }

}  // namespace ifsgraph

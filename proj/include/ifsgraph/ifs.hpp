#pragma once

// IFS specifications: g(A) = U_k h_k(A) with g = b s + c and
// h_k(x) = S_k (x + t_k), S_k a field symmetry, t_k an integer vector.
// The contractions are f_k = g^{-1} h_k.

#include "ifsgraph/affine.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace ifsgraph {

/// The linear map x * s + y * 1, composed on the right with the exchange
/// reflection when `reflected` is set.
struct SymmetryDescriptor {
  Rational x;
  Rational y{1};
  bool reflected = false;

  static SymmetryDescriptor identity() { return {Rational(0), Rational(1), false}; }
  static SymmetryDescriptor negation() { return {Rational(0), Rational(-1), false}; }

  friend bool operator==(const SymmetryDescriptor&, const SymmetryDescriptor&) = default;
};

inline Mat2Q symmetry_matrix(const FieldSpec& field, const SymmetryDescriptor& sym) {
  return linear_combo(field, sym.x, sym.y, sym.reflected);
}

/// Product p * q inside the group generated by s and the exchange
/// reflection r. Uses s^2 = -a s - 1 and r P(s) = P(s^{-1}) r with
/// s^{-1} = -s - a.
inline SymmetryDescriptor multiply(const FieldSpec& field, const SymmetryDescriptor& p,
                                   const SymmetryDescriptor& q) {
  Rational qx = q.x;
  Rational qy = q.y;
  if (p.reflected) {
    qy = qy - field.a * qx;
    qx = -qx;
  }
  SymmetryDescriptor out;
  out.x = p.x * qy + qx * p.y - field.a * p.x * qx;
  out.y = p.y * qy - p.x * qx;
  out.reflected = p.reflected != q.reflected;
  return out;
}

struct MapSpec {
  SymmetryDescriptor sym;
  Vec2Q t;  // integer coordinates

  friend bool operator==(const MapSpec&, const MapSpec&) = default;
};

struct IfsSpec {
  FieldSpec field;
  Rational b;
  Rational c;
  std::vector<MapSpec> maps;

  [[nodiscard]] std::size_t m() const { return maps.size(); }
  [[nodiscard]] Mat2Q expansion_matrix() const { return linear_combo(field, b, c, false); }
  [[nodiscard]] Rational expansion_det() const { return b * b + c * c - field.a * b * c; }

  /// h_k as an exact isometry.
  [[nodiscard]] AffineMap piece_isometry(std::size_t k) const {
    const Mat2Q s = symmetry_matrix(field, maps[k].sym);
    return {s, s * maps[k].t};
  }

  friend bool operator==(const IfsSpec& x, const IfsSpec& y) {
    return x.field.a == y.field.a && x.b == y.b && x.c == y.c && x.maps == y.maps;
  }
};

struct Violation {
  std::optional<std::size_t> map_index;
  std::string message;
};

inline std::vector<Violation> validate(const IfsSpec& spec) {
  std::vector<Violation> out;
  const Rational det = spec.expansion_det();
  if (det <= Rational(1)) out.push_back({std::nullopt, "not expanding: det M = " + det.str() + " <= 1"});
  if (spec.m() < 2) out.push_back({std::nullopt, "m < 2: at least two maps required"});
  if (Rational(static_cast<long>(spec.m())) > det)
    out.push_back({std::nullopt, "m > det M: requires m ≤ det M (m = " + std::to_string(spec.m()) +
                                     ", det M = " + det.str() + ")"});
  for (std::size_t k = 0; k < spec.m(); ++k) {
    const MapSpec& map = spec.maps[k];
    if (!is_rotation(spec.field, map.sym.x, map.sym.y))
      out.push_back({k, "not a rotation: x^2 + y^2 - a x y = " +
                            combo_determinant(spec.field, map.sym.x, map.sym.y).str() + " != 1"});
    if (!map.t.is_integral()) out.push_back({k, "translation is not an integer vector"});
  }
  return out;
}

inline std::string describe(const Violation& v) {
  if (v.map_index) return "map " + std::to_string(*v.map_index + 1) + ": " + v.message;
  return v.message;
}

/// f_k = M^{-1} h_k for every map, exact.
inline std::vector<AffineMap> contractions(const IfsSpec& spec) {
  const Mat2Q inv = spec.expansion_matrix().inverse();
  std::vector<AffineMap> out;
  out.reserve(spec.m());
  for (std::size_t k = 0; k < spec.m(); ++k) {
    const AffineMap h = spec.piece_isometry(k);
    out.push_back({inv * h.linear, inv * h.translation});
  }
  return out;
}

/// Fixed point of the averaged map x -> (1/m) sum f_k(x).
inline Vec2Q centroid(const IfsSpec& spec) {
  const auto fs = contractions(spec);
  const Rational inv_m(Integer(1), Integer(static_cast<unsigned long>(fs.size())));
  Mat2Q avg_linear(0, 0, 0, 0);
  Vec2Q avg_translation{};
  for (const AffineMap& f : fs) {
    avg_linear = avg_linear + f.linear;
    avg_translation = avg_translation + f.translation;
  }
  const Mat2Q system = Mat2Q::identity() - inv_m * avg_linear;
  return system.inverse() * (inv_m * avg_translation);
}

/// Everything the neighbor-graph construction needs, computed once.
struct SpecAnalysis {
  FieldSpec field;
  Rational det;
  std::vector<AffineMap> maps;      // f_k
  std::vector<AffineMap> inverses;  // f_k^{-1}
  Vec2Q centroid;
  Rational delta_sq_max;            // max_k |f_k(x~) - x~|^2
  Rational radius_sq_bound;         // T >= (2 delta / (1 - r))^2
  Rational sqrt_det_lower;          // p <= sqrt(det M)
};

/// T = 4 delta^2 / (1 - 1/p)^2 with p a rational lower bound of sqrt(det M),
/// hence 1/p >= r and T bounds (2 delta / (1 - r))^2 from above. T is
/// rounded up to a multiple of 2^-32 to keep the per-candidate comparison
/// cheap; rounding up keeps the bound valid.
inline Rational pruning_radius_sq(const Rational& delta_sq_max, const Rational& det,
                                  Rational* sqrt_det_lower = nullptr) {
  Rational tol = default_sqrt_tolerance();
  Rational p = sqrt_lower_bound(det, tol);
  while (p <= Rational(1)) {
    tol = tol / Rational(1000);
    p = sqrt_lower_bound(det, tol);
  }
  if (sqrt_det_lower) *sqrt_det_lower = p;
  const Rational gap = Rational(1) - Rational(1) / p;
  const Rational t = Rational(4) * delta_sq_max / (gap * gap);
  const Integer grid = Integer(1) << 32;
  return Rational(ceil(t * Rational(grid)), grid);
}

inline SpecAnalysis analyze_spec(const IfsSpec& spec) {
  SpecAnalysis a;
  a.field = spec.field;
  a.det = spec.expansion_det();
  a.maps = contractions(spec);
  a.inverses.reserve(a.maps.size());
  for (const AffineMap& f : a.maps) a.inverses.push_back(f.inverse());
  a.centroid = centroid(spec);
  a.delta_sq_max = Rational(0);
  for (const AffineMap& f : a.maps) {
    const Rational d2 = gram_norm_sq(spec.field, f(a.centroid) - a.centroid);
    if (d2 > a.delta_sq_max) a.delta_sq_max = d2;
  }
  a.radius_sq_bound = pruning_radius_sq(a.delta_sq_max, a.det, &a.sqrt_det_lower);
  return a;
}

inline Rational pruning_radius_sq(const IfsSpec& spec) { return analyze_spec(spec).radius_sq_bound; }

}  // namespace ifsgraph

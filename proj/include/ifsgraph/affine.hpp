#pragma once

#include "ifsgraph/field.hpp"

#include <string>

namespace ifsgraph {

/// Exact affine map x -> linear * x + translation in companion coordinates.
/// Contractions f_k and neighbor maps h = f_w^{-1} f_v are both of this form.
struct AffineMap {
  Mat2Q linear = Mat2Q::identity();
  Vec2Q translation{};

  static AffineMap identity() { return {}; }

  [[nodiscard]] Vec2Q operator()(const Vec2Q& x) const { return linear * x + translation; }

  /// (*this) o rhs
  [[nodiscard]] AffineMap then_after(const AffineMap& rhs) const {
    return {linear * rhs.linear, linear * rhs.translation + translation};
  }

  [[nodiscard]] AffineMap inverse() const {
    Mat2Q inv = linear.inverse();
    Vec2Q t = inv * translation;
    return {std::move(inv), -t};
  }

  [[nodiscard]] bool is_identity() const { return linear.is_identity() && translation.is_zero(); }

  friend bool operator==(const AffineMap&, const AffineMap&) = default;
};

/// a o b
inline AffineMap compose(const AffineMap& a, const AffineMap& b) { return a.then_after(b); }

using Isometry = AffineMap;

/// Gram-orthogonal linear part with determinant +-1.
inline bool is_isometry(const FieldSpec& field, const AffineMap& h) {
  const Rational d = h.linear.det();
  return (d == Rational(1) || d == Rational(-1)) && is_gram_orthogonal(field, h.linear);
}

/// Deterministic total encoding of the six reduced rationals; equal keys
/// exactly when the maps are equal.
inline std::string canonical_key(const AffineMap& h) {
  std::string key;
  key.reserve(64);
  for (const Rational& r : h.linear.e) {
    key += r.str();
    key += ',';
  }
  key += h.translation.x.str();
  key += ',';
  key += h.translation.y.str();
  return key;
}

}  // namespace ifsgraph

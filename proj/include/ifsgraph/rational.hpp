#pragma once

// Exact rational scalars, 2-vectors and 2x2 matrices; GMP backs values
// that outgrow 64 bits.

#include <gmpxx.h>

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <climits>
#include <functional>
#include <memory>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ifsgraph {

using Integer = mpz_class;

namespace detail {

using i128 = __int128;

inline i128 abs128(i128 x) { return x < 0 ? -x : x; }

inline i128 gcd128(i128 a, i128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    if ((a >> 64) == 0 && (b >> 64) == 0)
      return static_cast<i128>(std::gcd(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b)));
    const i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(std::gcd(static_cast<std::uint64_t>(a < 0 ? -static_cast<i128>(a) : a),
                                            static_cast<std::uint64_t>(b < 0 ? -static_cast<i128>(b) : b)));
}

inline constexpr std::int64_t kSmallMax = INT64_MAX;

inline bool fits_small(i128 x) { return x >= -static_cast<i128>(kSmallMax) && x <= static_cast<i128>(kSmallMax); }

}  // namespace detail

/// Exact rational, always in lowest terms with a positive denominator, so
/// equality is structural. Values whose parts fit in 64 bits are stored
/// inline; larger ones spill to GMP.
class Rational {
 public:
  Rational() = default;
  Rational(long n) : n_(n) {  // NOLINT(google-explicit-constructor)
    if (n == INT64_MIN) set_big(mpq_class(n));
  }
  Rational(int n) : n_(n) {}  // NOLINT(google-explicit-constructor)
  explicit Rational(const Integer& n) { set_big(mpq_class(n)); }
  Rational(const Integer& num, const Integer& den) {
    if (den == 0) throw std::domain_error("zero denominator");
    mpq_class q(num, den);
    q.canonicalize();
    set_big(std::move(q));
  }
  explicit Rational(mpq_class q) {
    q.canonicalize();
    set_big(std::move(q));
  }

  Rational(const Rational& o) : n_(o.n_), d_(o.d_), big_(o.big_ ? std::make_unique<mpq_class>(*o.big_) : nullptr) {}
  Rational(Rational&&) noexcept = default;
  Rational& operator=(const Rational& o) {
    if (this != &o) {
      n_ = o.n_;
      d_ = o.d_;
      big_ = o.big_ ? std::make_unique<mpq_class>(*o.big_) : nullptr;
    }
    return *this;
  }
  Rational& operator=(Rational&&) noexcept = default;
  ~Rational() = default;

  /// Parses "p" or "p/q" with decimal integers; q must be positive.
  static Rational parse(std::string_view text) {
    auto digits = [](std::string_view s, bool allow_sign) {
      if (allow_sign && !s.empty() && s.front() == '-') s.remove_prefix(1);
      if (s.empty()) return false;
      for (char ch : s)
        if (ch < '0' || ch > '9') return false;
      return true;
    };
    const auto slash = text.find('/');
    const std::string_view num = text.substr(0, slash);
    if (!digits(num, true))
      throw std::invalid_argument("malformed rational \"" + std::string(text) + "\"");
    if (slash == std::string_view::npos) return Rational(Integer(std::string(num)));
    const std::string_view den = text.substr(slash + 1);
    if (!digits(den, false))
      throw std::invalid_argument("malformed rational \"" + std::string(text) + "\"");
    const Integer d{std::string(den)};
    if (d == 0)
      throw std::invalid_argument("malformed rational \"" + std::string(text) + "\": zero denominator");
    return Rational(Integer(std::string(num)), d);
  }

  [[nodiscard]] std::string str() const {
    if (big_) {
      if (big_->get_den() == 1) return big_->get_num().get_str();
      return big_->get_num().get_str() + "/" + big_->get_den().get_str();
    }
    if (d_ == 1) return std::to_string(n_);
    return std::to_string(n_) + "/" + std::to_string(d_);
  }

  [[nodiscard]] Integer num() const { return big_ ? Integer(big_->get_num()) : Integer(static_cast<long>(n_)); }
  [[nodiscard]] Integer den() const { return big_ ? Integer(big_->get_den()) : Integer(static_cast<long>(d_)); }
  [[nodiscard]] int sign() const { return big_ ? sgn(*big_) : (n_ > 0) - (n_ < 0); }
  [[nodiscard]] bool is_zero() const { return !big_ && n_ == 0; }
  [[nodiscard]] bool is_integer() const { return big_ ? big_->get_den() == 1 : d_ == 1; }
  [[nodiscard]] double to_double() const {
    return big_ ? big_->get_d() : static_cast<double>(n_) / static_cast<double>(d_);
  }
  [[nodiscard]] mpq_class to_mpq() const {
    if (big_) return *big_;
    mpq_class q(Integer(static_cast<long>(n_)), Integer(static_cast<long>(d_)));
    return q;
  }

  [[nodiscard]] Rational abs() const { return sign() < 0 ? -*this : *this; }

  Rational operator-() const {
    if (!big_) return from_parts(-static_cast<detail::i128>(n_), d_);
    return Rational(mpq_class(-*big_));
  }

  Rational& operator+=(const Rational& o) {
    if (!big_ && !o.big_) {
      using detail::i128;
      if (d_ == 1 && o.d_ == 1) {
        std::int64_t sum;
        if (!__builtin_add_overflow(n_, o.n_, &sum) && sum != INT64_MIN) {
          n_ = sum;
          return *this;
        }
      }
      const i128 g = detail::gcd64(d_, o.d_);
      const i128 num = static_cast<i128>(n_) * (o.d_ / g) + static_cast<i128>(o.n_) * (d_ / g);
      const i128 den = static_cast<i128>(d_) * (o.d_ / g);
      return assign_reduced(num, den);
    }
    return assign_big(to_mpq() + o.to_mpq());
  }
  Rational& operator-=(const Rational& o) { return *this += -o; }
  Rational& operator*=(const Rational& o) {
    if (!big_ && !o.big_) {
      using detail::i128;
      if (n_ == 0 || o.n_ == 0) return *this = Rational();
      const std::int64_t g1 = detail::gcd64(n_, o.d_);
      const std::int64_t g2 = detail::gcd64(o.n_, d_);
      const i128 num = static_cast<i128>(n_ / g1) * (o.n_ / g2);
      const i128 den = static_cast<i128>(d_ / g2) * (o.d_ / g1);
      if (detail::fits_small(num) && detail::fits_small(den)) {
        n_ = static_cast<std::int64_t>(num);
        d_ = static_cast<std::int64_t>(den);
        return *this;
      }
    }
    return assign_big(to_mpq() * o.to_mpq());
  }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("division by zero");
    return *this *= o.reciprocal();
  }
  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) return a.n_ == b.n_ && a.d_ == b.d_;
    if (a.big_ && b.big_) return *a.big_ == *b.big_;
    return false;  // canonical: a spilled value never fits inline
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      const detail::i128 l = static_cast<detail::i128>(a.n_) * b.d_;
      const detail::i128 r = static_cast<detail::i128>(b.n_) * a.d_;
      return l <=> r;
    }
    const int c = cmp(a.to_mpq(), b.to_mpq());
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  static Rational from_parts(detail::i128 num, detail::i128 den) {
    Rational r;
    r.assign_reduced(num, den);
    return r;
  }

  [[nodiscard]] Rational reciprocal() const {
    if (is_zero()) throw std::domain_error("division by zero");
    if (!big_) return n_ < 0 ? from_parts(-static_cast<detail::i128>(d_), -static_cast<detail::i128>(n_))
                             : from_parts(d_, n_);
    return Rational(mpq_class(1 / *big_));
  }

  Rational& assign_reduced(detail::i128 num, detail::i128 den) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const detail::i128 g = detail::gcd128(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    if (detail::fits_small(num) && detail::fits_small(den)) {
      big_.reset();
      n_ = static_cast<std::int64_t>(num);
      d_ = static_cast<std::int64_t>(den);
      return *this;
    }
    return assign_big(mpq_class(to_integer(num), to_integer(den)));
  }

  static Integer to_integer(detail::i128 x) {
    const bool neg = x < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(x + 1)) + 1 : static_cast<unsigned __int128>(x);
    Integer out(static_cast<unsigned long>(u >> 64));
    out <<= 64;
    out += Integer(static_cast<unsigned long>(u & 0xffffffffffffffffULL));
    return neg ? Integer(-out) : out;
  }

  Rational& assign_big(mpq_class q) {
    set_big(std::move(q));
    return *this;
  }

  /// Stores q (canonical), inline when both parts fit.
  void set_big(mpq_class q) {
    if (q.get_num().fits_slong_p() && q.get_den().fits_slong_p() && q.get_num() != LONG_MIN) {
      n_ = q.get_num().get_si();
      d_ = q.get_den().get_si();
      big_.reset();
    } else {
      big_ = std::make_unique<mpq_class>(std::move(q));
    }
  }

  std::int64_t n_ = 0;
  std::int64_t d_ = 1;
  std::unique_ptr<mpq_class> big_;
};

/// Largest integer <= q.
inline Integer floor(const Rational& q) {
  const mpq_class r = q.to_mpq();
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return out;
}

/// Smallest integer >= q.
inline Integer ceil(const Rational& q) {
  const mpq_class r = q.to_mpq();
  Integer out;
  mpz_cdiv_q(out.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return out;
}

struct Vec2Q {
  Rational x;
  Rational y;

  [[nodiscard]] bool is_zero() const { return x.is_zero() && y.is_zero(); }
  [[nodiscard]] bool is_integral() const { return x.is_integer() && y.is_integer(); }

  Vec2Q operator-() const { return {-x, -y}; }
  friend Vec2Q operator+(const Vec2Q& a, const Vec2Q& b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2Q operator-(const Vec2Q& a, const Vec2Q& b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2Q operator*(const Rational& s, const Vec2Q& v) { return {s * v.x, s * v.y}; }
  friend bool operator==(const Vec2Q&, const Vec2Q&) = default;
  friend std::ostream& operator<<(std::ostream& os, const Vec2Q& v) {
    return os << '(' << v.x << ", " << v.y << ')';
  }
};

/// Row-major 2x2 rational matrix.
struct Mat2Q {
  std::array<Rational, 4> e{};

  Mat2Q() = default;
  Mat2Q(Rational a00, Rational a01, Rational a10, Rational a11)
      : e{std::move(a00), std::move(a01), std::move(a10), std::move(a11)} {}

  static Mat2Q identity() { return {1, 0, 0, 1}; }

  [[nodiscard]] const Rational& operator()(int i, int j) const { return e[static_cast<std::size_t>(2 * i + j)]; }
  Rational& operator()(int i, int j) { return e[static_cast<std::size_t>(2 * i + j)]; }

  [[nodiscard]] Rational det() const { return e[0] * e[3] - e[1] * e[2]; }
  [[nodiscard]] Rational trace() const { return e[0] + e[3]; }
  [[nodiscard]] Mat2Q transpose() const { return {e[0], e[2], e[1], e[3]}; }
  [[nodiscard]] bool is_identity() const { return *this == identity(); }

  [[nodiscard]] Mat2Q inverse() const {
    const Rational d = det();
    if (d.is_zero()) throw std::domain_error("singular matrix");
    return {e[3] / d, -e[1] / d, -e[2] / d, e[0] / d};
  }

  friend Mat2Q operator*(const Mat2Q& a, const Mat2Q& b) {
    return {a.e[0] * b.e[0] + a.e[1] * b.e[2], a.e[0] * b.e[1] + a.e[1] * b.e[3],
            a.e[2] * b.e[0] + a.e[3] * b.e[2], a.e[2] * b.e[1] + a.e[3] * b.e[3]};
  }
  friend Vec2Q operator*(const Mat2Q& a, const Vec2Q& v) {
    return {a.e[0] * v.x + a.e[1] * v.y, a.e[2] * v.x + a.e[3] * v.y};
  }
  friend Mat2Q operator+(const Mat2Q& a, const Mat2Q& b) {
    return {a.e[0] + b.e[0], a.e[1] + b.e[1], a.e[2] + b.e[2], a.e[3] + b.e[3]};
  }
  friend Mat2Q operator-(const Mat2Q& a, const Mat2Q& b) {
    return {a.e[0] - b.e[0], a.e[1] - b.e[1], a.e[2] - b.e[2], a.e[3] - b.e[3]};
  }
  friend Mat2Q operator*(const Rational& s, const Mat2Q& a) {
    return {s * a.e[0], s * a.e[1], s * a.e[2], s * a.e[3]};
  }
  friend bool operator==(const Mat2Q&, const Mat2Q&) = default;
  friend std::ostream& operator<<(std::ostream& os, const Mat2Q& m) {
    return os << "[[" << m.e[0] << ", " << m.e[1] << "], [" << m.e[2] << ", " << m.e[3] << "]]";
  }
};

}  // namespace ifsgraph

template <>
struct std::hash<ifsgraph::Rational> {
  std::size_t operator()(const ifsgraph::Rational& r) const noexcept {
    return std::hash<std::string>{}(r.str());
  }
};

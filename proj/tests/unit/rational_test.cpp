#include "ifsgraph/rational.hpp"

#include <gtest/gtest.h>

#include <climits>
#include <random>

using ifsgraph::Integer;
using ifsgraph::Rational;

namespace {

mpq_class ref(const Rational& r) { return r.to_mpq(); }

Rational random_rational(std::mt19937_64& rng) {
  // Mix small values with ones near the int64 edge so both paths run.
  const int kind = static_cast<int>(rng() % 4);
  auto pick = [&](std::int64_t lim) {
    std::uniform_int_distribution<std::int64_t> d(-lim, lim);
    return d(rng);
  };
  std::int64_t n, d;
  switch (kind) {
    case 0: n = pick(20); d = pick(20); break;
    case 1: n = pick(1LL << 31); d = pick(1LL << 31); break;
    case 2: n = pick(std::numeric_limits<long>::max()); d = pick(std::numeric_limits<long>::max()); break;
    default: n = pick(1LL << 50); d = pick(7); break;
  }
  if (d == 0) d = 1;
  return Rational(Integer(static_cast<long>(n)), Integer(static_cast<long>(d)));
}

}  // namespace

TEST(Rational, CanonicalForm) {
  const Rational r(Integer(6), Integer(-4));
  EXPECT_EQ(r.str(), "-3/2");
  EXPECT_EQ(r.num(), -3);
  EXPECT_EQ(r.den(), 2);
  EXPECT_EQ(Rational(Integer(0), Integer(-7)).str(), "0");
  EXPECT_TRUE(Rational(Integer(10), Integer(5)).is_integer());
}

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(Rational::parse("-3/5"), Rational(Integer(-3), Integer(5)));
  EXPECT_EQ(Rational::parse("12"), Rational(12));
  EXPECT_EQ(Rational::parse("-4/6").str(), "-2/3");
  EXPECT_THROW(Rational::parse("4/-6"), std::invalid_argument);
  EXPECT_THROW(Rational::parse("1/0"), std::invalid_argument);
  EXPECT_THROW(Rational::parse("abc"), std::invalid_argument);
  EXPECT_THROW(Rational::parse(""), std::invalid_argument);
}

TEST(Rational, DivisionByZeroThrows) { EXPECT_THROW(Rational(1) / Rational(0), std::domain_error); }

TEST(Rational, OverflowSpillsToBigAndBack) {
  const Rational big(std::numeric_limits<long>::max());
  const Rational sum = big + big;
  EXPECT_EQ(ref(sum), mpq_class(Integer(std::numeric_limits<long>::max())) * 2);
  const Rational back = sum - big;
  EXPECT_EQ(back, big);
  EXPECT_EQ(back.str(), std::to_string(std::numeric_limits<long>::max()));
  const Rational prod = big * big;
  EXPECT_EQ(ref(prod), mpq_class(Integer(std::numeric_limits<long>::max())) * Integer(std::numeric_limits<long>::max()));
  EXPECT_EQ(prod / big, big);
  EXPECT_EQ(-Rational(std::numeric_limits<long>::min()), Rational(Integer(Integer(std::numeric_limits<long>::min()) * -1)));
}

TEST(Rational, MatchesGmpOnRandomOperands) {
  std::mt19937_64 rng(12345);
  for (int i = 0; i < 20000; ++i) {
    const Rational a = random_rational(rng);
    const Rational b = random_rational(rng);
    const mpq_class ra = ref(a), rb = ref(b);
    ASSERT_EQ(ref(a + b), ra + rb) << a << " + " << b;
    ASSERT_EQ(ref(a - b), ra - rb) << a << " - " << b;
    ASSERT_EQ(ref(a * b), ra * rb) << a << " * " << b;
    if (!b.is_zero()) {
      ASSERT_EQ(ref(a / b), ra / rb) << a << " / " << b;
    }
    ASSERT_EQ(a < b, ra < rb);
    ASSERT_EQ(a == b, ra == rb);
    // Equal values have equal representations whichever path produced them.
    ASSERT_EQ((a + b) - b, a);
    ASSERT_EQ(((a + b) - b).str(), a.str());
  }
}

TEST(Rational, FloorCeil) {
  EXPECT_EQ(ifsgraph::floor(Rational(Integer(-7), Integer(2))), -4);
  EXPECT_EQ(ifsgraph::ceil(Rational(Integer(-7), Integer(2))), -3);
  EXPECT_EQ(ifsgraph::floor(Rational(3)), 3);
}

TEST(Mat2Q, InverseAndProduct) {
  const ifsgraph::Mat2Q m(2, 1, 1, 1);
  EXPECT_EQ(m * m.inverse(), ifsgraph::Mat2Q::identity());
  EXPECT_EQ(m.det(), Rational(1));
}

#include <gtest/gtest.h>

#include <random>

#include "orbitlab/expr.hpp"
#include "orbitlab/numerics.hpp"
#include "support/oracles.hpp"

using namespace orbitlab;

TEST(Rational, ParsesCommonForms) {
  EXPECT_EQ(parse_rational("6/8"), BigRational(3, 4));
  EXPECT_EQ(parse_rational("-7"), BigRational(-7));
  EXPECT_EQ(parse_rational("0.125"), BigRational(1, 8));
  EXPECT_EQ(parse_rational("1e-3"), BigRational(1, 1000));
  EXPECT_THROW(parse_rational("1/0"), ParseError);
  EXPECT_THROW(parse_rational("abc"), ParseError);
}

TEST(Rational, FloorCeilPow) {
  EXPECT_EQ(floor_of(BigRational(-1, 2)), -1);
  EXPECT_EQ(ceil_of(BigRational(-1, 2)), 0);
  EXPECT_EQ(pow2(-3), BigRational(1, 8));
  EXPECT_EQ(pow_int(BigRational(2, 3), 3), BigRational(8, 27));
}

TEST(TurnReduce, Examples) {
  EXPECT_EQ(turn_reduce(BigRational(5, 2)).exact_value(), BigRational(1, 2));
  EXPECT_EQ(turn_reduce(BigRational(-1, 4)).exact_value(), BigRational(3, 4));
  EXPECT_EQ(turn_reduce(BigRational(7, 7)).exact_value(), BigRational(0));
}

TEST(TurnReduce, IntegerTranslationInvariant) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const BigRational q(static_cast<long>(rng() % 20001) - 10000, static_cast<long>(rng() % 997 + 1));
    const long k = static_cast<long>(rng() % 2000001) - 1000000;
    EXPECT_EQ(turn_reduce(q + k), turn_reduce(q));
  }
}

TEST(UnitEval, ExactQuarterTurns) {
  const auto one = unit_eval(Turn::exact(0), 64);
  EXPECT_TRUE(one.is_exact());
  EXPECT_TRUE(one.re.contains(BigRational(1)));
  EXPECT_TRUE(one.im.contains(BigRational(0)));
  const auto half = unit_eval(Turn::exact(BigRational(1, 2)), 64);
  EXPECT_TRUE(half.is_exact());
  EXPECT_TRUE(half.re.contains(BigRational(-1)));
  const auto quarter = unit_eval(Turn::exact(BigRational(3, 4)), 64);
  EXPECT_TRUE(quarter.is_exact());
  EXPECT_TRUE(quarter.im.contains(BigRational(-1)));
}

TEST(UnitEval, EighthTurnWidthAndValue) {
  const auto z = unit_eval(Turn::exact(BigRational(1, 8)), 64);
  EXPECT_LE(z.re.width_double(), std::ldexp(1.0, -61));
  EXPECT_LE(z.im.width_double(), std::ldexp(1.0, -61));
  const double ref = oracle::mpfr256("cos_eighth");
  EXPECT_LE(z.re.lo().to_double(MPFR_RNDD), ref);
  EXPECT_GE(z.re.hi().to_double(MPFR_RNDU), ref);
}

TEST(UnitEval, ConjugationSymmetry) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const BigRational t(static_cast<long>(rng() % 1000), 1000);
    const auto a = unit_eval(Turn::exact(t), 96);
    const auto b = unit_eval(turn_reduce(1 - t), 96);
    EXPECT_EQ(a.re.lo().compare(b.re.lo()), 0);
    EXPECT_EQ(a.re.hi().compare(b.re.hi()), 0);
    EXPECT_EQ(a.im.lo().compare((-b.im).lo()), 0);
    EXPECT_EQ(a.im.hi().compare((-b.im).hi()), 0);
  }
}

TEST(RealEval, Examples) {
  const auto l = real_eval("log(1)", 1, 64);
  EXPECT_TRUE(l.contains(BigRational(0)));
  EXPECT_TRUE(l.is_point());

  const auto e = real_eval("exp(2*pi - pi/2)", 1, 64);
  EXPECT_LT(e.width_double(), 1e-12);
  const double ref = oracle::mpfr256("exp_left", 1);
  EXPECT_NEAR(e.mid_double(), ref, 1e-11);
  EXPECT_NEAR(ref, 111.3177784, 1e-6);

  const auto s = real_eval("sqrt2*n^2", 10, 64);
  EXPECT_NEAR(s.mid_double(), 141.4213562373095, 1e-12);
  EXPECT_THROW(real_eval("log(n - 5)", 3, 64), DomainError);
}

TEST(RealEval, NestedUnderRefinement) {
  std::mt19937_64 rng(17);
  const std::vector<std::string> exprs{"log(n)", "exp(n/7)", "sqrt(n)", "n^(3/2)*log(n+1)", "sqrt2*n + pi"};
  for (int trial = 0; trial < 10000; ++trial) {
    const auto& f = exprs[trial % exprs.size()];
    const BigRational n(static_cast<long>(rng() % 5000 + 1), static_cast<long>(rng() % 13 + 1));
    const unsigned p = 24 + static_cast<unsigned>(rng() % 64);
    const auto coarse = real_eval(f, n, p);
    const auto fine = real_eval(f, n, 4 * p);
    ASSERT_TRUE(coarse.contains(fine)) << f << " at " << n.get_str() << " p=" << p;
  }
}

TEST(Interval, ArithmeticEncloses) {
  const auto third = RealInterval::exact(BigRational(1, 3), 64);
  const auto sum = third + third + third;
  EXPECT_TRUE(sum.contains(BigRational(1)));
  EXPECT_THROW(sqrt(RealInterval::from_int(-1, 64)), DomainError);
  const auto fr = frac(RealInterval::exact(BigRational(7, 2), 64));
  EXPECT_TRUE(fr.contains(BigRational(1, 2)));
}

TEST(DigitStream, RationalAndShift) {
  const auto s = DigitStream::from_rational(2, BigRational(5, 8));
  EXPECT_EQ(s.digit(1), 1u);
  EXPECT_EQ(s.digit(2), 0u);
  EXPECT_EQ(s.digit(3), 1u);
  EXPECT_EQ(s.digit(4), 0u);
  EXPECT_EQ(s.shifted(1, 64).exact_value(), BigRational(1, 4));
  EXPECT_EQ(s.prefix_value(3), BigRational(5, 8));
}

TEST(DigitStream, SeededIsDeterministicAndTagged) {
  const auto a = DigitStream::seeded(2, 7);
  const auto b = DigitStream::parse(2, a.tag());
  for (std::uint64_t i = 1; i <= 500; ++i) ASSERT_EQ(a.digit(i), b.digit(i));
  const BigRational scaled = a.prefix_value(200) * pow2(100);
  const double expect = BigRational(scaled - floor_of(scaled)).get_d();
  const double got = a.shifted(100, 64).as_interval(64).mid_double();
  const double gap = std::abs(got - expect);
  EXPECT_LT(std::min(gap, 1 - gap), 1e-15);
}

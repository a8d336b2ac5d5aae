#include <gtest/gtest.h>

#include <random>

#include "orbitlab/constructions.hpp"
#include "orbitlab/phases.hpp"
#include "support/oracles.hpp"

using namespace orbitlab;

namespace {

GaussianRational gq(long re, long im = 0) { return {BigRational(re), BigRational(im)}; }

}  // namespace

TEST(SymbolicPoly, ParseAndEval) {
  const auto P = SymbolicPoly::parse("sqrt2*t^2 + pi*t/3");
  EXPECT_EQ(P.degree(), 2);
  EXPECT_EQ(P.coeff(2).get("sqrt2"), BigRational(1));
  EXPECT_EQ(P.coeff(1).get("pi"), BigRational(1, 3));
  const auto v = P.eval(3);
  EXPECT_EQ(v.get("sqrt2"), BigRational(9));
  EXPECT_EQ(v.get("pi"), BigRational(1));
  EXPECT_THROW(SymbolicPoly::parse("t + 1"), RuleViolation);
  EXPECT_NO_THROW(SymbolicPoly::parse("t + 1", true));
}

TEST(PhaseEval, Examples) {
  const auto P = PhaseSeq::polynomial(SymbolicPoly::parse("pi*t/2"));
  EXPECT_EQ(phase_eval(P, 3, 64).exact_value(), BigRational(3, 4));

  const auto G = PhaseSeq::geometric(1, 2, BigRational(5, 8));
  EXPECT_EQ(phase_eval(G, 1, 64).exact_value(), BigRational(1, 4));

  const auto L = PhaseSeq::slow_growth("log(n)", true);
  EXPECT_TRUE(phase_eval(L, 1, 64).as_interval(64).contains(BigRational(0)));
}

TEST(PhaseEval, GeometricDigitShiftIsExact) {
  std::mt19937_64 rng(9);
  std::vector<unsigned> digits(200);
  for (auto& d : digits) d = static_cast<unsigned>(rng() % 2);
  const auto stream = DigitStream::from_digits(2, digits);
  const BigRational theta = stream.prefix_value(200);
  const auto G = PhaseSeq::geometric(1, 2, stream);
  for (std::uint64_t n = 1; n <= 200 - 64; ++n) {
    const Turn t = phase_eval(G, n, 64);
    ASSERT_TRUE(t.is_exact());
    ASSERT_EQ(t.exact_value(), turn_reduce(theta * pow2(static_cast<long>(n))).exact_value()) << n;
  }
}

TEST(PolyShift, Examples) {
  {
    const auto [Pm, Q] = poly_shift(SymbolicPoly::parse("t^2"), 3);
    EXPECT_EQ(Pm, SymbolicCoeff::rational(9));
    EXPECT_EQ(Q, SymbolicPoly::parse("6*t"));
  }
  {
    const auto [Pm, Q] = poly_shift(SymbolicPoly::parse("t"), 5);
    EXPECT_EQ(Pm, SymbolicCoeff::rational(5));
    EXPECT_EQ(Q.degree(), -1);
  }
  {
    const auto [Pm, Q] = poly_shift(SymbolicPoly::parse("2*t^3"), 1);
    EXPECT_EQ(Pm, SymbolicCoeff::rational(2));
    EXPECT_EQ(Q, SymbolicPoly::parse("6*t^2 + 6*t"));
  }
  EXPECT_THROW(poly_shift(SymbolicPoly::parse("t + 1", true), 2), RuleViolation);
}

TEST(PolyShift, IdentityAtIntegers) {
  std::mt19937_64 rng(41);
  const std::vector<std::string> symbols{"1", "pi", "sqrt2", "phi", "e"};
  for (int trial = 0; trial < 1000; ++trial) {
    const int deg = 1 + static_cast<int>(rng() % 4);
    std::vector<SymbolicCoeff> coeffs(static_cast<std::size_t>(deg) + 1);
    for (int d = 1; d <= deg; ++d) {
      for (const auto& s : symbols) {
        if (rng() % 2) continue;
        coeffs[static_cast<std::size_t>(d)].set(s, BigRational(static_cast<long>(rng() % 19) - 9,
                                                               static_cast<long>(rng() % 6 + 1)));
      }
    }
    const auto P = SymbolicPoly::from_coeffs(coeffs);
    const long m = static_cast<long>(rng() % 2001) - 1000;
    const auto [Pm, Q] = poly_shift(P, m);
    EXPECT_LT(Q.degree(), std::max(P.degree(), 1));
    EXPECT_FALSE(Q.has_constant());
    for (long n = 0; n <= 50; ++n) {
      ASSERT_EQ(P.eval(BigRational(n + m)), Pm + P.eval(BigRational(n)) + Q.eval(BigRational(n)))
          << "trial " << trial << " n=" << n;
    }
  }
}

TEST(PolyShift, BinomialTurnIdentity) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const BigRational tau(static_cast<long>(rng() % 1000) + 1, static_cast<long>(rng() % 997) + 2);
    for (long d = 1; d <= 4; ++d) {
      for (long n = -30; n <= 30; n += 7) {
        for (long m = -30; m <= 30; m += 5) {
          BigRational lhs = tau * pow_int(BigRational(n + m), static_cast<unsigned long>(d));
          BigRational rhs = 0;
          for (long j = 0; j <= d; ++j) {
            rhs += BigRational(oracle::binom(d, j)) * pow_int(BigRational(n), static_cast<unsigned long>(j)) *
                   pow_int(BigRational(m), static_cast<unsigned long>(d - j)) * tau;
          }
          ASSERT_EQ(turn_reduce(lhs), turn_reduce(rhs));
        }
      }
    }
  }
}

TEST(AlignSequence, Examples) {
  // (T^1 x)_0 = -2, (T^2 x)_0 = 3i, (T^3 x)_0 = 0 for T = 2B.
  FiniteVector v;
  v.set(1, gq(-1));
  v.set(2, {BigRational(0), BigRational(3, 4)});
  const auto T = WeightedShift::constant(2);
  const auto seq = align_sequence(T, BlockVector::from_finite(v), 0, 3);
  EXPECT_EQ(phase_eval(seq, 1, 64).exact_value(), BigRational(1, 2));
  EXPECT_EQ(phase_eval(seq, 2, 64).exact_value(), BigRational(3, 4));
  EXPECT_EQ(phase_eval(seq, 3, 64).exact_value(), BigRational(0));
}

TEST(AlignSequence, ProductIsRealNonnegative) {
  const auto hc = hc_block_vector([](std::uint64_t k) { return BigInt(static_cast<unsigned long>(k * k)); }, "k^2",
                                  DenseFamilySpec::standard());
  const auto T = WeightedShift::constant(2);
  for (std::uint64_t N : {0u, 2u, 5u}) {
    const auto seq = align_sequence(T, hc.x, N, 600);
    for (std::uint64_t n = 1; n <= 600; ++n) {
      const auto c = orbit_coord(T, hc.x, n, N);
      const auto pv = phase_value(seq, n, 64);
      ASSERT_TRUE(pv.direction);
      const auto prod = *pv.direction * c;
      ASSERT_EQ(prod.im, 0) << n;
      ASSERT_GE(prod.re, 0) << n;
    }
  }
}

TEST(SignflipSequence, Examples) {
  // T = 2B moves e_0 to 0, so ||T^n x - x|| = ||x|| and the boundary rule keeps +1.
  const auto r1 = signflip_sequence(WeightedShift::constant(2), BlockVector::from_finite(FiniteVector::basis(0)), 5);
  ASSERT_EQ(r1.steps.size(), 5u);
  for (const auto& s : r1.steps) EXPECT_EQ(s.lambda, 1);
  EXPECT_TRUE(r1.certified);

  // x = sum_{k < 20} 2^{-k} e_k is nearly fixed by 2B.
  FiniteVector x;
  for (std::uint64_t k = 0; k < 20; ++k) x.set(k, {pow2(-static_cast<long>(k)), BigRational(0)});
  const auto r2 = signflip_sequence(WeightedShift::constant(2), BlockVector::from_finite(x), 3);
  EXPECT_EQ(r2.steps[0].lambda, -1);
  EXPECT_TRUE(r2.certified);
  for (const auto& s : r2.steps) EXPECT_GE(s.margin_lo, s.quarter_norm_hi);
}

TEST(MinimalTargetIndex, Examples) {
  EXPECT_EQ(minimal_target_index(2), 2u);
  EXPECT_EQ(minimal_target_index(3), 1u);
}

TEST(AdversarialTheta, EmptyMembership) {
  // x = 2^{-30} S^{30} e_0 never comes close to e_2 before n = 30.
  BlockVector x;
  x.add_block(30, pow2(-30), FiniteVector::basis(0));
  const auto ph = adversarial_theta(WeightedShift::constant(2), x, {1, 2}, 2, 20);
  EXPECT_TRUE(ph.members.empty());
  for (const auto& a : ph.alphas) EXPECT_EQ(a, 0);
  EXPECT_EQ(ph.theta, 0);
}

TEST(AdversarialTheta, SingleBlockFlipsHalfTurn) {
  const std::uint64_t n0 = 12, N = 2;
  BlockVector x;
  x.add_block(BigInt(static_cast<unsigned long>(n0)), pow2(-static_cast<long>(n0)), FiniteVector::basis(N));
  const auto ph = adversarial_theta(WeightedShift::constant(2), x, {1, 2}, N, 20);
  ASSERT_EQ(ph.members, std::vector<std::uint64_t>{n0});
  EXPECT_EQ(ph.alphas[n0], BigRational(1, 2));
  EXPECT_TRUE(recheck_adversarial(WeightedShift::constant(2), x, ph).ok());
}

TEST(AdversarialTheta, RejectsTooSmallTargetIndex) {
  BlockVector x = BlockVector::from_finite(FiniteVector::basis(0));
  EXPECT_THROW(adversarial_theta(WeightedShift::constant(2), x, {1, 2}, 1, 10), RuleViolation);
}

TEST(SlowGrowth, PolynomialResidualsVanish) {
  const auto rep = slow_growth_certify(RealExpr::parse("n^3/7 + 2*n"), 3, 6, {10, 100, 1000});
  EXPECT_TRUE(rep.pass);
  for (const auto& row : rep.rows) {
    EXPECT_TRUE(row.exact);
    for (const auto& e : row.eps) EXPECT_TRUE(e.is_point() && e.contains(BigRational(0)));
  }
}

TEST(SlowGrowth, SqrtResidual) {
  const auto rep = slow_growth_certify(RealExpr::parse("sqrt(n)"), 0, 5, {1000, 10000, 100000});
  const auto& eps5 = rep.rows.back().eps[4];
  EXPECT_TRUE(eps5.certainly_greater_equal(BigRational(78, 10000)));
  EXPECT_TRUE(eps5.certainly_less(BigRational(80, 10000)));
  EXPECT_TRUE(rep.pass);
}

TEST(SlowGrowth, GeometricFails) {
  for (std::uint64_t d = 0; d <= 3; ++d) {
    const auto rep = slow_growth_certify(RealExpr::parse("2^n"), d, 5, {10, 20, 40});
    EXPECT_FALSE(rep.pass) << d;
  }
}

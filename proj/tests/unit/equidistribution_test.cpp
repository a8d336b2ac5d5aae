#include <gtest/gtest.h>

#include <random>
#include <set>

#include "orbitlab/equidistribution.hpp"
#include "support/oracles.hpp"

using namespace orbitlab;

namespace {

PointSample exact_sample(const std::vector<BigRational>& xs) {
  PointSample s;
  for (const auto& x : xs) s.points.push_back(Turn::exact(x));
  return s;
}

std::vector<SymbolicPoly> polys(std::initializer_list<const char*> texts) {
  std::vector<SymbolicPoly> out;
  for (const char* t : texts) out.push_back(SymbolicPoly::parse(t));
  return out;
}

}  // namespace

TEST(StarDiscrepancy, Examples) {
  EXPECT_EQ(*star_discrepancy(exact_sample({0, BigRational(1, 2)})).exact, BigRational(1, 2));
  std::vector<BigRational> grid;
  for (long i = 1; i <= 37; ++i) grid.emplace_back(i - 1, 37);
  EXPECT_EQ(*star_discrepancy(exact_sample(grid)).exact, BigRational(1, 37));
  EXPECT_EQ(*star_discrepancy(exact_sample({BigRational(3, 10)})).exact, BigRational(7, 10));
}

TEST(StarDiscrepancy, MatchesBruteForce) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t N = 1 + rng() % 200;
    const long q = static_cast<long>(rng() % 50 + 1);
    std::vector<BigRational> xs;
    for (std::size_t i = 0; i < N; ++i) {
      BigRational x(static_cast<long>(rng() % static_cast<std::uint64_t>(q)), q);
      x.canonicalize();
      xs.push_back(x);
    }
    const auto rep = star_discrepancy(exact_sample(xs));
    ASSERT_TRUE(rep.exact);
    ASSERT_EQ(*rep.exact, oracle::brute_star_discrepancy(xs)) << "trial " << trial;
    ASSERT_TRUE(rep.dstar.contains(*rep.exact));
  }
}

TEST(StarDiscrepancy, EnclosedPointsContainExactValue) {
  const auto s = sample_sequence(RealExpr::parse("sqrt2*n"), 2000);
  const auto rep = star_discrepancy(s);
  EXPECT_FALSE(rep.exact);
  EXPECT_LT(rep.dstar.width_double(), 1e-30);
  EXPECT_LT(rep.dstar.hi().to_double(MPFR_RNDU), 3e-3);
}

TEST(StarDiscrepancy, PrefixCurveAgreesWithPrefixes) {
  const auto s = sample_sequence(RealExpr::parse("n^2/7"), 300);
  const auto curve = discrepancy_prefix_curve(s, {10, 100, 300});
  ASSERT_EQ(curve.size(), 3u);
  for (const auto& rep : curve) {
    PointSample prefix{std::vector<Turn>(s.points.begin(), s.points.begin() + static_cast<long>(rep.N))};
    EXPECT_EQ(*rep.exact, *star_discrepancy(prefix).exact);
  }
}

TEST(WeylSum, Examples) {
  const auto zeros = exact_sample({0, 0, 0});
  EXPECT_TRUE(weyl_sum(zeros, 3).contains(BigRational(1)));
  const auto alt = exact_sample({0, BigRational(1, 2), 0, BigRational(1, 2)});
  EXPECT_TRUE(weyl_sum(alt, 1).contains(BigRational(0)));
  const auto s = sample_sequence(RealExpr::parse("sqrt2*n"), 10000);
  EXPECT_TRUE(weyl_sum(s, 1).certainly_less(BigRational(2, 100)));
}

TEST(RelationLattice, WorkedExamples) {
  const auto trivial = relation_lattice(polys({"sqrt2*t", "sqrt2*t^2"}));
  EXPECT_TRUE(trivial.independent());

  const auto full = relation_lattice(polys({"pi*t/3", "pi*t^2"}));
  ASSERT_EQ(full.rank(), 2u);
  EXPECT_EQ(full.basis[0], (std::vector<BigInt>{1, 0}));
  EXPECT_EQ(full.basis[1], (std::vector<BigInt>{0, 1}));

  const auto one = relation_lattice(polys({"sqrt2*t", "sqrt2*t/2"}));
  ASSERT_EQ(one.rank(), 1u);
  EXPECT_EQ(one.basis[0], (std::vector<BigInt>{1, -2}));
}

TEST(RelationLattice, TrivialLatticeHasNoSmallRelations) {
  const auto P = polys({"sqrt2*t", "sqrt2*t^2"});
  for (long a = -5; a <= 5; ++a) {
    for (long b = -5; b <= 5; ++b) {
      if (a == 0 && b == 0) continue;
      EXPECT_FALSE(relation_witness(P, {a, b})) << a << "," << b;
    }
  }
}

TEST(RelationLattice, BasisPassesWitnessCheck) {
  const std::vector<std::vector<SymbolicPoly>> families{
      polys({"sqrt2*t + pi*t^2", "2*sqrt2*t", "phi*t^3", "pi*t/5"}),
      polys({"sqrt2*t", "sqrt2*t/2", "pi*t"}),
      polys({"e*t^2 + sqrt2*t", "e*t^2", "sqrt2*t + pi*t"}),
  };
  for (const auto& P : families) {
    const auto L = relation_lattice(P);
    for (std::size_t i = 0; i < L.rank(); ++i) {
      const auto w = relation_witness(P, L.basis[i]);
      ASSERT_TRUE(w);
      EXPECT_EQ(*w, L.witnesses[i]);
    }
  }
  EXPECT_EQ(relation_lattice(families[2]).rank(), 1u);
}

TEST(ClosureModel, Examples) {
  const auto single = closure_model(polys({"sqrt2*t"}));
  EXPECT_TRUE(single.full_torus());
  EXPECT_EQ(single.p(), 1u);

  const auto pair = closure_model(polys({"sqrt2*t", "2*sqrt2*t"}));
  ASSERT_EQ(pair.relations.size(), 1u);
  EXPECT_EQ(pair.relations[0].m, 1);
  EXPECT_EQ(pair.relations[0].a, std::vector<BigInt>{2});
  EXPECT_TRUE(pair.contains({Turn::exact(BigRational(1, 10)), Turn::exact(BigRational(1, 5))}, BigRational(1, 1000)));
  EXPECT_FALSE(pair.contains({Turn::exact(BigRational(1, 10)), Turn::exact(BigRational(1, 2))}, BigRational(1, 1000)));

  const auto finite = closure_model(polys({"pi*t/2"}));
  EXPECT_EQ(finite.p(), 0u);
  std::set<BigRational> pts;
  for (const auto& tuple : finite.finite_points()) pts.insert(tuple.at(0));
  EXPECT_EQ(pts, (std::set<BigRational>{0, BigRational(1, 4), BigRational(1, 2), BigRational(3, 4)}));
}

TEST(ClosureModel, SampledOrbitLiesOnSubtorus) {
  const auto P = polys({"sqrt2*t", "2*sqrt2*t"});
  const auto model = closure_model(P);
  const auto s1 = sample_phases(PhaseSeq::polynomial(P[0]), 500);
  const auto s2 = sample_phases(PhaseSeq::polynomial(P[1]), 500);
  for (std::size_t i = 0; i < 500; ++i) {
    ASSERT_TRUE(model.contains({s1.points[i], s2.points[i]}, BigRational(1, 1000000))) << i;
  }
}

TEST(ClosureModel, ConjugationInvariant) {
  const auto model = closure_model(polys({"sqrt2*t", "sqrt2*t/2 + pi*t/3"}));
  const std::vector<Turn> pt{Turn::exact(BigRational(1, 3)), Turn::exact(BigRational(1, 6) + BigRational(1, 6))};
  const bool in = model.contains(pt, BigRational(1, 1000));
  const bool in_conj = model.contains({pt[0].negated(), pt[1].negated()}, BigRational(1, 1000));
  EXPECT_EQ(in, in_conj);
}

TEST(Koksma, ForcedRationalTheta) {
  KoksmaSequence f;
  f.kind = KoksmaKind::Expression;
  f.expr = RealExpr::parse("n");
  KoksmaOptions opt;
  opt.samples = 1;
  opt.N = 100;
  opt.forced_theta = BigRational(1, 2);
  const auto rep = koksma_sample(f, opt);
  ASSERT_EQ(rep.samples.size(), 1u);
  EXPECT_EQ(*rep.samples[0].report.exact, BigRational(1, 2));
}

TEST(Koksma, DeterministicUnderSeed) {
  KoksmaSequence f;
  KoksmaOptions opt;
  opt.samples = 3;
  opt.N = 500;
  opt.seed = 99;
  const auto a = koksma_sample(f, opt);
  opt.threads = 3;
  const auto b = koksma_sample(f, opt);
  ASSERT_EQ(a.samples.size(), b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    EXPECT_EQ(a.samples[i].theta_tag, b.samples[i].theta_tag);
    EXPECT_EQ(a.samples[i].report.dstar.hi().compare(b.samples[i].report.dstar.hi()), 0);
  }
}

TEST(Koksma, SeparationHypothesisChecked) {
  KoksmaSequence f;
  f.kind = KoksmaKind::Expression;
  f.expr = RealExpr::parse("(n-3)^2");
  KoksmaOptions opt;
  opt.samples = 1;
  opt.N = 10;
  EXPECT_THROW(koksma_sample(f, opt), RuleViolation);
}

#include <gtest/gtest.h>

#include <random>

#include "orbitlab/constructions.hpp"
#include "orbitlab/space.hpp"
#include "support/oracles.hpp"

using namespace orbitlab;

namespace {

GaussianRational gq(long re, long im = 0) { return {BigRational(re), BigRational(im)}; }

BlockVector single_block(std::uint64_t offset, const FiniteVector& v) {
  BlockVector x;
  x.add_block(BigInt(static_cast<unsigned long>(offset)), pow2(-static_cast<long>(offset)), v);
  return x;
}

}  // namespace

TEST(GaussianRational, ParseAndPrint) {
  const auto z = GaussianRational::parse("1/2+3/4 i");
  EXPECT_EQ(z.re, BigRational(1, 2));
  EXPECT_EQ(z.im, BigRational(3, 4));
  EXPECT_EQ(GaussianRational::parse("-i"), gq(0, -1));
  EXPECT_EQ(GaussianRational::parse("2i"), gq(0, 2));
  EXPECT_EQ(GaussianRational::parse(z.to_string()), z);
  EXPECT_THROW(GaussianRational::parse("1+"), ParseError);
}

TEST(OrbitCoord, Examples) {
  const auto T = WeightedShift::constant(2);
  EXPECT_EQ(orbit_coord(T, FiniteVector::basis(5), 3, 2), gq(8));
  const auto y = FiniteVector::from_coords({gq(1), gq(0, 2), gq(3)});
  for (std::uint64_t k = 0; k < 5; ++k) EXPECT_EQ(orbit_coord(WeightedShift::periodic({3, 5}), y, 0, k), y.at(k));
  const auto x = single_block(4, FiniteVector::basis(0) + FiniteVector::basis(1));
  EXPECT_EQ(orbit_coord(T, x, 4, 0), gq(1));
}

TEST(OrbitWindow, Examples) {
  const auto T = WeightedShift::constant(2);
  const auto w = orbit_window(T, BlockVector::from_finite(FiniteVector::basis(5)), 5, 2);
  ASSERT_EQ(w.size(), 3u);
  EXPECT_EQ(w[0], gq(32));
  EXPECT_TRUE(w[1].is_zero());
  EXPECT_TRUE(w[2].is_zero());

  const auto v = FiniteVector::from_coords({gq(1), gq(2)});
  const auto w0 = orbit_window(T, BlockVector::from_finite(v), 0, 6);
  ASSERT_EQ(w0.size(), 7u);
  EXPECT_EQ(w0[1], gq(2));
  EXPECT_TRUE(w0[6].is_zero());
}

TEST(OrbitWindow, HcVectorRecoversBlocks) {
  const Bundle b = prop53_assemble(200);
  ASSERT_TRUE(b.blocks);
  for (std::uint64_t k = 1; k <= 5; ++k) {
    const std::uint64_t nk = b.blocks->offsets(k).get_ui();
    const auto w = orbit_window(b.T, b.x, nk, k);
    const auto xk = dense_family(b.blocks->family, k);
    for (std::uint64_t i = 0; i <= k; ++i) EXPECT_EQ(w[i], xk.at(i)) << "k=" << k << " i=" << i;
  }
}

TEST(OrbitWindow, MatchesMaterializedShift) {
  std::mt19937_64 rng(3);
  const std::vector<WeightedShift> shifts{WeightedShift::constant(2), WeightedShift::periodic({1, BigRational(3, 2), 2}),
                                          WeightedShift::closed_form("1 + 1/k", BigRational(2))};
  for (int trial = 0; trial < 200; ++trial) {
    const auto& T = shifts[trial % shifts.size()];
    std::vector<GaussianRational> dense(31);
    FiniteVector x;
    for (std::uint64_t k = 0; k <= 30; ++k) {
      if (rng() % 3 != 0) continue;
      dense[k] = {BigRational(static_cast<long>(rng() % 21) - 10, static_cast<long>(rng() % 5 + 1)),
                  BigRational(static_cast<long>(rng() % 7) - 3)};
      x.set(k, dense[k]);
    }
    std::vector<BigRational> weights;
    for (std::uint64_t k = 1; k <= 31; ++k) weights.push_back(T.weight(k));
    const std::uint64_t n = rng() % 21;
    const auto ref = oracle::materialized_orbit(weights, dense, n);
    const auto got = orbit_window(T, BlockVector::from_finite(x), n, 30);
    for (std::size_t k = 0; k <= 30; ++k) ASSERT_EQ(got[k], ref[k]) << "trial " << trial << " k=" << k;
  }
}

TEST(TailNormBound, Examples) {
  const auto T = WeightedShift::constant(2);
  EXPECT_EQ(tail_norm_bound(T, BlockVector::from_finite(FiniteVector::basis(5)), 3, 10), 0);

  FiniteVector blk = FiniteVector::from_coords({gq(1), gq(0, 2)});
  const auto x = single_block(100, blk);
  EXPECT_EQ(tail_norm_bound(T, x, 0, 10), pow2(-200) * blk.norm2());
}

TEST(TailNormBound, HcVectorMajorant) {
  const Bundle b = prop53_assemble(200);
  // Block 3 sits at 27 with support width <= 3; after n_2 = 8 steps it ends by 22.
  const BigRational bound = tail_norm_bound(b.T, b.x, 8, 22);
  BigRational hand = 0;
  for (long j = 4; j <= 13; ++j) hand += BigRational(j * j) * pow2(-2 * (j * j * j - 8));
  EXPECT_GE(bound, 0);
  EXPECT_LE(bound, hand * BigRational(101, 100));
  BigRational exact_block4 = dense_family(b.blocks->family, 4).norm2() * pow2(-2 * (64 - 8));
  EXPECT_GE(bound, exact_block4);
}

TEST(TailNormBound, MonotoneInWindow) {
  const Bundle b = prop53_assemble(200);
  for (std::uint64_t n : {1u, 8u, 27u, 40u}) {
    BigRational prev = tail_norm_bound(b.T, b.x, n, 0);
    for (std::uint64_t K = 1; K <= 120; ++K) {
      const BigRational cur = tail_norm_bound(b.T, b.x, n, K);
      ASSERT_LE(cur, prev) << "n=" << n << " K=" << K;
      prev = cur;
    }
  }
}

TEST(TailNormBound, UnboundedLazyTailThrows) {
  BlockVector x;
  LazyBlocks rule;
  rule.offset = [](std::uint64_t j) { return BigInt(static_cast<unsigned long>(j * j)); };
  rule.block = [](std::uint64_t) { return FiniteVector::basis(0); };
  rule.width = [](std::uint64_t) { return BigInt(0); };
  x.set_lazy(rule);
  EXPECT_THROW(tail_norm_bound(WeightedShift::constant(2), x, 0, 3), DomainError);
}

TEST(CertifiedDistance, Examples) {
  const auto T = WeightedShift::constant(2);
  const auto one = unit_eval(Turn::exact(0), 64);
  const auto d = certified_distance(T, BlockVector::from_finite(FiniteVector::basis(5)), 5, one, FiniteVector::basis(0), 5);
  EXPECT_TRUE(d.is_point());
  EXPECT_TRUE(d.contains(BigRational(31)));

  const auto minus = unit_eval(Turn::exact(BigRational(1, 2)), 64);
  const auto d2 = certified_distance(T, BlockVector::from_finite(FiniteVector::basis(0)), 0, minus,
                                     FiniteVector::basis(0), 0);
  EXPECT_TRUE(d2.contains(BigRational(2)));
  EXPECT_TRUE(d2.is_point());
}

TEST(CertifiedDistance, ContainsMaterializedDistance) {
  std::mt19937_64 rng(23);
  const auto T = WeightedShift::periodic({2, BigRational(1, 2), 3});
  std::vector<BigRational> weights;
  for (std::uint64_t k = 1; k <= 41; ++k) weights.push_back(T.weight(k));
  const std::vector<std::pair<BigRational, GaussianRational>> phases{
      {0, gq(1)}, {BigRational(1, 4), gq(0, 1)}, {BigRational(1, 2), gq(-1)}, {BigRational(3, 4), gq(0, -1)}};
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<GaussianRational> dense(41);
    FiniteVector x, y;
    for (std::uint64_t k = 0; k <= 20; ++k) {
      if (rng() % 2) {
        dense[k] = {BigRational(static_cast<long>(rng() % 9) - 4, static_cast<long>(rng() % 3 + 1)),
                    BigRational(static_cast<long>(rng() % 5) - 2)};
        x.set(k, dense[k]);
      }
      if (rng() % 4 == 0) y.set(k, {BigRational(static_cast<long>(rng() % 7) - 3), BigRational(0)});
    }
    const std::uint64_t n = rng() % 12;
    const auto& [turn, lambda] = phases[rng() % phases.size()];
    const auto orbit = oracle::materialized_orbit(weights, dense, n);
    BigRational d2 = 0;
    for (std::uint64_t k = 0; k <= 40; ++k) d2 += (lambda * orbit[k] - y.at(k)).norm2();
    const std::uint64_t K = rng() % 25;
    const auto enc = certified_distance(T, BlockVector::from_finite(x), n, unit_eval(Turn::exact(turn), 96), y,
                                        std::max<std::uint64_t>(K, y.max_index().value_or(0)));
    ASSERT_TRUE(square(enc).contains(d2)) << "trial " << trial;
  }
}

TEST(ChordalDistance, HalfTurnIsTwo) {
  const auto d = chordal_distance(Turn::exact(0), Turn::exact(BigRational(1, 2)), 64);
  EXPECT_TRUE(d.contains(BigRational(2)));
  const auto q = chordal_distance(Turn::exact(BigRational(1, 8)), Turn::exact(BigRational(7, 8)), 64);
  EXPECT_NEAR(q.mid_double(), std::sqrt(2.0), 1e-15);
}

TEST(ProductDistance, UsesMax) {
  const auto vd = RealInterval::exact(BigRational(1, 10), 64);
  const auto d = product_distance(vd, {Turn::exact(BigRational(1, 2))}, {Turn::exact(0)}, 64);
  EXPECT_TRUE(d.contains(BigRational(2)));
}

TEST(SqrtBounds, Bracket) {
  for (long q : {2L, 3L, 10L, 1000003L}) {
    EXPECT_LE(sqrt_lower(q) * sqrt_lower(q), BigRational(q));
    EXPECT_GE(sqrt_upper(q) * sqrt_upper(q), BigRational(q));
  }
  EXPECT_EQ(sqrt_lower(BigRational(9, 4)), BigRational(3, 2));
}

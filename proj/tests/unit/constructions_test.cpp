#include <gtest/gtest.h>

#include "orbitlab/constructions.hpp"
#include "orbitlab/serialization.hpp"
#include "support/oracles.hpp"

using namespace orbitlab;

namespace {

std::function<BigInt(std::uint64_t)> cubes() {
  return [](std::uint64_t k) { return BigInt(static_cast<unsigned long>(k * k * k)); };
}

}  // namespace

TEST(Heights, Definitions) {
  EXPECT_EQ(rational_height(BigRational(-3, 7)), 7);
  EXPECT_EQ(rational_height(BigRational(9, 2)), 9);
  EXPECT_EQ(rational_height(0), 0);
  FiniteVector v;
  v.set(4, {BigRational(1, 2), BigRational(0)});
  EXPECT_EQ(vector_height(v), 4);
  EXPECT_EQ(vector_height(FiniteVector{}), 0);
}

TEST(HeightEnumeration, MatchesDefinitionUpToHeightTwo) {
  const auto ref = oracle::height_enumeration_upto(2);
  ASSERT_EQ(ref.size(), 117649u);  // |R_2|^{2*3} = 7^6
  for (std::size_t i = 0; i < ref.size(); i += (i < 200 ? 1 : 37)) {
    const BigInt k = static_cast<unsigned long>(i + 1);
    ASSERT_EQ(height_enumeration(k), ref[i]) << "k=" << i + 1;
    ASSERT_EQ(height_rank(ref[i]), k);
    ASSERT_EQ(height_of_index(k), vector_height(ref[i]).get_ui());
  }
}

TEST(HeightEnumeration, RankRoundTripAtLargeIndices) {
  for (unsigned long k : {117650ul, 200000ul, 5000000ul, 123456789ul}) {
    const auto v = height_enumeration(k);
    EXPECT_EQ(height_rank(v), k);
  }
}

TEST(DenseFamily, LocateExamples) {
  const auto spec = DenseFamilySpec::standard();
  const auto zero_at = dense_family_locate(spec, FiniteVector{}, BigRational(1, 100));
  ASSERT_TRUE(zero_at);
  EXPECT_LE(*zero_at, 2);
  const auto e0_at = dense_family_locate(spec, FiniteVector::basis(0), 0);
  ASSERT_TRUE(e0_at);
  EXPECT_EQ(*e0_at, 55);
  EXPECT_EQ(dense_family(spec, 55), FiniteVector::basis(0));
}

TEST(DenseFamily, RulesHold) {
  const auto spec = DenseFamilySpec::standard();
  for (std::uint64_t k = 1; k <= 3000; ++k) {
    const auto xk = dense_family(spec, k);
    ASSERT_LE(xk.norm2(), BigRational(static_cast<long>(k * k))) << k;
    if (!xk.is_zero()) {
      ASSERT_LE(*xk.max_index(), k) << k;
    }
  }
}

TEST(DenseFamily, StableAcrossCalls) {
  const auto spec = DenseFamilySpec::standard();
  for (std::uint64_t k = 1; k <= 500; k += 7) EXPECT_EQ(dense_family(spec, k), dense_family(spec, k));
}

TEST(HcBlockVector, ApproachBounds) {
  const auto hc = hc_block_vector(cubes(), "k^3", DenseFamilySpec::standard());
  EXPECT_LT(hc.approach_bound(2), BigRational(3) * pow2(-19) * BigRational(101, 100));
  BigRational two_terms = BigRational(3) * pow2(-(27 - 8)) + BigRational(4) * pow2(-(64 - 8));
  EXPECT_GE(hc.approach_bound(2), two_terms);
  EXPECT_EQ(spacing_majorant(3), BigRational(5, 8));

  const auto T = WeightedShift::constant(2);
  const auto one = unit_eval(Turn::exact(0), 128);
  for (std::uint64_t k = 1; k <= 10; ++k) {
    const std::uint64_t nk = k * k * k;
    const auto xk = dense_family(hc.family, k);
    // Window through the end of block k+1, so only blocks k+2, ... enter the tail bound.
    const std::uint64_t K = (k + 1) * (k + 1) * (k + 1) + k + 1 - nk;
    const auto d = certified_distance(T, hc.x, nk, one, xk, K);
    EXPECT_TRUE(d.hi().compare(hc.approach_bound(k)) <= 0) << k;
  }
}

TEST(HcBlockVector, SingleBlockDegenerate) {
  BlockVector x;
  const auto x1 = FiniteVector::from_coords({{BigRational(1, 3), BigRational(2)}, {BigRational(-1), BigRational(0)}});
  x.add_block(9, pow2(-9), x1);
  const auto w = orbit_window(WeightedShift::constant(2), x, 9, 3);
  EXPECT_EQ(w[0], x1.at(0));
  EXPECT_EQ(w[1], x1.at(1));
  EXPECT_TRUE(tail_norm_bound(WeightedShift::constant(2), x, 9, 3) == 0);
}

TEST(HcBlockVector, SpacingViolation) {
  EXPECT_THROW(hc_block_vector([](std::uint64_t k) { return BigInt(static_cast<unsigned long>(2 * k)); }, "2k",
                               DenseFamilySpec::standard()),
               RuleViolation);
}

TEST(Example44, Endpoints) {
  const auto [a1, b1] = example44_endpoints(1);
  EXPECT_EQ(a1, 112);
  EXPECT_EQ(b1, 2575);
  const auto [a0, b0] = example44_endpoints(0);
  EXPECT_EQ(a0, 1);
  EXPECT_EQ(b0, 4);
  for (long k = 0; k <= 4; ++k) {
    const auto [a, b] = example44_endpoints(static_cast<std::uint64_t>(k));
    const auto [ra, rb] = oracle::example_endpoints(k);
    EXPECT_EQ(a, ra) << k;
    EXPECT_EQ(b, rb) << k;
  }
}

TEST(Example44, FirstBlockStartsAtB1) {
  const Bundle b = example44_assemble(3000);
  for (std::uint64_t n = 0; n < 2575; ++n) ASSERT_TRUE(orbit_coord(b.T, b.x, n, 0).is_zero()) << n;
  EXPECT_EQ(b.delta, BigRational(99, 100));
  ASSERT_EQ(b.forbidden.torus.size(), 1u);
}

TEST(Prop53, PatchSet) {
  std::vector<std::uint64_t> got;
  for (std::uint64_t n = 1; n <= 30; ++n) {
    if (in_patch(cubes(), n)) got.push_back(n);
  }
  EXPECT_EQ(got, (std::vector<std::uint64_t>{1, 2, 8, 9, 10, 27, 28, 29, 30}));
}

TEST(Prop53, ZeroCoordinateOffPatches) {
  const Bundle b = prop53_assemble(3000);
  for (std::uint64_t n = 1; n <= 3000; ++n) {
    if (in_patch(b.patch_offsets, n)) continue;
    ASSERT_TRUE(orbit_coord(b.T, b.x, n, 0).is_zero()) << n;
  }
}

TEST(Prop53, OnPatchProductIsNonnegative) {
  const Bundle b = prop53_assemble(3000);
  for (std::uint64_t n = 1; n <= 3000; ++n) {
    if (!in_patch(b.patch_offsets, n)) continue;
    const auto c = orbit_coord(b.T, b.x, n, 0);
    const auto pv = phase_value(b.phase, n, 64);
    ASSERT_TRUE(pv.direction) << n;
    const auto prod = *pv.direction * c;
    ASSERT_EQ(prod.im, 0);
    ASSERT_GE(prod.re, 0);
  }
}

TEST(Prop53, GrowthRulesChecked) {
  const auto g = PhaseSeq::slow_growth("n*phi", false);
  EXPECT_THROW(prop53_assemble(g, [](std::uint64_t k) { return BigInt(static_cast<unsigned long>(k * k)); }, "k^2", 100),
               RuleViolation);
  EXPECT_THROW(prop53_assemble(g, [](std::uint64_t k) { return BigInt(static_cast<unsigned long>(3 * k)); }, "3k", 100),
               RuleViolation);
}

TEST(Prop41, MinimalTargetIndexAndGrowth) {
  const Bundle b = prop41_assemble({1, 2}, std::nullopt, 200);
  EXPECT_EQ(b.N, 2u);
  EXPECT_EQ(b.delta, BigRational(49, 100));
  EXPECT_EQ(b.forbidden.vector, FiniteVector::basis(2));
  const Bundle b3 = prop41_assemble({1, 3}, std::nullopt, 200);
  EXPECT_EQ(b3.N, 1u);
  EXPECT_THROW(prop41_assemble({1, 1}, std::nullopt, 10), RuleViolation);
  EXPECT_THROW(prop41_assemble({0, 2}, std::nullopt, 10), RuleViolation);
}

TEST(Prop41, MembersAreSpacedAndRecheckPasses) {
  const Bundle b = prop41_assemble({1, 2}, std::nullopt, 3000);
  ASSERT_TRUE(b.adversarial);
  const auto& ph = *b.adversarial;
  EXPECT_TRUE(recheck_adversarial(b.T, b.x, ph).ok());
  std::vector<std::uint64_t> all = ph.members;
  all.insert(all.end(), ph.undecided.begin(), ph.undecided.end());
  std::sort(all.begin(), all.end());
  for (std::size_t i = 1; i < all.size(); ++i) EXPECT_GT(all[i] - all[i - 1], b.N);
  for (std::uint64_t n = 0; n <= ph.horizon; ++n) {
    if (!ph.in_A(n)) EXPECT_EQ(ph.alphas[n], 0) << n;
  }
}

TEST(Bundles, ReplayFromDescriptor) {
  for (const std::string name : {"prop41", "example44", "prop53"}) {
    const Bundle b = assemble_bundle(name, 400);
    const Json d = to_json(b);
    const Bundle again = bundle_from_json(d);
    EXPECT_EQ(to_json(again), d) << name;
    if (b.adversarial) EXPECT_EQ(again.adversarial->alphas, b.adversarial->alphas);
    const auto c1 = b.certify();
    const auto c2 = again.certify();
    EXPECT_EQ(to_json(c1), to_json(c2)) << name;
  }
}

TEST(Serialization, DescriptorsRoundTrip) {
  const std::vector<std::string> phases{
      R"j({"kind":"constant","turn":"1/2"})j",
      R"j({"kind":"polynomial","poly":"sqrt2*t^2"})j",
      R"j({"kind":"polynomial","coeffs":[{"pi":"1/2"}]})j",
      R"j({"kind":"slow_growth","expr":"log(n)","radians":true})j",
      R"j({"kind":"geometric","c":1,"base":2,"theta":"stream:seed=7"})j",
      R"j({"kind":"geometric","c":1,"base":2,"theta":"5/8"})j",
      R"j({"kind":"explicit","start":1,"turns":["1/2","1/4"]})j",
  };
  for (const auto& text : phases) {
    const auto p = phase_from_json(Json::parse(text));
    const auto again = phase_from_json(to_json(p));
    for (std::uint64_t n = 1; n <= 2; ++n) {
      EXPECT_EQ(phase_eval(p, n, 96).as_interval(96).to_string(), phase_eval(again, n, 96).as_interval(96).to_string())
          << text;
    }
  }
  EXPECT_EQ(phase_eval(phase_from_json(Json::parse(phases[2])), 3, 64).exact_value(), BigRational(3, 4));
  EXPECT_THROW(phase_from_json(Json::parse(R"j({"kind":"constant","turn":"1/2","extra":1})j")), ParseError);

  const auto T = shift_from_json(Json::parse(R"j({"periodic":["1","3/2"]})j"));
  EXPECT_EQ(T.weight(2), BigRational(3, 2));
  EXPECT_EQ(shift_from_json(to_json(T)).weight(4), BigRational(3, 2));
  EXPECT_EQ(shift_from_json(Json("2B")).weight(9), 2);

  const auto v = finite_vector_from_json(Json::parse(R"j({"coords":{"0":"1/2+3/4 i","3":"-2"}})j"));
  EXPECT_EQ(finite_vector_from_json(to_json(v)), v);
  const auto pt = point_from_json(Json::parse(R"j({"vector":{"coords":{"2":"1"}},"torus":["1/3"]})j"));
  EXPECT_EQ(pt.vector, FiniteVector::basis(2));
  EXPECT_EQ(point_from_json(to_json(pt)).torus.at(0), Turn::exact(BigRational(1, 3)));

  const auto blocks = block_vector_from_json(
      Json::parse(R"j({"blocks":[{"offset":5,"scale":"1/32","coords":{"0":"1"}}]})j"));
  EXPECT_EQ(orbit_coord(WeightedShift::constant(2), blocks, 5, 0), GaussianRational(BigRational(1)));
}

#pragma once

// Builders for dense families, standard hypercyclic block vectors for 2B and
// the three counterexample bundles.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orbitlab/density.hpp"
#include "orbitlab/phases.hpp"
#include "orbitlab/space.hpp"

namespace orbitlab {

// Height of a rational p/q in lowest terms is max(|p|, q), with height 0 for 0.
// Height of a vector is the max of its support end and the heights of the real
// and imaginary parts of its coordinates. The raw enumeration lists vectors by
// height; within height h a vector is the tuple (c_0, ..., c_h) over the
// Gaussian rationals of height <= h, compared lexicographically with c_0 most
// significant. Rationals of one height are ordered by value, Gaussian
// rationals by (height, index of re, index of im), so every class of lower
// height is a prefix.

/// Height of a rational.
BigInt rational_height(const BigRational& q);
/// Height of a vector; 0 for the zero vector.
BigInt vector_height(const FiniteVector& v);

/// The k-th vector of the raw height enumeration, k >= 1 (v_1 = 0).
FiniteVector height_enumeration(const BigInt& k);
/// Inverse of height_enumeration.
BigInt height_rank(const FiniteVector& v);
/// Height of the k-th raw vector, without decoding it.
std::uint64_t height_of_index(const BigInt& k);

struct DenseFamilySpec {
  /// s_k: largest support index allowed for x_k.
  std::function<BigInt(std::uint64_t)> support;
  /// r_k: ||x_k|| <= r_k.
  std::function<BigRational(std::uint64_t)> norm;
  std::string support_rule = "k";
  std::string norm_rule = "k";
  std::string order = "height-lex";

  /// s_k = k, ||x_k|| <= k.
  static DenseFamilySpec standard();
  /// ||x_k|| <= k with a custom support rule.
  static DenseFamilySpec with_support(std::function<BigInt(std::uint64_t)> s, std::string description);
};

/// x_k: the raw vector v_k, replaced by 0 when its support exceeds s_k and
/// scaled by the smallest power 2^{-e} that meets the norm rule.
FiniteVector dense_family(const DenseFamilySpec& spec, std::uint64_t k);

/// Smallest k <= limit with ||x_k - v|| < eps (x_k = v when eps = 0). Also
/// tries the rank of v when it exceeds the limit.
std::optional<BigInt> dense_family_locate(const DenseFamilySpec& spec, const FiniteVector& v,
                                          const BigRational& eps, std::uint64_t limit = 1000000);

/// x = sum_{j >= 1} 2^{-n_j} S^{n_j} x_j for T = 2B.
struct HcBlockVector {
  BlockVector x;
  DenseFamilySpec family;
  std::function<BigInt(std::uint64_t)> offsets;
  std::string offset_rule;

  /// Exact majorant of ||T^{n_k} x - x_k|| <= sum_{j>k} j 2^{-(n_j - n_k)}.
  BigRational approach_bound(std::uint64_t k) const;
};

/// Builds the block vector; checks n_{k+1} > n_k + s_k for k <= checked.
/// Throws RuleViolation ("spacing-violation") otherwise.
HcBlockVector hc_block_vector(std::function<BigInt(std::uint64_t)> offsets, std::string offset_rule,
                              const DenseFamilySpec& family, std::uint64_t checked = 2000);

/// sum_{j>k} j 2^{-j} = (k + 2) / 2^k, the bound under the spacing n_j - n_k >= j.
BigRational spacing_majorant(std::uint64_t k);

struct Bundle {
  std::string name;
  WeightedShift T = WeightedShift::constant(2);
  BlockVector x;
  PhaseSeq phase;
  std::vector<PhaseSeq> torus;
  ProductPoint forbidden;
  BigRational delta;
  std::uint64_t N = 0;
  std::uint64_t horizon = 0;
  std::map<std::string, std::string> provenance;
  std::optional<HcBlockVector> blocks;
  std::optional<AdversarialPhase> adversarial;
  /// Block offsets n_k for the patched construction.
  std::function<BigInt(std::uint64_t)> patch_offsets;

  OrbitSetup setup() const { return {T, x, phase, torus}; }
  AvoidanceCertificate certify(const AvoidOptions& opt = {}) const;
};

/// Certified integer endpoints a_k = ceil(exp(2k pi - pi/2)), b_k = floor(exp(2k pi + pi/2)).
std::pair<BigInt, BigInt> example44_endpoints(std::uint64_t k);

/// Blocks x_j at offsets b_{j^2} with support in [0, a_{j+1} - b_j - 1], the
/// torus phase log n in radians and the forbidden point (e_0, 1).
Bundle example44_assemble(std::uint64_t horizon);

/// n in [n_k, n_k + k] for some k >= 1.
bool in_patch(const std::function<BigInt(std::uint64_t)>& offsets, std::uint64_t n);

/// Patched phase f = g off the windows [n_k, n_k + k] and the argument of
/// conj((T^n x)_0) on them (0 when the coordinate vanishes); forbidden point -e_0.
Bundle prop53_assemble(const PhaseSeq& g, std::function<BigInt(std::uint64_t)> offsets, std::string offset_rule,
                       std::uint64_t horizon);
/// g(n) = n phi (phi the golden ratio), n_k = k^3.
Bundle prop53_assemble(std::uint64_t horizon);

/// T = 2B, f(n) = c a^n, x with n_k = k^2, adversarial theta, forbidden e_N, delta = 0.49.
Bundle prop41_assemble(const GeometricDescriptor& f, std::optional<std::uint64_t> N, std::uint64_t horizon);

}  // namespace orbitlab

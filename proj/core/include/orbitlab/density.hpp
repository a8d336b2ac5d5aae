#pragma once

// Hit searches along rotated orbits, finite-horizon avoidance certificates,
// lower-density curves and the shifted-union set transform.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "orbitlab/numerics.hpp"
#include "orbitlab/phases.hpp"
#include "orbitlab/space.hpp"

namespace orbitlab {

/// The rotated orbit n -> (lambda_n T^n x, e^{2 pi i t_1(n)}, ..., e^{2 pi i t_r(n)}).
struct OrbitSetup {
  WeightedShift T = WeightedShift::unweighted();
  BlockVector x;
  PhaseSeq phase;
  std::vector<PhaseSeq> torus;
};

/// Enclosure of the product distance (max metric) at n, together with the
/// vector phase used.
struct OrbitDistance {
  RealInterval distance;
  RealInterval vector_distance;
  Turn phase_turn;
};

/// Certified max(||lambda_n T^n x - y||, chordal distances) at step n. The
/// window is widened automatically so whole blocks are read exactly.
OrbitDistance orbit_distance(const OrbitSetup& s, std::uint64_t n, const ProductPoint& target, std::uint64_t K,
                             unsigned precision);

struct HitEntry {
  std::uint64_t n = 0;
  RealInterval distance;
};

struct HitReport {
  ProductPoint target;
  BigRational epsilon;
  std::uint64_t horizon = 0;
  unsigned precision = 0;
  /// Steps whose distance upper endpoint is below epsilon.
  std::vector<HitEntry> hits;
  /// Smallest certified upper endpoint seen.
  std::optional<HitEntry> best;
  /// Steps where the distance could not be enclosed.
  std::vector<std::uint64_t> indeterminate;
  /// Hits the doubled-precision recheck failed to confirm (dropped from `hits`).
  std::vector<std::uint64_t> contradictions;
};

struct HitOptions {
  std::uint64_t window = 0;
  unsigned precision = default_precision();
  bool recheck = true;
  unsigned threads = 1;
};

HitReport hit_search(const OrbitSetup& s, const ProductPoint& target, const BigRational& epsilon,
                     std::uint64_t horizon, const HitOptions& opt = {});

enum class AvoidRule { Torus, ZeroCoordinate, Sign, Distance };
std::string to_string(AvoidRule r);

struct AvoidRow {
  std::uint64_t n = 0;
  AvoidRule rule = AvoidRule::Distance;
  /// Distance enclosure; rule rows carry their lower bound and an infinite upper endpoint.
  RealInterval distance;
  Turn phase_turn;
  std::optional<bool> in_A;
};

enum class AvoidStatus { Certified, Failed, Indeterminate };
std::string to_string(AvoidStatus s);

struct AvoidanceCertificate {
  ProductPoint forbidden;
  BigRational delta;
  std::uint64_t horizon = 0;
  AvoidStatus status = AvoidStatus::Certified;
  /// The first step that is not certified, with its enclosure.
  std::optional<AvoidRow> failure;
  std::vector<AvoidRow> rows;
  unsigned precision_retries = 0;

  std::size_t count(AvoidRule r) const;
};

struct AvoidOptions {
  unsigned precision = default_precision();
  /// Extra doublings tried on a row whose enclosure straddles delta.
  unsigned max_retries = 3;
  unsigned threads = 1;
  /// Optional annotation for the CSV (e.g. membership in the adversarial set).
  std::function<bool(std::uint64_t)> in_A;
};

/// Checks n = 1..horizon, trying in order: torus chordal bound, zero
/// coordinates of the orbit on the support of y, exact or certified signs
/// Re(lambda_n (T^n x)_k conj(y_k)) <= 0, and finally the full distance.
AvoidanceCertificate avoid_certify(const OrbitSetup& s, const ProductPoint& forbidden, const BigRational& delta,
                                   std::uint64_t horizon, const AvoidOptions& opt = {});

struct DensityCurve {
  std::uint64_t N = 0;
  /// curve[n - 1] = card(A cap [1, n]) / n.
  std::vector<BigRational> curve;
  /// suffix_min[n - 1] = min_{n <= m <= N} curve[m - 1].
  std::vector<BigRational> suffix_min;

  /// Suffix minimum from ceil(N / 2): the finite-horizon proxy for the lower density.
  BigRational lower_density_proxy() const;
};

/// A must be a subset of [1, N]; duplicates are ignored.
DensityCurve lower_density_curve(const std::vector<std::uint64_t>& A, std::uint64_t N);

/// {n >= lo, n <= hi (when set), n = residue mod modulus}.
struct IndexClass {
  std::uint64_t modulus = 1;
  std::uint64_t residue = 0;
  std::uint64_t lo = 1;
  std::optional<std::uint64_t> hi;

  bool contains(std::uint64_t n) const;
};

struct ShiftPart {
  std::uint64_t shift = 0;
  IndexClass indices;
};

struct ShiftedUnionReport {
  std::uint64_t N = 0;
  /// B cap [1, N + max shift], sorted.
  std::vector<std::uint64_t> B;
  DensityCurve density_A;
  DensityCurve density_B;
};

/// B = union_j (n_j + (A cap I_j)). Throws RuleViolation when the I_j miss
/// some n in [1, N].
ShiftedUnionReport shifted_union(const std::vector<std::uint64_t>& A, std::uint64_t N,
                                 const std::vector<ShiftPart>& parts);

struct RandomRotationReport {
  std::uint64_t seed = 0;
  std::uint64_t horizon = 0;
  BigRational epsilon;
  /// hits[i] = number of certified hits of sample i.
  std::vector<std::size_t> hits;
  std::vector<std::optional<HitEntry>> best;
  /// Fraction of samples with at least one hit.
  double hit_rate = 0;
  std::string metric_note;
};

/// i.i.d. uniform phases lambda_n = e^{2 pi i u / 2^64} from substream
/// splitmix64(seed + i) of sample i.
PhaseSeq random_rotation(std::uint64_t seed, std::uint64_t horizon);

RandomRotationReport random_rotation_experiment(const WeightedShift& T, const BlockVector& x,
                                                const ProductPoint& target, const BigRational& epsilon,
                                                std::uint64_t horizon, std::size_t samples, std::uint64_t seed,
                                                const HitOptions& opt = {});

}  // namespace orbitlab

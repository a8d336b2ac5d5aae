#pragma once

// Uniform distribution modulo one: star discrepancy, Weyl sums, the integer
// lattice of pi*Q[t] relations among polynomials, the closure of polynomial
// torus orbits, and Monte-Carlo discrepancy over random theta.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orbitlab/numerics.hpp"
#include "orbitlab/phases.hpp"

namespace orbitlab {

struct PointSample {
  std::vector<Turn> points;

  std::size_t N() const { return points.size(); }
};

/// frac(f(n)) for n = 1..N; f is evaluated exactly when possible.
PointSample sample_sequence(const RealExpr& f, std::uint64_t N, unsigned precision = default_precision());
/// Turns of a phase sequence for n = 1..N.
PointSample sample_phases(const PhaseSeq& s, std::uint64_t N, unsigned precision = default_precision());

struct DiscrepancyReport {
  RealInterval dstar;
  std::size_t N = 0;
  std::string method;
  /// Set when every point is exact.
  std::optional<BigRational> exact;
};

/// D*_N = max_i max(i/N - x_(i), x_(i) - (i-1)/N). Exact on exact samples;
/// on enclosures the order statistics are bracketed by the sorted lower and
/// upper endpoints, which needs no certified comparisons.
DiscrepancyReport star_discrepancy(const PointSample& s, unsigned precision = default_precision());

/// D*_M of the prefixes of length M for each M in Ms (ascending).
std::vector<DiscrepancyReport> discrepancy_prefix_curve(const PointSample& s, const std::vector<std::size_t>& Ms,
                                                        unsigned precision = default_precision());

/// Enclosure of |N^{-1} sum_n e^{2 pi i h x_n}|, intersected with [0, 1].
RealInterval weyl_sum(const PointSample& s, long h, unsigned precision = default_precision());

struct RelationLattice {
  std::size_t r = 0;
  /// Basis rows in Hermite normal form.
  std::vector<std::vector<BigInt>> basis;
  /// witnesses[i][d]: h.P = pi * sum_d witnesses[i][d] t^d for basis row i.
  std::vector<std::vector<BigRational>> witnesses;

  bool independent() const { return basis.empty(); }
  std::size_t rank() const { return basis.size(); }
};

/// {h in Z^r : h.P in pi Q[t]}.
RelationLattice relation_lattice(const std::vector<SymbolicPoly>& P);

/// The pi-coefficients of h.P when it lies in pi Q[t], otherwise nullopt.
std::optional<std::vector<BigRational>> relation_witness(const std::vector<SymbolicPoly>& P,
                                                         const std::vector<BigInt>& h);

/// Closure of {(P_1(n), ..., P_r(n)) / 2pi mod 1 : n >= 1} in turns:
/// the union over s < period of the sets
///   { t_k = M phi_k (k in J), t_j = sum_k a_jk (M / m_j) phi_k + q_j(s) / (2 m_j) : phi in T^p }
/// where J is a maximal independent subfamily and m_j P_j = sum_k a_jk P_k + pi q_j.
struct SubtorusModel {
  struct Relation {
    std::size_t j = 0;
    BigInt m;
    std::vector<BigInt> a;  // aligned with `independent`
    std::vector<BigRational> q;  // pi-coefficients by degree
  };

  std::size_t r = 0;
  std::vector<std::size_t> independent;  // J, in index order
  std::vector<Relation> relations;
  BigInt M = 1;       // lcm of the m_j
  BigInt period = 1;  // residues s of n that give distinct offsets

  std::size_t p() const { return independent.size(); }
  bool full_torus() const { return relations.empty(); }
  /// Every dependent coordinate fixed by phi and s.
  std::vector<RealInterval> dependent_turns(const std::vector<RealInterval>& phi, const BigInt& s,
                                            unsigned precision) const;
  /// True when some residue and branch places every dependent coordinate
  /// within `tol` (circle distance in turns) of the point. Certified: a true
  /// answer means the check holds for the enclosures.
  bool contains(const std::vector<Turn>& point, const BigRational& tol,
                unsigned precision = default_precision()) const;
  /// For p = 0: the finite closure as exact turns (one tuple per residue).
  std::vector<std::vector<BigRational>> finite_points() const;
};

SubtorusModel closure_model(const std::vector<SymbolicPoly>& P);

enum class KoksmaKind { Geometric, Expression };

/// f(n) for the Koksma experiment: c a^n, or an integer-valued expression.
struct KoksmaSequence {
  KoksmaKind kind = KoksmaKind::Geometric;
  BigInt c = 1;
  BigInt a = 2;
  std::optional<RealExpr> expr;
  std::string describe() const;
};

struct KoksmaOptions {
  std::size_t samples = 100;
  std::uint64_t N = 10000;
  std::uint64_t seed = 1;
  /// Diagnostic path: a single rational theta instead of random ones.
  std::optional<BigRational> forced_theta;
  unsigned precision = 64;
  unsigned threads = 1;
};

struct KoksmaSampleResult {
  std::size_t index = 0;
  std::string theta_tag;
  DiscrepancyReport report;
};

struct KoksmaReport {
  std::string sequence;
  std::uint64_t N = 0;
  std::uint64_t seed = 0;
  std::vector<KoksmaSampleResult> samples;
  /// Minimum gap |f(n) - f(m)| over the first N terms (separation hypothesis).
  BigRational min_gap;
  /// Quantiles of the upper endpoints of D*_N: min, 10%, 50%, 90%, max.
  std::vector<double> quantiles;

  std::size_t count_below(double eps) const;
};

/// splitmix64 step; the substream seed of sample i is splitmix64(seed + i).
std::uint64_t splitmix64(std::uint64_t x);

/// Throws RuleViolation ("hypothesis-violated") when two of the first N
/// values of f are closer than 1.
KoksmaReport koksma_sample(const KoksmaSequence& f, const KoksmaOptions& opt);

}  // namespace orbitlab

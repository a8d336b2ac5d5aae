#pragma once

// Unimodular phase sequences lambda_n = e^{2 pi i t(n)} with t(n) in turns,
// symbolic polynomials over {1, pi, named constants}, and the constructions
// that pick phases adversarially or by alignment.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "orbitlab/expr.hpp"
#include "orbitlab/numerics.hpp"
#include "orbitlab/space.hpp"

namespace orbitlab {

/// Element of the Q-span of {1, pi, sqrt2, phi, e, user symbols}. The basis
/// is assumed Q-linearly independent.
class SymbolicCoeff {
 public:
  SymbolicCoeff() = default;

  static SymbolicCoeff rational(const BigRational& q);
  static SymbolicCoeff symbol(const std::string& name, const BigRational& q = 1);

  BigRational get(const std::string& name) const;
  void set(const std::string& name, const BigRational& q);
  const std::map<std::string, BigRational>& coords() const { return coords_; }

  bool is_zero() const { return coords_.empty(); }
  /// Only the pi coordinate may be nonzero.
  bool in_pi_q() const;
  bool is_rational() const;

  RealInterval enclose(unsigned precision, const SymbolRegistry& symbols = SymbolRegistry::builtin()) const;
  std::string to_string() const;

  friend SymbolicCoeff operator+(const SymbolicCoeff& a, const SymbolicCoeff& b);
  friend SymbolicCoeff operator-(const SymbolicCoeff& a, const SymbolicCoeff& b);
  friend SymbolicCoeff operator*(const BigRational& s, const SymbolicCoeff& a);
  friend bool operator==(const SymbolicCoeff& a, const SymbolicCoeff& b) { return a.coords_ == b.coords_; }

 private:
  std::map<std::string, BigRational> coords_;  // "1" is the rational coordinate
};

/// Polynomial sum_{d} c_d t^d with symbolic coefficients.
class SymbolicPoly {
 public:
  SymbolicPoly() = default;

  /// coeffs[d] multiplies t^d. A nonzero constant term requires allow_constant.
  static SymbolicPoly from_coeffs(std::vector<SymbolicCoeff> coeffs, bool allow_constant = false);
  /// Parses e.g. "sqrt2*t^2 + pi*t/3" in the variable t.
  static SymbolicPoly parse(std::string_view text, bool allow_constant = false,
                            const SymbolRegistry& symbols = SymbolRegistry::builtin());

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  SymbolicCoeff coeff(int d) const;
  const std::vector<SymbolicCoeff>& coeffs() const { return coeffs_; }
  bool allows_constant() const { return allow_constant_; }
  bool has_constant() const { return !coeffs_.empty() && !coeffs_[0].is_zero(); }

  SymbolicCoeff eval(const BigRational& t) const;
  std::string to_string() const;

  friend SymbolicPoly operator+(const SymbolicPoly& a, const SymbolicPoly& b);
  friend SymbolicPoly operator*(const BigRational& s, const SymbolicPoly& a);
  friend bool operator==(const SymbolicPoly& a, const SymbolicPoly& b) { return a.coeffs_ == b.coeffs_; }

 private:
  void trim();

  std::vector<SymbolicCoeff> coeffs_;
  bool allow_constant_ = false;
};

/// P(n + m) = P(m) + P(n) + Q(n) with deg Q < deg P and Q(0) = 0.
std::pair<SymbolicCoeff, SymbolicPoly> poly_shift(const SymbolicPoly& P, std::int64_t m);

/// A phase value. When `direction` is set, lambda = u / |u| for the Gaussian
/// rational u exactly; `turn` then only encloses its argument.
struct PhaseValue {
  Turn turn;
  std::optional<GaussianRational> direction;
};

/// Turn of arg(u) for u != 0; exact on the axes.
Turn direction_turn(const GaussianRational& u, unsigned precision);
/// Enclosure of lambda.
UnitComplexApprox phase_unit(const PhaseValue& v, unsigned precision);

class PhaseSeq;

struct PolynomialPhase {
  SymbolicPoly poly;  // radians
};

struct SlowGrowthPhase {
  RealExpr expr;
  bool radians = true;  // otherwise the expression is already in turns
};

/// f(n) = c * a^n, turn = frac(f(n) theta).
struct GeometricPhase {
  BigInt c = 1;
  BigInt a = 2;
  std::variant<DigitStream, BigRational> theta;
};

struct PatchedPhase {
  std::shared_ptr<const PhaseSeq> base;
  std::function<bool(std::uint64_t)> in_patch;
  std::function<PhaseValue(std::uint64_t)> patch_value;
  std::string description;
};

/// table[n - start].
struct ExplicitPhase {
  std::uint64_t start = 1;
  std::vector<PhaseValue> table;
};

struct ConstantPhase {
  Turn turn;
};

class PhaseSeq {
 public:
  using Variant = std::variant<PolynomialPhase, SlowGrowthPhase, GeometricPhase, PatchedPhase, ExplicitPhase,
                               ConstantPhase>;

  PhaseSeq() : v_(ConstantPhase{}) {}
  PhaseSeq(Variant v) : v_(std::move(v)) {}  // NOLINT

  static PhaseSeq constant(const Turn& t) { return PhaseSeq(ConstantPhase{t}); }
  static PhaseSeq polynomial(SymbolicPoly p) { return PhaseSeq(PolynomialPhase{std::move(p)}); }
  static PhaseSeq slow_growth(const std::string& expr, bool radians = true);
  static PhaseSeq geometric(BigInt c, BigInt a, std::variant<DigitStream, BigRational> theta);

  const Variant& variant() const { return v_; }
  std::string kind() const;

 private:
  Variant v_;
};

/// Turn of lambda_n: exact when all ingredients are rational, otherwise an
/// enclosure of width <= 2^{4-precision}.
Turn phase_eval(const PhaseSeq& s, std::uint64_t n, unsigned precision);
PhaseValue phase_value(const PhaseSeq& s, std::uint64_t n, unsigned precision);

/// x^* = e_N^*: lambda_n = |c| / c for c = (T^n x)_N, and 1 when c = 0.
/// Values are stored in direction form so Re(lambda_n c) = |c| holds exactly.
PhaseSeq align_sequence(const WeightedShift& T, const BlockVector& x, std::uint64_t N, std::uint64_t horizon,
                        unsigned precision = default_precision());

/// Per-n record of the sign-flip rule.
struct SignflipStep {
  std::uint64_t n = 0;
  int lambda = 1;
  /// Exact enclosure of ||T^n x - x||^2.
  BigRational diff_sq_lo, diff_sq_hi;
  /// Certified lower bound of ||lambda T^n x - x||^2 and upper bound of ||x||^2 / 4.
  BigRational margin_lo, quarter_norm_hi;
};

struct SignflipResult {
  PhaseSeq sequence;
  std::vector<SignflipStep> steps;
  bool certified = true;
};

/// lambda_n = 1 if ||T^n x - x|| >= ||x|| / 2 and -1 otherwise, with
/// ||lambda_n T^n x - x|| >= ||x|| / 2 certified per n.
SignflipResult signflip_sequence(const WeightedShift& T, const BlockVector& x, std::uint64_t horizon,
                                 std::uint64_t min_window = 32);

/// f(n) = c a^n with integer c >= 1, a >= 2.
struct GeometricDescriptor {
  BigInt c = 1;
  BigInt a = 2;
};

struct AdversarialPhase {
  GeometricDescriptor f;
  std::uint64_t N = 0;
  std::uint64_t horizon = 0;
  /// alphas[n] for 0 <= n <= horizon, each 0 or 1/2.
  std::vector<BigRational> alphas;
  /// Members of A with certified membership.
  std::vector<std::uint64_t> members;
  /// n whose membership stayed undecided after window refinement; handled as members.
  std::vector<std::uint64_t> undecided;
  /// sum_n alpha_n / f(n).
  BigRational theta;
  std::string provenance;

  PhaseSeq phase() const;
  bool in_A(std::uint64_t n) const;
};

/// Smallest N >= 1 with sum_{j >= N+1} a^{-j} <= 1/4.
std::uint64_t minimal_target_index(const BigInt& a);

AdversarialPhase adversarial_theta(const WeightedShift& T, const BlockVector& x, const GeometricDescriptor& f,
                                   std::uint64_t N, std::uint64_t horizon);

struct AdversarialCheck {
  bool sign_condition = true;      // Re(e^{2 pi i (f(n) theta_{n-1} + alpha_n)} c_N) <= 0 on A
  bool spacing_condition = true;   // n in A => n+k not in A for 1 <= k <= N
  bool alphas_zero_off_A = true;
  std::vector<std::string> violations;
  bool ok() const { return sign_condition && spacing_condition && alphas_zero_off_A; }
};

/// Recomputes the postconditions from theta prefixes without the incremental state.
AdversarialCheck recheck_adversarial(const WeightedShift& T, const BlockVector& x, const AdversarialPhase& ph);

struct GrowthRow {
  std::uint64_t n = 0;
  std::vector<RealInterval> g;    // g_0 .. g_d
  std::vector<RealInterval> eps;  // eps_1 .. eps_{k_max}
  RealInterval sup_abs_eps;
  bool exact = false;
};

struct GrowthReport {
  std::uint64_t d = 0;
  std::uint64_t k_max = 0;
  BigRational threshold;
  std::vector<GrowthRow> rows;
  bool pass = false;
  std::string reason;
};

/// Fits f(n+k) - f(n) = sum_{l<=d} g_l(n) k^l on the nodes k = 0..d and reports
/// the residuals eps_k(n) for 1 <= k <= k_max. PASS when sup_k |eps_k(n)|
/// certifiably does not increase along n_grid and ends below the threshold.
GrowthReport slow_growth_certify(const RealExpr& f, std::uint64_t d, std::uint64_t k_max,
                                 const std::vector<std::uint64_t>& n_grid,
                                 const BigRational& threshold = BigRational(1, 20),
                                 unsigned precision = default_precision());

}  // namespace orbitlab

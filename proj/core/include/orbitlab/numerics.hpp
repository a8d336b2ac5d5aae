#pragma once

// Exact and certified arithmetic: rationals, directed-rounding intervals,
// angles stored as turns (fractions of a full rotation) and unit-circle
// enclosures.

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "orbitlab/errors.hpp"

namespace orbitlab {

using BigInt = mpz_class;
using BigRational = mpq_class;

inline constexpr unsigned kDefaultPrecision = 192;
inline constexpr unsigned kMinPrecision = 16;

/// Working precision in bits: ORBITLAB_PRECISION when set and valid, else 192.
unsigned default_precision();

/// Parses "p/q", "-7", "0.125" or "1e-3" into a canonical rational.
BigRational parse_rational(std::string_view text);
std::string to_string(const BigRational& q);
BigInt floor_of(const BigRational& q);
BigInt ceil_of(const BigRational& q);
/// 2^e as an exact rational, e may be negative.
BigRational pow2(long e);
BigRational pow_int(const BigRational& base, unsigned long e);

/// RAII wrapper around an mpfr_t.
class Real {
 public:
  explicit Real(unsigned precision = kDefaultPrecision);
  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  static Real from_rational(const BigRational& q, unsigned precision, mpfr_rnd_t rnd);
  static Real infinity(unsigned precision);

  mpfr_ptr raw() { return value_; }
  mpfr_srcptr raw() const { return value_; }
  unsigned precision() const { return static_cast<unsigned>(mpfr_get_prec(value_)); }

  bool is_finite() const { return mpfr_number_p(value_) != 0; }
  double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_d(value_, rnd); }
  /// Exact value of a finite dyadic endpoint.
  BigRational to_rational() const;
  std::string to_string(int digits = 25) const;

  int compare(const Real& other) const { return mpfr_cmp(value_, other.value_); }
  int compare(const BigRational& q) const { return mpfr_cmp_q(value_, q.get_mpq_t()); }

 private:
  mpfr_t value_;
};

/// Closed interval [lo, hi] with dyadic endpoints produced by outward rounding.
class RealInterval {
 public:
  explicit RealInterval(unsigned precision = kDefaultPrecision);

  static RealInterval exact(const BigRational& q, unsigned precision);
  static RealInterval from_int(long v, unsigned precision);
  static RealInterval from_bounds(Real lo, Real hi);
  static RealInterval from_doubles(double lo, double hi, unsigned precision);
  static RealInterval pi(unsigned precision);
  static RealInterval euler(unsigned precision);
  static RealInterval whole_nonnegative(unsigned precision);

  const Real& lo() const { return lo_; }
  const Real& hi() const { return hi_; }
  unsigned precision() const { return lo_.precision(); }

  /// hi - lo rounded up.
  Real width() const;
  double width_double() const;
  double mid_double() const;
  bool is_point() const { return lo_.compare(hi_) == 0; }
  bool is_bounded() const { return lo_.is_finite() && hi_.is_finite(); }

  bool contains(const BigRational& q) const;
  bool contains(const RealInterval& inner) const;
  bool certainly_less(const BigRational& q) const { return hi_.compare(q) < 0; }
  bool certainly_greater_equal(const BigRational& q) const { return lo_.compare(q) >= 0; }

  /// Same enclosure with endpoints rounded outward to a new precision.
  RealInterval rounded(unsigned precision) const;

  std::string to_string(int digits = 20) const;

 private:
  Real lo_;
  Real hi_;
};

RealInterval operator+(const RealInterval& a, const RealInterval& b);
RealInterval operator-(const RealInterval& a, const RealInterval& b);
RealInterval operator-(const RealInterval& a);
RealInterval operator*(const RealInterval& a, const RealInterval& b);
RealInterval operator/(const RealInterval& a, const RealInterval& b);

RealInterval square(const RealInterval& a);
RealInterval abs(const RealInterval& a);
/// Throws DomainError when the enclosure reaches below zero.
RealInterval sqrt(const RealInterval& a);
/// Square root of max(a, 0); for quantities known to be nonnegative.
RealInterval sqrt_clamped(const RealInterval& a);
RealInterval log(const RealInterval& a);
RealInterval exp(const RealInterval& a);
RealInterval pow_int(const RealInterval& a, long e);
/// a^(p/q) for a >= 0 (a > 0 when p < 0).
RealInterval pow_rational(const RealInterval& a, const BigRational& e);
RealInterval hull(const RealInterval& a, const RealInterval& b);
/// Enclosure of max(a, b) over all pairs of members.
RealInterval max(const RealInterval& a, const RealInterval& b);
RealInterval min(const RealInterval& a, const RealInterval& b);
/// Subtracts floor(lo); requires width < 1.
RealInterval frac(const RealInterval& a);

/// An angle in turns (angle / 2pi), reduced modulo 1.
class Turn {
 public:
  Turn() : value_(BigRational(0)) {}

  static Turn exact(const BigRational& q);
  /// Enclosure variant; width must stay below 1/4 so the reduction is unambiguous.
  static Turn enclosure(const RealInterval& t);

  bool is_exact() const { return std::holds_alternative<BigRational>(value_); }
  const BigRational& exact_value() const;
  const RealInterval& interval() const;
  RealInterval as_interval(unsigned precision) const;

  /// The turn 1 - t (conjugate rotation).
  Turn negated() const;
  Turn plus(const Turn& other, unsigned precision) const;

  std::string to_string() const;
  bool operator==(const Turn& other) const;

 private:
  std::variant<BigRational, RealInterval> value_;
};

/// q mod 1 as an exact turn in [0, 1).
Turn turn_reduce(const BigRational& q);

/// Enclosure of e^{2 pi i t}.
struct UnitComplexApprox {
  RealInterval re;
  RealInterval im;

  bool is_exact() const { return re.is_point() && im.is_point(); }
  UnitComplexApprox conj() const { return {re, -im}; }
};

/// Enclosure of (cos 2pi t, sin 2pi t) with width <= 2^{3-precision}.
/// Exact turns with denominator 1, 2 or 4 give exact endpoints.
UnitComplexApprox unit_eval(const Turn& t, unsigned precision);

/// Lazily generated base-b expansion theta = sum d_i b^{-i} in [0, 1).
/// Digit queries are deterministic, cached and safe to call from several threads.
class DigitStream {
 public:
  DigitStream();

  /// Uniform random digits from a seeded mt19937_64 ("stream:seed=7").
  static DigitStream seeded(unsigned base, std::uint64_t seed);
  /// Expansion of a rational in [0, 1) ("rational:5/8").
  static DigitStream from_rational(unsigned base, const BigRational& theta);
  /// Finite digit list followed by zeros ("digits:0101").
  static DigitStream from_digits(unsigned base, std::vector<unsigned> digits);
  /// Parses a generator tag as produced by tag().
  static DigitStream parse(unsigned base, std::string_view tag);

  unsigned base() const;
  std::string tag() const;
  /// d_i, i >= 1.
  unsigned digit(std::uint64_t i) const;
  /// d_start ... d_{start+count-1} read as a base-b integer.
  BigInt window(std::uint64_t start, std::uint64_t count) const;
  /// Index after which every digit is zero, when known.
  std::optional<std::uint64_t> terminates_after() const;
  /// Exact value when theta is rational and known to be so.
  std::optional<BigRational> rational_value() const;
  /// sum_{i <= t} d_i b^{-i}.
  BigRational prefix_value(std::uint64_t t) const;
  /// frac(b^n theta): exact for rational streams, otherwise an enclosure of width <= 2^{-precision}.
  Turn shifted(std::uint64_t n, unsigned precision) const;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

}  // namespace orbitlab

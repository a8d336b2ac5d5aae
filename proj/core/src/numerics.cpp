#include "orbitlab/numerics.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <sstream>

namespace orbitlab {

unsigned default_precision() {
  if (const char* env = std::getenv("ORBITLAB_PRECISION")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= static_cast<long>(kMinPrecision) && v <= (1L << 20)) {
      return static_cast<unsigned>(v);
    }
  }
  return kDefaultPrecision;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

BigInt parse_integer(std::string_view s) {
  std::string t(s);
  bool neg = false;
  if (!t.empty() && (t[0] == '+' || t[0] == '-')) {
    neg = t[0] == '-';
    t.erase(0, 1);
  }
  if (!all_digits(t)) throw ParseError("invalid integer '" + std::string(s) + "'");
  BigInt v(t, 10);
  return neg ? BigInt(-v) : v;
}

BigRational parse_decimal(const std::string& s) {
  std::string mant = s;
  long exponent = 0;
  if (const auto epos = s.find_first_of("eE"); epos != std::string::npos) {
    mant = s.substr(0, epos);
    const std::string ex = s.substr(epos + 1);
    const BigInt e = parse_integer(ex);
    if (!e.fits_slong_p()) throw ParseError("exponent out of range in '" + s + "'");
    exponent = e.get_si();
  }
  bool neg = false;
  if (!mant.empty() && (mant[0] == '+' || mant[0] == '-')) {
    neg = mant[0] == '-';
    mant.erase(0, 1);
  }
  std::string int_part = mant;
  std::string frac_part;
  if (const auto dot = mant.find('.'); dot != std::string::npos) {
    int_part = mant.substr(0, dot);
    frac_part = mant.substr(dot + 1);
  }
  if (int_part.empty() && frac_part.empty()) throw ParseError("invalid number '" + s + "'");
  if ((!int_part.empty() && !all_digits(int_part)) || (!frac_part.empty() && !all_digits(frac_part))) {
    throw ParseError("invalid number '" + s + "'");
  }
  BigInt num(int_part.empty() ? std::string("0") : int_part + frac_part, 10);
  if (int_part.empty()) num = BigInt(frac_part, 10);
  BigInt den = 1;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_part.size());
  BigRational q(num, den);
  if (exponent > 0) {
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent));
    q *= scale;
  } else if (exponent < 0) {
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(-exponent));
    q /= scale;
  }
  q.canonicalize();
  return neg ? BigRational(-q) : q;
}

}  // namespace

BigRational parse_rational(std::string_view text) {
  const std::string s = trim(text);
  if (s.empty()) throw ParseError("empty rational literal");
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    const BigInt num = parse_integer(trim(std::string_view(s).substr(0, slash)));
    const BigInt den = parse_integer(trim(std::string_view(s).substr(slash + 1)));
    if (den == 0) throw ParseError("zero denominator in '" + s + "'");
    BigRational q(num, den);
    q.canonicalize();
    return q;
  }
  if (s.find_first_of(".eE") != std::string::npos) return parse_decimal(s);
  return BigRational(parse_integer(s));
}

std::string to_string(const BigRational& q) { return q.get_str(10); }

BigInt floor_of(const BigRational& q) {
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

BigInt ceil_of(const BigRational& q) {
  BigInt r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

BigRational pow2(long e) {
  BigInt p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e < 0 ? -e : e));
  return e >= 0 ? BigRational(p) : BigRational(BigInt(1), p);
}

BigRational pow_int(const BigRational& base, unsigned long e) {
  BigInt num;
  BigInt den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
  BigRational r(num, den);
  r.canonicalize();
  return r;
}

// ---------------------------------------------------------------- Real

Real::Real(unsigned precision) {
  mpfr_init2(value_, static_cast<mpfr_prec_t>(precision));
  mpfr_set_zero(value_, 1);
}

Real::Real(const Real& other) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  if (this != &other) mpfr_swap(value_, other.value_);
  return *this;
}

Real::~Real() { mpfr_clear(value_); }

Real Real::from_rational(const BigRational& q, unsigned precision, mpfr_rnd_t rnd) {
  Real r(precision);
  mpfr_set_q(r.value_, q.get_mpq_t(), rnd);
  return r;
}

Real Real::infinity(unsigned precision) {
  Real r(precision);
  mpfr_set_inf(r.value_, 1);
  return r;
}

BigRational Real::to_rational() const {
  if (!is_finite()) throw DomainError("non-finite endpoint has no rational value");
  BigRational q;
  mpfr_get_q(q.get_mpq_t(), value_);
  return q;
}

std::string Real::to_string(int digits) const {
  if (mpfr_nan_p(value_)) return "nan";
  if (mpfr_inf_p(value_)) return mpfr_sgn(value_) > 0 ? "inf" : "-inf";
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Rg", digits, value_);
  std::string s(buf);
  mpfr_free_str(buf);
  return s;
}

// ---------------------------------------------------------- RealInterval

namespace {

unsigned joint_precision(const RealInterval& a, const RealInterval& b) {
  return std::max(a.precision(), b.precision());
}

Real min_real(const Real& a, const Real& b) { return a.compare(b) <= 0 ? a : b; }
Real max_real(const Real& a, const Real& b) { return a.compare(b) >= 0 ? a : b; }

}  // namespace

RealInterval::RealInterval(unsigned precision) : lo_(precision), hi_(precision) {}

RealInterval RealInterval::exact(const BigRational& q, unsigned precision) {
  RealInterval r(precision);
  mpfr_set_q(r.lo_.raw(), q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_.raw(), q.get_mpq_t(), MPFR_RNDU);
  return r;
}

RealInterval RealInterval::from_int(long v, unsigned precision) {
  RealInterval r(precision);
  mpfr_set_si(r.lo_.raw(), v, MPFR_RNDD);
  mpfr_set_si(r.hi_.raw(), v, MPFR_RNDU);
  return r;
}

RealInterval RealInterval::from_bounds(Real lo, Real hi) {
  if (mpfr_nan_p(lo.raw()) || mpfr_nan_p(hi.raw()) || lo.compare(hi) > 0) {
    throw DomainError("invalid interval bounds");
  }
  const unsigned p = std::max(lo.precision(), hi.precision());
  RealInterval r(p);
  mpfr_set(r.lo_.raw(), lo.raw(), MPFR_RNDD);
  mpfr_set(r.hi_.raw(), hi.raw(), MPFR_RNDU);
  return r;
}

RealInterval RealInterval::from_doubles(double lo, double hi, unsigned precision) {
  RealInterval r(precision);
  mpfr_set_d(r.lo_.raw(), lo, MPFR_RNDD);
  mpfr_set_d(r.hi_.raw(), hi, MPFR_RNDU);
  if (r.lo_.compare(r.hi_) > 0) throw DomainError("invalid interval bounds");
  return r;
}

RealInterval RealInterval::pi(unsigned precision) {
  RealInterval r(precision);
  mpfr_const_pi(r.lo_.raw(), MPFR_RNDD);
  mpfr_const_pi(r.hi_.raw(), MPFR_RNDU);
  return r;
}

RealInterval RealInterval::euler(unsigned precision) {
  RealInterval r(precision);
  mpfr_set_ui(r.lo_.raw(), 1, MPFR_RNDN);
  mpfr_set_ui(r.hi_.raw(), 1, MPFR_RNDN);
  mpfr_exp(r.lo_.raw(), r.lo_.raw(), MPFR_RNDD);
  mpfr_exp(r.hi_.raw(), r.hi_.raw(), MPFR_RNDU);
  return r;
}

RealInterval RealInterval::whole_nonnegative(unsigned precision) {
  RealInterval r(precision);
  mpfr_set_inf(r.hi_.raw(), 1);
  return r;
}

Real RealInterval::width() const {
  Real w(precision());
  mpfr_sub(w.raw(), hi_.raw(), lo_.raw(), MPFR_RNDU);
  return w;
}

double RealInterval::width_double() const { return width().to_double(MPFR_RNDU); }

double RealInterval::mid_double() const {
  Real m(precision() + 1);
  mpfr_add(m.raw(), lo_.raw(), hi_.raw(), MPFR_RNDN);
  mpfr_div_2ui(m.raw(), m.raw(), 1, MPFR_RNDN);
  return m.to_double();
}

bool RealInterval::contains(const BigRational& q) const { return lo_.compare(q) <= 0 && hi_.compare(q) >= 0; }

bool RealInterval::contains(const RealInterval& inner) const {
  return lo_.compare(inner.lo_) <= 0 && hi_.compare(inner.hi_) >= 0;
}

RealInterval RealInterval::rounded(unsigned precision) const {
  RealInterval r(precision);
  mpfr_set(r.lo_.raw(), lo_.raw(), MPFR_RNDD);
  mpfr_set(r.hi_.raw(), hi_.raw(), MPFR_RNDU);
  return r;
}

std::string RealInterval::to_string(int digits) const {
  return "[" + lo_.to_string(digits) + ", " + hi_.to_string(digits) + "]";
}

RealInterval operator+(const RealInterval& a, const RealInterval& b) {
  RealInterval r(joint_precision(a, b));
  Real lo(r.precision());
  Real hi(r.precision());
  mpfr_add(lo.raw(), a.lo().raw(), b.lo().raw(), MPFR_RNDD);
  mpfr_add(hi.raw(), a.hi().raw(), b.hi().raw(), MPFR_RNDU);
  return RealInterval::from_bounds(std::move(lo), std::move(hi));
}

RealInterval operator-(const RealInterval& a, const RealInterval& b) {
  const unsigned p = joint_precision(a, b);
  Real lo(p);
  Real hi(p);
  mpfr_sub(lo.raw(), a.lo().raw(), b.hi().raw(), MPFR_RNDD);
  mpfr_sub(hi.raw(), a.hi().raw(), b.lo().raw(), MPFR_RNDU);
  return RealInterval::from_bounds(std::move(lo), std::move(hi));
}

RealInterval operator-(const RealInterval& a) {
  Real lo(a.precision());
  Real hi(a.precision());
  mpfr_neg(lo.raw(), a.hi().raw(), MPFR_RNDD);
  mpfr_neg(hi.raw(), a.lo().raw(), MPFR_RNDU);
  return RealInterval::from_bounds(std::move(lo), std::move(hi));
}

RealInterval operator*(const RealInterval& a, const RealInterval& b) {
  const unsigned p = joint_precision(a, b);
  const mpfr_srcptr xs[2] = {a.lo().raw(), a.hi().raw()};
  const mpfr_srcptr ys[2] = {b.lo().raw(), b.hi().raw()};
  Real lo = Real::infinity(p);
  Real hi(p);
  mpfr_set_inf(hi.raw(), -1);
  Real t(p);
  for (auto x : xs) {
    for (auto y : ys) {
      mpfr_mul(t.raw(), x, y, MPFR_RNDD);
      if (mpfr_nan_p(t.raw())) mpfr_set_zero(t.raw(), 1);  // 0 * inf
      if (t.compare(lo) < 0) lo = t;
      mpfr_mul(t.raw(), x, y, MPFR_RNDU);
      if (mpfr_nan_p(t.raw())) mpfr_set_zero(t.raw(), 1);
      if (t.compare(hi) > 0) hi = t;
    }
  }
  return RealInterval::from_bounds(std::move(lo), std::move(hi));
}

RealInterval operator/(const RealInterval& a, const RealInterval& b) {
  if (mpfr_sgn(b.lo().raw()) <= 0 && mpfr_sgn(b.hi().raw()) >= 0) {
    throw DomainError("interval division by an enclosure containing zero");
  }
  const unsigned p = joint_precision(a, b);
  const mpfr_srcptr xs[2] = {a.lo().raw(), a.hi().raw()};
  const mpfr_srcptr ys[2] = {b.lo().raw(), b.hi().raw()};
  Real lo = Real::infinity(p);
  Real hi(p);
  mpfr_set_inf(hi.raw(), -1);
  Real t(p);
  for (auto x : xs) {
    for (auto y : ys) {
      mpfr_div(t.raw(), x, y, MPFR_RNDD);
      if (t.compare(lo) < 0) lo = t;
      mpfr_div(t.raw(), x, y, MPFR_RNDU);
      if (t.compare(hi) > 0) hi = t;
    }
  }
  return RealInterval::from_bounds(std::move(lo), std::move(hi));
}

RealInterval abs(const RealInterval& a) {
  if (mpfr_sgn(a.lo().raw()) >= 0) return a;
  if (mpfr_sgn(a.hi().raw()) <= 0) return -a;
  Real lo(a.precision());
  Real hi(a.precision());
  Real neg_lo(a.precision());
  mpfr_neg(neg_lo.raw(), a.lo().raw(), MPFR_RNDU);
  hi = max_real(neg_lo, a.hi());
  return RealInterval::from_bounds(std::move(lo), std::move(hi));
}

RealInterval square(const RealInterval& a) { return pow_int(a, 2); }

RealInterval sqrt(const RealInterval& a) {
  if (mpfr_sgn(a.lo().raw()) < 0) throw DomainError("square root of an enclosure reaching below zero");
  Real lo(a.precision());
  Real hi(a.precision());
  mpfr_sqrt(lo.raw(), a.lo().raw(), MPFR_RNDD);
  mpfr_sqrt(hi.raw(), a.hi().raw(), MPFR_RNDU);
  return RealInterval::from_bounds(std::move(lo), std::move(hi));
}

RealInterval sqrt_clamped(const RealInterval& a) {
  if (mpfr_sgn(a.hi().raw()) < 0) throw DomainError("square root of a negative enclosure");
  Real lo(a.precision());
  Real hi(a.precision());
  if (mpfr_sgn(a.lo().raw()) > 0) mpfr_sqrt(lo.raw(), a.lo().raw(), MPFR_RNDD);
  mpfr_sqrt(hi.raw(), a.hi().raw(), MPFR_RNDU);
  return RealInterval::from_bounds(std::move(lo), std::move(hi));
}

RealInterval log(const RealInterval& a) {
  if (mpfr_sgn(a.lo().raw()) <= 0) throw DomainError("log of a nonpositive enclosure");
  Real lo(a.precision());
  Real hi(a.precision());
  mpfr_log(lo.raw(), a.lo().raw(), MPFR_RNDD);
  mpfr_log(hi.raw(), a.hi().raw(), MPFR_RNDU);
  return RealInterval::from_bounds(std::move(lo), std::move(hi));
}

RealInterval exp(const RealInterval& a) {
  Real lo(a.precision());
  Real hi(a.precision());
  mpfr_exp(lo.raw(), a.lo().raw(), MPFR_RNDD);
  mpfr_exp(hi.raw(), a.hi().raw(), MPFR_RNDU);
  return RealInterval::from_bounds(std::move(lo), std::move(hi));
}

RealInterval pow_int(const RealInterval& a, long e) {
  const unsigned p = a.precision();
  if (e == 0) return RealInterval::from_int(1, p);
  if (e < 0) return RealInterval::from_int(1, p) / pow_int(a, -e);
  auto power = [&](mpfr_srcptr x, mpfr_rnd_t rnd) {
    Real r(p);
    mpfr_pow_ui(r.raw(), x, static_cast<unsigned long>(e), rnd);
    return r;
  };
  if (e % 2 == 1 || mpfr_sgn(a.lo().raw()) >= 0) {
    return RealInterval::from_bounds(power(a.lo().raw(), MPFR_RNDD), power(a.hi().raw(), MPFR_RNDU));
  }
  if (mpfr_sgn(a.hi().raw()) <= 0) {
    return RealInterval::from_bounds(power(a.hi().raw(), MPFR_RNDD), power(a.lo().raw(), MPFR_RNDU));
  }
  const RealInterval m = abs(a);
  return RealInterval::from_bounds(Real(p), power(m.hi().raw(), MPFR_RNDU));
}

RealInterval pow_rational(const RealInterval& a, const BigRational& e) {
  if (e.get_den() == 1) {
    if (!e.get_num().fits_slong_p()) throw DomainError("exponent out of range");
    return pow_int(a, e.get_num().get_si());
  }
  const int s = mpfr_sgn(a.lo().raw());
  if (s < 0 || (s == 0 && e < 0)) throw DomainError("fractional power of an enclosure reaching below zero");
  const BigInt num = abs(e.get_num());
  if (!num.fits_slong_p() || !e.get_den().fits_ulong_p()) throw DomainError("exponent out of range");
  const RealInterval base = pow_int(a, num.get_si());
  const unsigned long q = e.get_den().get_ui();
  Real lo(a.precision());
  Real hi(a.precision());
  mpfr_rootn_ui(lo.raw(), base.lo().raw(), q, MPFR_RNDD);
  mpfr_rootn_ui(hi.raw(), base.hi().raw(), q, MPFR_RNDU);
  RealInterval r = RealInterval::from_bounds(std::move(lo), std::move(hi));
  if (e < 0) return RealInterval::from_int(1, a.precision()) / r;
  return r;
}

RealInterval hull(const RealInterval& a, const RealInterval& b) {
  return RealInterval::from_bounds(min_real(a.lo(), b.lo()), max_real(a.hi(), b.hi()));
}

RealInterval max(const RealInterval& a, const RealInterval& b) {
  return RealInterval::from_bounds(max_real(a.lo(), b.lo()), max_real(a.hi(), b.hi()));
}

RealInterval min(const RealInterval& a, const RealInterval& b) {
  return RealInterval::from_bounds(min_real(a.lo(), b.lo()), min_real(a.hi(), b.hi()));
}

namespace {

BigInt floor_real(const Real& x) {
  BigInt z;
  mpfr_get_z(z.get_mpz_t(), x.raw(), MPFR_RNDD);
  return z;
}

RealInterval shift_by_integer(const RealInterval& a, const BigInt& k) {
  const unsigned p = a.precision();
  Real lo(p);
  Real hi(p);
  mpfr_sub_z(lo.raw(), a.lo().raw(), k.get_mpz_t(), MPFR_RNDD);
  mpfr_sub_z(hi.raw(), a.hi().raw(), k.get_mpz_t(), MPFR_RNDU);
  return RealInterval::from_bounds(std::move(lo), std::move(hi));
}

}  // namespace

RealInterval frac(const RealInterval& a) {
  if (!a.is_bounded()) throw DomainError("frac of an unbounded enclosure");
  const BigInt k = floor_real(a.lo());
  if (floor_real(a.hi()) != k) throw PrecisionInsufficient("frac: enclosure straddles an integer");
  RealInterval r = shift_by_integer(a, k);
  if (mpfr_sgn(r.lo().raw()) < 0) {
    return RealInterval::from_bounds(Real(r.precision()), r.hi());
  }
  return r;
}

// ------------------------------------------------------------------- Turn

Turn turn_reduce(const BigRational& q) {
  BigRational r = q - BigRational(floor_of(q));
  r.canonicalize();
  return Turn::exact(r);
}

Turn Turn::exact(const BigRational& q) {
  Turn t;
  BigRational c = q;
  c.canonicalize();
  BigRational r = c - BigRational(floor_of(c));
  r.canonicalize();
  t.value_ = r;
  return t;
}

Turn Turn::enclosure(const RealInterval& t) {
  if (!t.is_bounded()) throw PrecisionInsufficient("turn enclosure is unbounded");
  if (t.width().compare(BigRational(1, 4)) >= 0) {
    throw PrecisionInsufficient("turn enclosure too wide for unambiguous reduction");
  }
  Turn out;
  if (t.is_point()) {
    out.value_ = t.lo().to_rational();
    out = Turn::exact(std::get<BigRational>(out.value_));
    return out;
  }
  out.value_ = shift_by_integer(t, floor_real(t.lo()));
  return out;
}

const BigRational& Turn::exact_value() const {
  if (!is_exact()) throw PrecisionInsufficient("turn is only known as an enclosure");
  return std::get<BigRational>(value_);
}

const RealInterval& Turn::interval() const {
  if (is_exact()) throw DomainError("exact turn has no stored enclosure");
  return std::get<RealInterval>(value_);
}

RealInterval Turn::as_interval(unsigned precision) const {
  if (is_exact()) return RealInterval::exact(std::get<BigRational>(value_), precision);
  const auto& iv = std::get<RealInterval>(value_);
  return iv.precision() == precision ? iv : iv.rounded(precision);
}

Turn Turn::negated() const {
  if (is_exact()) return Turn::exact(-std::get<BigRational>(value_));
  return Turn::enclosure(-std::get<RealInterval>(value_));
}

Turn Turn::plus(const Turn& other, unsigned precision) const {
  if (is_exact() && other.is_exact()) return Turn::exact(exact_value() + other.exact_value());
  return Turn::enclosure(as_interval(precision) + other.as_interval(precision));
}

std::string Turn::to_string() const {
  if (is_exact()) return orbitlab::to_string(std::get<BigRational>(value_));
  return std::get<RealInterval>(value_).to_string();
}

bool Turn::operator==(const Turn& other) const {
  if (is_exact() != other.is_exact()) return false;
  if (is_exact()) return exact_value() == other.exact_value();
  const auto& a = interval();
  const auto& b = other.interval();
  return a.lo().compare(b.lo()) == 0 && a.hi().compare(b.hi()) == 0;
}

// -------------------------------------------------------------- unit_eval

namespace {

UnitComplexApprox exact_unit(long re, long im, unsigned precision) {
  return {RealInterval::from_int(re, precision), RealInterval::from_int(im, precision)};
}

RealInterval clamp_unit(RealInterval v) {
  Real lo = v.lo();
  Real hi = v.hi();
  if (mpfr_cmp_si(lo.raw(), -1) < 0) mpfr_set_si(lo.raw(), -1, MPFR_RNDN);
  if (mpfr_cmp_si(hi.raw(), 1) > 0) mpfr_set_si(hi.raw(), 1, MPFR_RNDN);
  return RealInterval::from_bounds(std::move(lo), std::move(hi));
}

// Enclosure of cos/sin over an angle interval: value at lo widened by the
// interval width (both functions are 1-Lipschitz).
UnitComplexApprox unit_from_angle(const RealInterval& angle, unsigned out_precision) {
  const unsigned w = angle.precision();
  const Real spread = angle.width();
  Real c_lo(w), c_hi(w), s_lo(w), s_hi(w);
  mpfr_cos(c_lo.raw(), angle.lo().raw(), MPFR_RNDD);
  mpfr_cos(c_hi.raw(), angle.lo().raw(), MPFR_RNDU);
  mpfr_sin(s_lo.raw(), angle.lo().raw(), MPFR_RNDD);
  mpfr_sin(s_hi.raw(), angle.lo().raw(), MPFR_RNDU);
  mpfr_sub(c_lo.raw(), c_lo.raw(), spread.raw(), MPFR_RNDD);
  mpfr_add(c_hi.raw(), c_hi.raw(), spread.raw(), MPFR_RNDU);
  mpfr_sub(s_lo.raw(), s_lo.raw(), spread.raw(), MPFR_RNDD);
  mpfr_add(s_hi.raw(), s_hi.raw(), spread.raw(), MPFR_RNDU);
  UnitComplexApprox u{clamp_unit(RealInterval::from_bounds(std::move(c_lo), std::move(c_hi))),
                      clamp_unit(RealInterval::from_bounds(std::move(s_lo), std::move(s_hi)))};
  u.re = u.re.rounded(out_precision);
  u.im = u.im.rounded(out_precision);
  return u;
}

void check_width(const UnitComplexApprox& u, unsigned precision) {
  const BigRational bound = pow2(3 - static_cast<long>(precision));
  if (u.re.width().compare(bound) > 0 || u.im.width().compare(bound) > 0) {
    throw PrecisionInsufficient("unit_eval: enclosure-too-wide for the requested precision");
  }
}

}  // namespace

UnitComplexApprox unit_eval(const Turn& t, unsigned precision) {
  if (precision < kMinPrecision) throw DomainError("unit_eval requires precision >= 16");
  const unsigned w = precision + 20;
  if (t.is_exact()) {
    const BigRational& q = t.exact_value();
    if (q == 0) return exact_unit(1, 0, precision);
    if (q == BigRational(1, 2)) return exact_unit(-1, 0, precision);
    if (q == BigRational(1, 4)) return exact_unit(0, 1, precision);
    if (q == BigRational(3, 4)) return exact_unit(0, -1, precision);
    // Evaluate the upper half as the conjugate of the lower half so that
    // unit_eval(1 - t) == conj(unit_eval(t)) holds bit for bit.
    if (q > BigRational(1, 2)) {
      return unit_eval(Turn::exact(BigRational(1) - q), precision).conj();
    }
    const RealInterval angle = RealInterval::from_int(2, w) * RealInterval::pi(w) * RealInterval::exact(q, w);
    UnitComplexApprox u = unit_from_angle(angle, precision);
    check_width(u, precision);
    return u;
  }
  const RealInterval angle = RealInterval::from_int(2, w) * RealInterval::pi(w) * t.as_interval(w);
  UnitComplexApprox u = unit_from_angle(angle, precision);
  check_width(u, precision);
  return u;
}

}  // namespace orbitlab

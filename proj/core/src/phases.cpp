#include "orbitlab/phases.hpp"

#include <algorithm>
#include <cmath>

namespace orbitlab {

// ----------------------------------------------------------- SymbolicCoeff

SymbolicCoeff SymbolicCoeff::rational(const BigRational& q) {
  SymbolicCoeff c;
  c.set("1", q);
  return c;
}

SymbolicCoeff SymbolicCoeff::symbol(const std::string& name, const BigRational& q) {
  SymbolicCoeff c;
  c.set(name, q);
  return c;
}

BigRational SymbolicCoeff::get(const std::string& name) const {
  const auto it = coords_.find(name);
  return it == coords_.end() ? BigRational(0) : it->second;
}

void SymbolicCoeff::set(const std::string& name, const BigRational& q) {
  BigRational v = q;
  v.canonicalize();
  if (v == 0) {
    coords_.erase(name);
  } else {
    coords_[name] = v;
  }
}

bool SymbolicCoeff::in_pi_q() const {
  return std::all_of(coords_.begin(), coords_.end(), [](const auto& kv) { return kv.first == "pi"; });
}

bool SymbolicCoeff::is_rational() const {
  return std::all_of(coords_.begin(), coords_.end(), [](const auto& kv) { return kv.first == "1"; });
}

RealInterval SymbolicCoeff::enclose(unsigned precision, const SymbolRegistry& symbols) const {
  RealInterval s = RealInterval::from_int(0, precision);
  for (const auto& [name, q] : coords_) {
    const RealInterval qi = RealInterval::exact(q, precision);
    s = s + (name == "1" ? qi : qi * symbols.enclose(name, precision));
  }
  return s;
}

std::string SymbolicCoeff::to_string() const {
  if (coords_.empty()) return "0";
  std::string s;
  for (const auto& [name, q] : coords_) {
    if (!s.empty()) s += " + ";
    s += name == "1" ? orbitlab::to_string(q) : "(" + orbitlab::to_string(q) + ")*" + name;
  }
  return s;
}

SymbolicCoeff operator+(const SymbolicCoeff& a, const SymbolicCoeff& b) {
  SymbolicCoeff out = a;
  for (const auto& [name, q] : b.coords_) out.set(name, out.get(name) + q);
  return out;
}

SymbolicCoeff operator-(const SymbolicCoeff& a, const SymbolicCoeff& b) {
  SymbolicCoeff out = a;
  for (const auto& [name, q] : b.coords_) out.set(name, out.get(name) - q);
  return out;
}

SymbolicCoeff operator*(const BigRational& s, const SymbolicCoeff& a) {
  SymbolicCoeff out;
  if (s == 0) return out;
  for (const auto& [name, q] : a.coords_) out.coords_[name] = s * q;
  return out;
}

// ------------------------------------------------------------ SymbolicPoly

void SymbolicPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

SymbolicPoly SymbolicPoly::from_coeffs(std::vector<SymbolicCoeff> coeffs, bool allow_constant) {
  SymbolicPoly p;
  p.coeffs_ = std::move(coeffs);
  p.allow_constant_ = allow_constant;
  p.trim();
  if (!allow_constant && p.has_constant()) throw RuleViolation("polynomial must not have a constant term");
  return p;
}

SymbolicCoeff SymbolicPoly::coeff(int d) const {
  if (d < 0 || d > degree()) return {};
  return coeffs_[static_cast<std::size_t>(d)];
}

SymbolicCoeff SymbolicPoly::eval(const BigRational& t) const {
  SymbolicCoeff acc;
  for (int d = degree(); d >= 0; --d) acc = t * acc + coeffs_[static_cast<std::size_t>(d)];
  return acc;
}

std::string SymbolicPoly::to_string() const {
  if (coeffs_.empty()) return "0";
  std::string s;
  for (int d = degree(); d >= 0; --d) {
    const auto& c = coeffs_[static_cast<std::size_t>(d)];
    if (c.is_zero()) continue;
    if (!s.empty()) s += " + ";
    s += "(" + c.to_string() + ")";
    if (d >= 1) s += "*t";
    if (d >= 2) s += "^" + std::to_string(d);
  }
  return s;
}

SymbolicPoly operator+(const SymbolicPoly& a, const SymbolicPoly& b) {
  SymbolicPoly out;
  out.allow_constant_ = a.allow_constant_ || b.allow_constant_;
  out.coeffs_.resize(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t d = 0; d < out.coeffs_.size(); ++d) {
    if (d < a.coeffs_.size()) out.coeffs_[d] = out.coeffs_[d] + a.coeffs_[d];
    if (d < b.coeffs_.size()) out.coeffs_[d] = out.coeffs_[d] + b.coeffs_[d];
  }
  out.trim();
  return out;
}

SymbolicPoly operator*(const BigRational& s, const SymbolicPoly& a) {
  SymbolicPoly out = a;
  for (auto& c : out.coeffs_) c = s * c;
  out.trim();
  return out;
}

namespace {

SymbolicCoeff coeff_product(const SymbolicCoeff& a, const SymbolicCoeff& b) {
  if (a.is_rational()) return a.get("1") * b;
  if (b.is_rational()) return b.get("1") * a;
  throw ParseError("product of two irrational symbols leaves the linear span");
}

SymbolicPoly poly_product(const SymbolicPoly& a, const SymbolicPoly& b) {
  if (a.degree() < 0 || b.degree() < 0) return SymbolicPoly::from_coeffs({}, true);
  std::vector<SymbolicCoeff> c(static_cast<std::size_t>(a.degree() + b.degree() + 1));
  for (int i = 0; i <= a.degree(); ++i) {
    for (int j = 0; j <= b.degree(); ++j) {
      c[static_cast<std::size_t>(i + j)] = c[static_cast<std::size_t>(i + j)] + coeff_product(a.coeff(i), b.coeff(j));
    }
  }
  return SymbolicPoly::from_coeffs(std::move(c), true);
}

std::optional<BigRational> rational_constant(const SymbolicPoly& p) {
  if (p.degree() > 0) return std::nullopt;
  const SymbolicCoeff c = p.coeff(0);
  if (!c.is_rational()) return std::nullopt;
  return c.get("1");
}

SymbolicPoly to_poly(const ExprNode& node) {
  using K = ExprNode::Kind;
  switch (node.kind) {
    case K::Number:
      return SymbolicPoly::from_coeffs({SymbolicCoeff::rational(node.number)}, true);
    case K::Symbol:
      return SymbolicPoly::from_coeffs({SymbolicCoeff::symbol(node.name)}, true);
    case K::Variable:
      return SymbolicPoly::from_coeffs({SymbolicCoeff(), SymbolicCoeff::rational(1)}, true);
    case K::Neg:
      return BigRational(-1) * to_poly(*node.args[0]);
    case K::Add:
      return to_poly(*node.args[0]) + to_poly(*node.args[1]);
    case K::Sub:
      return to_poly(*node.args[0]) + BigRational(-1) * to_poly(*node.args[1]);
    case K::Mul:
      return poly_product(to_poly(*node.args[0]), to_poly(*node.args[1]));
    case K::Div: {
      const auto d = rational_constant(to_poly(*node.args[1]));
      if (!d || *d == 0) throw ParseError("polynomial division needs a nonzero rational divisor");
      return BigRational(1 / *d) * to_poly(*node.args[0]);
    }
    case K::Pow: {
      const auto e = rational_constant(to_poly(*node.args[1]));
      if (!e || e->get_den() != 1 || *e < 0 || *e > 64) {
        throw ParseError("polynomial exponents must be integers in [0, 64]");
      }
      const SymbolicPoly base = to_poly(*node.args[0]);
      SymbolicPoly r = SymbolicPoly::from_coeffs({SymbolicCoeff::rational(1)}, true);
      for (long i = 0; i < e->get_num().get_si(); ++i) r = poly_product(r, base);
      return r;
    }
    case K::Call:
      throw ParseError("function '" + node.name + "' is not allowed in a polynomial");
  }
  throw ParseError("unsupported polynomial expression");
}

}  // namespace

SymbolicPoly SymbolicPoly::parse(std::string_view text, bool allow_constant, const SymbolRegistry& symbols) {
  const RealExpr e = RealExpr::parse(text, "t", symbols);
  SymbolicPoly p = to_poly(e.root());
  return from_coeffs(p.coeffs_, allow_constant);
}

std::pair<SymbolicCoeff, SymbolicPoly> poly_shift(const SymbolicPoly& P, std::int64_t m) {
  if (P.has_constant()) throw RuleViolation("poly_shift requires a polynomial without constant term");
  const BigRational mq(BigInt(std::to_string(m)));
  const SymbolicCoeff Pm = P.eval(mq);
  std::vector<SymbolicCoeff> q(static_cast<std::size_t>(std::max(P.degree(), 1)));
  for (int d = 2; d <= P.degree(); ++d) {
    BigInt binom = 1;  // C(d, j), built incrementally
    for (int j = 1; j <= d - 1; ++j) {
      binom = binom * (d - j + 1) / j;
      const BigRational w = BigRational(binom) * pow_int(mq, static_cast<unsigned long>(d - j));
      q[static_cast<std::size_t>(j)] = q[static_cast<std::size_t>(j)] + w * P.coeff(d);
    }
  }
  return {Pm, SymbolicPoly::from_coeffs(std::move(q), false)};
}

// ------------------------------------------------------------ phase values

Turn direction_turn(const GaussianRational& u, unsigned precision) {
  if (u.is_zero()) throw DomainError("direction of the zero vector");
  if (u.im == 0) return Turn::exact(u.re > 0 ? BigRational(0) : BigRational(1, 2));
  if (u.re == 0) return Turn::exact(u.im > 0 ? BigRational(1, 4) : BigRational(3, 4));
  BigInt den;
  mpz_lcm(den.get_mpz_t(), u.re.get_den_mpz_t(), u.im.get_den_mpz_t());
  const BigInt a = u.re.get_num() * (den / u.re.get_den());
  const BigInt b = u.im.get_num() * (den / u.im.get_den());
  const unsigned exact_bits =
      static_cast<unsigned>(std::max(mpz_sizeinbase(a.get_mpz_t(), 2), mpz_sizeinbase(b.get_mpz_t(), 2)));
  const unsigned w = precision + 16;
  Real x(exact_bits + 2);
  Real y(exact_bits + 2);
  mpfr_set_z(x.raw(), a.get_mpz_t(), MPFR_RNDN);
  mpfr_set_z(y.raw(), b.get_mpz_t(), MPFR_RNDN);
  Real lo(w);
  Real hi(w);
  mpfr_atan2(lo.raw(), y.raw(), x.raw(), MPFR_RNDD);
  mpfr_atan2(hi.raw(), y.raw(), x.raw(), MPFR_RNDU);
  const RealInterval angle = RealInterval::from_bounds(std::move(lo), std::move(hi));
  return Turn::enclosure(angle / (RealInterval::from_int(2, w) * RealInterval::pi(w)));
}

UnitComplexApprox phase_unit(const PhaseValue& v, unsigned precision) {
  if (!v.direction) return unit_eval(v.turn, precision);
  const GaussianRational& u = *v.direction;
  const unsigned w = precision + 8;
  const RealInterval r = sqrt(RealInterval::exact(u.norm2(), w));
  UnitComplexApprox out{(RealInterval::exact(u.re, w) / r).rounded(precision),
                        (RealInterval::exact(u.im, w) / r).rounded(precision)};
  return out;
}

// ----------------------------------------------------------------- PhaseSeq

PhaseSeq PhaseSeq::slow_growth(const std::string& expr, bool radians) {
  return PhaseSeq(SlowGrowthPhase{RealExpr::parse(expr, "n"), radians});
}

PhaseSeq PhaseSeq::geometric(BigInt c, BigInt a, std::variant<DigitStream, BigRational> theta) {
  if (c < 1 || a < 2) throw DomainError("geometric phase needs c >= 1 and a >= 2");
  return PhaseSeq(GeometricPhase{std::move(c), std::move(a), std::move(theta)});
}

std::string PhaseSeq::kind() const {
  switch (v_.index()) {
    case 0:
      return "polynomial";
    case 1:
      return "slow_growth";
    case 2:
      return "geometric";
    case 3:
      return "patched";
    case 4:
      return "explicit";
    default:
      return "constant";
  }
}

namespace {

BigInt big(std::uint64_t v) { return BigInt(std::to_string(v)); }

void check_turn_width(const Turn& t, unsigned precision) {
  if (t.is_exact()) return;
  if (t.interval().width().compare(pow2(4 - static_cast<long>(precision))) > 0) {
    throw PrecisionInsufficient("phase enclosure wider than 2^{4-p}");
  }
}

// Evaluates `turn_of(w)` at growing working precision until the enclosure is
// narrow enough.
template <typename F>
Turn refine_turn(F&& turn_of, unsigned precision) {
  unsigned extra = 32;
  for (int attempt = 0; attempt < 8; ++attempt, extra *= 2) {
    try {
      Turn t = turn_of(precision + extra);
      if (t.is_exact()) return t;
      if (t.interval().width().compare(pow2(4 - static_cast<long>(precision))) <= 0) {
        return Turn::enclosure(t.interval().rounded(precision + 8));
      }
    } catch (const PrecisionInsufficient&) {
    }
  }
  throw PrecisionInsufficient("phase could not be enclosed at the requested precision");
}

Turn polynomial_turn(const SymbolicPoly& P, std::uint64_t n, unsigned precision) {
  const SymbolicCoeff v = P.eval(BigRational(big(n)));
  const BigRational half_pi_part = v.get("pi") / 2;
  SymbolicCoeff rest = v;
  rest.set("pi", 0);
  if (rest.is_zero()) return Turn::exact(half_pi_part);
  return refine_turn(
      [&](unsigned w) {
        const RealInterval t = rest.enclose(w) / (RealInterval::from_int(2, w) * RealInterval::pi(w)) +
                               RealInterval::exact(half_pi_part, w);
        return Turn::enclosure(t);
      },
      precision);
}

Turn slow_growth_turn(const SlowGrowthPhase& s, std::uint64_t n, unsigned precision) {
  const BigRational nq(big(n));
  if (const auto q = s.expr.try_exact(nq)) {
    if (!s.radians) return Turn::exact(*q);
    if (*q == 0) return Turn::exact(0);
  }
  return refine_turn(
      [&](unsigned w) {
        RealInterval v = s.expr.eval(nq, w);
        if (s.radians) v = v / (RealInterval::from_int(2, w) * RealInterval::pi(w));
        return Turn::enclosure(v);
      },
      precision);
}

// frac(c a^n q) for rational q.
Turn geometric_exact(const BigInt& c, const BigInt& a, std::uint64_t n, const BigRational& q) {
  BigInt r;
  mpz_powm(r.get_mpz_t(), a.get_mpz_t(), big(n).get_mpz_t(), q.get_den_mpz_t());
  r = r * c % q.get_den();
  r = r * q.get_num();
  mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), q.get_den_mpz_t());
  BigRational t(r, q.get_den());
  t.canonicalize();
  return Turn::exact(t);
}

Turn geometric_turn(const GeometricPhase& g, std::uint64_t n, unsigned precision) {
  if (const auto* q = std::get_if<BigRational>(&g.theta)) return geometric_exact(g.c, g.a, n, *q);
  const DigitStream& s = std::get<DigitStream>(g.theta);
  if (const auto q = s.rational_value()) return geometric_exact(g.c, g.a, n, *q);
  if (g.c == 1 && BigInt(s.base()) == g.a) return s.shifted(n, precision + 8);
  // theta in [P, P + b^{-t}] with t digits chosen so f(n) b^{-t} <= 2^{-(p+6)}.
  BigInt f;
  mpz_pow_ui(f.get_mpz_t(), g.a.get_mpz_t(), n);
  f *= g.c;
  const double bits_per_digit = std::log2(static_cast<double>(s.base()));
  const auto t = static_cast<std::uint64_t>(
      std::ceil((static_cast<double>(mpz_sizeinbase(f.get_mpz_t(), 2)) + precision + 8) / bits_per_digit));
  const BigRational P = s.prefix_value(t);
  BigInt bt;
  mpz_ui_pow_ui(bt.get_mpz_t(), s.base(), t);
  BigRational lo = BigRational(f) * P;
  lo -= BigRational(floor_of(lo));
  BigRational hi = lo + BigRational(f, bt);
  lo.canonicalize();
  hi.canonicalize();
  const unsigned w = precision + 8;
  return Turn::enclosure(hull(RealInterval::exact(lo, w), RealInterval::exact(hi, w)));
}

}  // namespace

PhaseValue phase_value(const PhaseSeq& s, std::uint64_t n, unsigned precision) {
  PhaseValue out;
  std::visit(
      [&](const auto& v) {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, PolynomialPhase>) {
          out.turn = polynomial_turn(v.poly, n, precision);
        } else if constexpr (std::is_same_v<V, SlowGrowthPhase>) {
          out.turn = slow_growth_turn(v, n, precision);
        } else if constexpr (std::is_same_v<V, GeometricPhase>) {
          out.turn = geometric_turn(v, n, precision);
        } else if constexpr (std::is_same_v<V, PatchedPhase>) {
          out = v.in_patch(n) ? v.patch_value(n) : phase_value(*v.base, n, precision);
        } else if constexpr (std::is_same_v<V, ExplicitPhase>) {
          if (n < v.start || n - v.start >= v.table.size()) {
            throw DomainError("explicit phase table has no entry for n=" + std::to_string(n));
          }
          out = v.table[n - v.start];
        } else {
          out.turn = v.turn;
        }
      },
      s.variant());
  check_turn_width(out.turn, precision);
  return out;
}

Turn phase_eval(const PhaseSeq& s, std::uint64_t n, unsigned precision) {
  return phase_value(s, n, precision).turn;
}

// ------------------------------------------------------- intro sequences

PhaseSeq align_sequence(const WeightedShift& T, const BlockVector& x, std::uint64_t N, std::uint64_t horizon,
                        unsigned precision) {
  ExplicitPhase table;
  table.start = 1;
  table.table.reserve(horizon);
  for (std::uint64_t n = 1; n <= horizon; ++n) {
    const GaussianRational c = orbit_coord(T, x, n, N);
    if (c.is_zero()) {
      table.table.push_back({Turn::exact(0), GaussianRational(1)});
    } else {
      const GaussianRational u = c.conj();
      table.table.push_back({direction_turn(u, precision), u});
    }
  }
  return PhaseSeq(std::move(table));
}

SignflipResult signflip_sequence(const WeightedShift& T, const BlockVector& x, std::uint64_t horizon,
                                 std::uint64_t min_window) {
  SignflipResult result;
  ExplicitPhase table;
  table.start = 1;
  const WeightedShift B = WeightedShift::unweighted();
  for (std::uint64_t n = 1; n <= horizon; ++n) {
    std::uint64_t K = std::max(auto_window(x, n, min_window), auto_window(x, 0, min_window));
    SignflipStep step;
    step.n = n;
    bool decided = false;
    WindowedVector v;
    WindowedVector y;
    BigRational x_hi;
    for (int attempt = 0; attempt < 6 && !decided; ++attempt, K = 2 * K + 16) {
      v = orbit_windowed(T, x, n, K);
      y = orbit_windowed(B, x, 0, K);
      BigRational x_lo = 0;
      for (const auto& [k, c] : y.head) x_lo += c.norm2();
      x_hi = x_lo + y.tail;
      std::tie(step.diff_sq_lo, step.diff_sq_hi) = distance_sq_exact(v, GaussianRational(1), y);
      // ||T^n x - x||^2 >= ||x||^2 / 4 decides lambda = 1 (boundary included).
      if (4 * step.diff_sq_lo >= x_hi) {
        step.lambda = 1;
        decided = true;
      } else if (4 * step.diff_sq_hi < x_lo) {
        step.lambda = -1;
        decided = true;
      }
    }
    if (!decided) throw AmbiguousSign("sign-flip comparison undecided at n=" + std::to_string(n));
    step.margin_lo = distance_sq_exact(v, GaussianRational(step.lambda), y).first;
    step.quarter_norm_hi = x_hi / 4;
    if (step.margin_lo < step.quarter_norm_hi) result.certified = false;
    const Turn t = Turn::exact(step.lambda == 1 ? BigRational(0) : BigRational(1, 2));
    table.table.push_back({t, GaussianRational(step.lambda)});
    result.steps.push_back(std::move(step));
  }
  result.sequence = PhaseSeq(std::move(table));
  return result;
}

}  // namespace orbitlab

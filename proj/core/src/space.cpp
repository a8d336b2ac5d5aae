#include "orbitlab/space.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>

namespace orbitlab {

// -------------------------------------------------------- GaussianRational

GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
  return {a.re + b.re, a.im + b.im};
}
GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
  return {a.re - b.re, a.im - b.im};
}
GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
GaussianRational operator*(const BigRational& s, const GaussianRational& z) { return {s * z.re, s * z.im}; }
bool operator==(const GaussianRational& a, const GaussianRational& b) { return a.re == b.re && a.im == b.im; }

GaussianRational GaussianRational::parse(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw ParseError("empty Gaussian rational literal");
  if (s.back() != 'i') return {parse_rational(s), 0};
  s.pop_back();
  // Split at the last sign that is not leading and not part of an exponent.
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  std::string re_part = split == std::string::npos ? "" : s.substr(0, split);
  std::string im_part = split == std::string::npos ? s : s.substr(split);
  if (im_part.empty() || im_part == "+") im_part = "1";
  if (im_part == "-") im_part = "-1";
  if (im_part[0] == '+') im_part.erase(0, 1);
  if (!im_part.empty() && im_part.back() == '*') im_part.pop_back();
  return {re_part.empty() ? BigRational(0) : parse_rational(re_part), parse_rational(im_part)};
}

std::string GaussianRational::to_string() const {
  if (im == 0) return orbitlab::to_string(re);
  const std::string im_text = orbitlab::to_string(abs(im)) + "i";
  if (re == 0) return im < 0 ? "-" + im_text : im_text;
  return orbitlab::to_string(re) + (im < 0 ? "-" : "+") + im_text;
}

// ------------------------------------------------------------ FiniteVector

FiniteVector FiniteVector::basis(std::uint64_t k) {
  FiniteVector v;
  v.set(k, BigRational(1));
  return v;
}

FiniteVector FiniteVector::from_coords(const std::vector<GaussianRational>& dense) {
  FiniteVector v;
  for (std::size_t k = 0; k < dense.size(); ++k) v.set(k, dense[k]);
  return v;
}

void FiniteVector::set(std::uint64_t k, const GaussianRational& v) {
  if (v.is_zero()) {
    coords_.erase(k);
  } else {
    coords_[k] = v;
  }
}

GaussianRational FiniteVector::at(std::uint64_t k) const {
  const auto it = coords_.find(k);
  return it == coords_.end() ? GaussianRational() : it->second;
}

std::optional<std::uint64_t> FiniteVector::max_index() const {
  if (coords_.empty()) return std::nullopt;
  return coords_.rbegin()->first;
}

BigRational FiniteVector::norm2() const {
  BigRational s = 0;
  for (const auto& [k, v] : coords_) s += v.norm2();
  return s;
}

FiniteVector FiniteVector::scaled(const BigRational& s) const {
  FiniteVector out;
  if (s == 0) return out;
  for (const auto& [k, v] : coords_) out.coords_[k] = s * v;
  return out;
}

FiniteVector FiniteVector::scaled(const GaussianRational& s) const {
  FiniteVector out;
  for (const auto& [k, v] : coords_) out.set(k, s * v);
  return out;
}

FiniteVector operator+(const FiniteVector& a, const FiniteVector& b) {
  FiniteVector out = a;
  for (const auto& [k, v] : b.coords_) out.set(k, out.at(k) + v);
  return out;
}

FiniteVector operator-(const FiniteVector& a, const FiniteVector& b) {
  FiniteVector out = a;
  for (const auto& [k, v] : b.coords_) out.set(k, out.at(k) - v);
  return out;
}

std::string FiniteVector::to_string() const {
  std::string s = "{";
  bool first = true;
  for (const auto& [k, v] : coords_) {
    if (!first) s += ", ";
    first = false;
    s += std::to_string(k) + ": " + v.to_string();
  }
  return s + "}";
}

// ----------------------------------------------------------- WeightedShift

WeightedShift WeightedShift::constant(const BigRational& w) {
  if (w <= 0) throw DomainError("shift weights must be positive");
  WeightedShift t;
  t.kind_ = Kind::Constant;
  t.pattern_ = {w};
  t.sup_ = w;
  return t;
}

WeightedShift WeightedShift::periodic(std::vector<BigRational> pattern) {
  if (pattern.empty()) throw DomainError("periodic weights need a nonempty pattern");
  for (const auto& w : pattern) {
    if (w <= 0) throw DomainError("shift weights must be positive");
  }
  WeightedShift t;
  t.kind_ = Kind::Periodic;
  t.sup_ = *std::max_element(pattern.begin(), pattern.end());
  t.pattern_ = std::move(pattern);
  return t;
}

WeightedShift WeightedShift::closed_form(const std::string& expr, std::optional<BigRational> sup_bound) {
  WeightedShift t;
  t.kind_ = Kind::ClosedForm;
  t.expr_text_ = expr;
  t.expr_ = std::make_shared<RealExpr>(RealExpr::parse(expr, "k"));
  t.sup_ = std::move(sup_bound);
  return t;
}

BigRational WeightedShift::weight(std::uint64_t k) const {
  if (k == 0) throw DomainError("weights are indexed from 1");
  switch (kind_) {
    case Kind::Constant:
      return pattern_[0];
    case Kind::Periodic:
      return pattern_[(k - 1) % pattern_.size()];
    case Kind::ClosedForm: {
      const auto w = expr_->try_exact(BigRational(BigInt(std::to_string(k))));
      if (!w) throw DomainError("closed-form weight is not rational at k=" + std::to_string(k));
      if (*w <= 0) throw DomainError("closed-form weight is not positive at k=" + std::to_string(k));
      if (sup_ && *w > *sup_) throw DomainError("closed-form weight exceeds its declared bound");
      return *w;
    }
  }
  return 0;
}

BigRational WeightedShift::product(std::uint64_t k, std::uint64_t n) const {
  switch (kind_) {
    case Kind::Constant:
      return pow_int(pattern_[0], n);
    case Kind::Periodic: {
      const std::uint64_t L = pattern_.size();
      BigRational cycle = 1;
      for (const auto& w : pattern_) cycle *= w;
      BigRational r = pow_int(cycle, n / L);
      for (std::uint64_t i = 0; i < n % L; ++i) r *= weight(k + 1 + i);
      return r;
    }
    case Kind::ClosedForm: {
      BigRational r = 1;
      for (std::uint64_t i = 1; i <= n; ++i) r *= weight(k + i);
      return r;
    }
  }
  return 0;
}

std::string WeightedShift::describe() const {
  switch (kind_) {
    case Kind::Constant:
      return "constant:" + to_string(pattern_[0]);
    case Kind::Periodic: {
      std::string s = "periodic:";
      for (std::size_t i = 0; i < pattern_.size(); ++i) s += (i ? "," : "") + to_string(pattern_[i]);
      return s;
    }
    case Kind::ClosedForm:
      return "closed_form:" + expr_text_;
  }
  return {};
}

// ------------------------------------------------------------- BlockVector

namespace {

BigInt to_bigint(std::uint64_t v) {
  BigInt z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return z;
}

std::uint64_t to_u64(const BigInt& z) {
  if (z < 0 || mpz_sizeinbase(z.get_mpz_t(), 2) > 64) throw DomainError("index does not fit in 64 bits");
  std::uint64_t v = 0;
  mpz_export(&v, nullptr, 1, sizeof(v), 0, 0, z.get_mpz_t());
  return v;
}

BigRational pow2_neg(const BigInt& e) {
  if (e < 0 || !e.fits_slong_p()) throw DomainError("block offset too large for an exact scale");
  return pow2(-e.get_si());
}

}  // namespace

struct BlockVector::State {
  struct Explicit {
    BigInt offset;
    BigRational scale;
    FiniteVector block;
  };
  std::vector<Explicit> blocks;
  std::optional<LazyBlocks> lazy;

  mutable std::mutex mu;
  mutable std::vector<BigInt> offsets;  // offsets[i] is block lazy->first + i
  mutable std::map<std::uint64_t, std::shared_ptr<const FiniteVector>> forced;

  BigInt offset_locked(std::uint64_t j) const {
    const std::uint64_t i = j - lazy->first;
    while (offsets.size() <= i) {
      const std::uint64_t jj = lazy->first + offsets.size();
      BigInt o = lazy->offset(jj);
      if (o < 0) throw RuleViolation("lazy block offset is negative");
      if (!offsets.empty() && o <= offsets.back()) throw RuleViolation("lazy block offsets must strictly increase");
      if (offsets.empty() && !blocks.empty() && o <= blocks.back().offset) {
        throw RuleViolation("lazy block offsets must exceed explicit offsets");
      }
      offsets.push_back(std::move(o));
    }
    return offsets[i];
  }

  // Lazy block indices whose offset is <= m.
  std::vector<std::uint64_t> lazy_upto(const BigInt& m) const {
    std::vector<std::uint64_t> out;
    if (!lazy) return out;
    std::lock_guard lock(mu);
    for (std::uint64_t j = lazy->first;; ++j) {
      if (offset_locked(j) > m) break;
      out.push_back(j);
    }
    return out;
  }

  std::shared_ptr<const FiniteVector> force(std::uint64_t j) const {
    {
      std::lock_guard lock(mu);
      auto it = forced.find(j);
      if (it != forced.end()) return it->second;
    }
    auto b = std::make_shared<const FiniteVector>(lazy->block(j));
    std::lock_guard lock(mu);
    return forced.emplace(j, std::move(b)).first->second;
  }

  BigInt offset_of(std::uint64_t j) const {
    std::lock_guard lock(mu);
    return offset_locked(j);
  }
};

BlockVector::BlockVector() : state_(std::make_shared<State>()) {}

BlockVector BlockVector::from_finite(const FiniteVector& v) {
  BlockVector x;
  x.add_block(0, 1, v);
  return x;
}

void BlockVector::add_block(const BigInt& offset, const BigRational& scale, FiniteVector block) {
  if (offset < 0) throw RuleViolation("block offsets must be nonnegative");
  if (!state_->blocks.empty() && offset <= state_->blocks.back().offset) {
    throw RuleViolation("block offsets must strictly increase");
  }
  if (state_->lazy) throw RuleViolation("explicit blocks must precede the lazy tail");
  state_->blocks.push_back({offset, scale, std::move(block)});
}

void BlockVector::set_lazy(LazyBlocks rule) {
  if (!rule.offset || !rule.block || !rule.width) throw RuleViolation("lazy blocks need offset, block and width rules");
  state_->lazy = std::move(rule);
  state_->offsets.clear();
  state_->forced.clear();
}

bool BlockVector::has_lazy() const { return state_->lazy.has_value(); }

const LazyBlocks* BlockVector::lazy() const { return state_->lazy ? &*state_->lazy : nullptr; }

std::vector<BlockRef> BlockVector::explicit_blocks() const {
  std::vector<BlockRef> out;
  for (const auto& b : state_->blocks) out.push_back({b.offset, b.scale, &b.block});
  return out;
}

BigInt BlockVector::lazy_offset(std::uint64_t j) const {
  if (!state_->lazy || j < state_->lazy->first) throw DomainError("no such lazy block");
  return state_->offset_of(j);
}

const FiniteVector& BlockVector::lazy_block(std::uint64_t j) const {
  if (!state_->lazy || j < state_->lazy->first) throw DomainError("no such lazy block");
  return *state_->force(j);
}

std::map<std::uint64_t, GaussianRational> BlockVector::coords_in(std::uint64_t lo, std::uint64_t hi) const {
  std::map<std::uint64_t, GaussianRational> out;
  if (lo > hi) return out;
  auto add_block = [&](const BigInt& offset, const BigRational& scale, const FiniteVector& block) {
    const BigInt lo_z = to_bigint(lo);
    const BigInt hi_z = to_bigint(hi);
    if (offset > hi_z) return;
    const std::uint64_t off = to_u64(offset);
    const std::uint64_t from = lo > off ? lo - off : 0;
    const auto& c = block.coords();
    for (auto it = c.lower_bound(from); it != c.end(); ++it) {
      const std::uint64_t m = off + it->first;
      if (m > hi || m < off) break;
      out[m] = out[m] + scale * it->second;
    }
  };
  for (const auto& b : state_->blocks) add_block(b.offset, b.scale, b.block);
  if (state_->lazy) {
    const BigInt lo_z = to_bigint(lo);
    for (std::uint64_t j : state_->lazy_upto(to_bigint(hi))) {
      const BigInt o = state_->offset_of(j);
      if (o + state_->lazy->width(j) < lo_z) continue;
      const auto block = state_->force(j);
      add_block(o, pow2_neg(o), *block);
    }
  }
  for (auto it = out.begin(); it != out.end();) {
    it = it->second.is_zero() ? out.erase(it) : std::next(it);
  }
  return out;
}

GaussianRational BlockVector::coord(std::uint64_t m) const {
  const auto c = coords_in(m, m);
  return c.empty() ? GaussianRational() : c.begin()->second;
}

std::optional<std::uint64_t> BlockVector::reach_below(std::uint64_t limit) const {
  std::optional<std::uint64_t> reach;
  auto consider = [&](const BigInt& offset, const FiniteVector& block) {
    if (const auto mi = block.max_index()) {
      const std::uint64_t end = to_u64(offset + to_bigint(*mi));
      reach = reach ? std::max(*reach, end) : end;
    }
  };
  const BigInt lim = to_bigint(limit);
  for (const auto& b : state_->blocks) {
    if (b.offset <= lim) consider(b.offset, b.block);
  }
  if (state_->lazy) {
    for (std::uint64_t j : state_->lazy_upto(lim)) consider(state_->offset_of(j), *state_->force(j));
  }
  return reach;
}

std::optional<std::uint64_t> BlockVector::finite_support_end() const {
  if (state_->lazy) return std::nullopt;
  std::optional<std::uint64_t> reach;
  for (const auto& b : state_->blocks) {
    if (const auto mi = b.block.max_index()) {
      const std::uint64_t end = to_u64(b.offset + to_bigint(*mi));
      reach = reach ? std::max(*reach, end) : end;
    }
  }
  return reach;
}

FiniteVector BlockVector::truncated(std::uint64_t upto) const {
  FiniteVector v;
  for (const auto& [m, c] : coords_in(0, upto)) v.set(m, c);
  return v;
}

// ------------------------------------------------------------------ orbits

GaussianRational orbit_coord(const WeightedShift& T, const BlockVector& x, std::uint64_t n, std::uint64_t k) {
  const GaussianRational c = x.coord(k + n);
  if (c.is_zero()) return c;
  return T.product(k, n) * c;
}

GaussianRational orbit_coord(const WeightedShift& T, const FiniteVector& x, std::uint64_t n, std::uint64_t k) {
  const GaussianRational c = x.at(k + n);
  if (c.is_zero()) return c;
  return T.product(k, n) * c;
}

namespace {

std::map<std::uint64_t, GaussianRational> orbit_head(const WeightedShift& T, const BlockVector& x, std::uint64_t n,
                                                     std::uint64_t K) {
  std::map<std::uint64_t, GaussianRational> head;
  const auto raw = x.coords_in(n, n + K);
  if (raw.empty()) return head;
  if (T.kind() == WeightedShift::Kind::Constant) {
    const BigRational w = T.product(0, n);
    for (const auto& [m, c] : raw) head.emplace(m - n, w * c);
  } else {
    for (const auto& [m, c] : raw) head.emplace(m - n, T.product(m - n, n) * c);
  }
  return head;
}

// Smallest B >= 0 with w <= 2^B.
long log2_ceiling(const BigRational& w) {
  if (w <= 1) return 0;
  long b = static_cast<long>(mpz_sizeinbase(w.get_num_mpz_t(), 2)) -
           static_cast<long>(mpz_sizeinbase(w.get_den_mpz_t(), 2)) - 1;
  if (b < 0) b = 0;
  while (pow2(b) < w) ++b;
  return b;
}

constexpr long kTailCap = 1024;

}  // namespace

std::vector<GaussianRational> orbit_window(const WeightedShift& T, const BlockVector& x, std::uint64_t n,
                                           std::uint64_t K) {
  std::vector<GaussianRational> out(K + 1);
  for (const auto& [k, c] : orbit_head(T, x, n, K)) out[k] = c;
  return out;
}

BigRational tail_norm_bound(const WeightedShift& T, const BlockVector& x, std::uint64_t n, std::uint64_t K) {
  const std::uint64_t cut = n + K;
  const BigInt cut_z = to_bigint(cut);

  // Exact part: every explicit coordinate and every lazy block that starts
  // inside the window, restricted to indices beyond the window.
  std::map<std::uint64_t, GaussianRational> beyond;
  bool explicit_below_lazy = true;
  std::optional<BigInt> first_lazy;
  if (const auto* lazy = x.lazy()) first_lazy = x.lazy_offset(lazy->first);
  for (const auto& b : x.explicit_blocks()) {
    const std::uint64_t off = to_u64(b.offset);
    for (const auto& [i, v] : b.block->coords()) {
      const std::uint64_t m = off + i;
      if (first_lazy && to_bigint(m) >= *first_lazy) explicit_below_lazy = false;
      if (m > cut) beyond[m] = beyond[m] + b.scale * v;
    }
  }
  std::uint64_t next_lazy = 0;
  const LazyBlocks* lazy = x.lazy();
  if (lazy) {
    next_lazy = lazy->first;
    while (x.lazy_offset(next_lazy) <= cut_z) {
      const BigInt o = x.lazy_offset(next_lazy);
      const std::uint64_t off = to_u64(o);
      const BigRational scale = pow2_neg(o);
      for (const auto& [i, v] : x.lazy_block(next_lazy).coords()) {
        const std::uint64_t m = off + i;
        if (m > cut) beyond[m] = beyond[m] + scale * v;
      }
      ++next_lazy;
    }
  }
  BigRational exact = 0;
  if (!beyond.empty()) {
    if (T.kind() == WeightedShift::Kind::Constant) {
      for (const auto& [m, v] : beyond) exact += v.norm2();
      const BigRational w = T.product(0, n);
      exact *= w * w;
    } else {
      for (const auto& [m, v] : beyond) {
        const BigRational w = T.product(m - n, n);
        exact += w * w * v.norm2();
      }
    }
  }
  if (!lazy) return exact;

  if (!T.sup_bound()) throw DomainError("unbounded: weights have no declared upper bound");
  if (!lazy->norm_coeff) throw DomainError("unbounded: lazy blocks declare no norm bound");
  const BigRational& c = *lazy->norm_coeff;
  const long B = log2_ceiling(*T.sup_bound());
  const BigInt limit = BigInt(B) * to_bigint(n) + kTailCap;
  const BigRational wn = B == 0 ? BigRational(1) : pow_int(*T.sup_bound(), n);

  // Unforced blocks j >= next_lazy: ||block part|| <= W^n 2^{-O_j} c j.
  BigRational sq_sum = 0;
  BigRational lin_sum = 0;
  std::uint64_t j = next_lazy;
  for (;; ++j) {
    const BigInt o = x.lazy_offset(j);
    if (o >= limit) break;
    const BigRational b = wn * pow2_neg(o) * c * BigRational(to_bigint(j));
    sq_sum += b * b;
    lin_sum += b;
  }
  // From j on, O_{j+i} - nB >= CAP + i, so the remaining terms are
  // dominated by c (j+i) 2^{-(CAP+i)}.
  const BigRational J(to_bigint(j));
  const BigRational cap_scale = pow2(-kTailCap);
  sq_sum += c * c * cap_scale * cap_scale *
            (BigRational(4, 3) * J * J + BigRational(8, 9) * J + BigRational(20, 27));
  lin_sum += c * cap_scale * (2 * J + 2);

  if (lazy->disjoint && explicit_below_lazy) return exact + sq_sum;
  const BigRational s = sqrt_upper(exact) + lin_sum;
  return s * s;
}

WindowedVector orbit_windowed(const WeightedShift& T, const BlockVector& x, std::uint64_t n, std::uint64_t K) {
  WindowedVector w;
  w.K = K;
  w.head = orbit_head(T, x, n, K);
  w.tail = tail_norm_bound(T, x, n, K);
  return w;
}

WindowedVector windowed(const FiniteVector& y, std::uint64_t K) {
  WindowedVector w;
  w.K = K;
  w.tail = 0;
  for (const auto& [k, v] : y.coords()) {
    if (k <= K) {
      w.head.emplace(k, v);
    } else {
      w.tail += v.norm2();
    }
  }
  return w;
}

std::uint64_t auto_window(const BlockVector& x, std::uint64_t n, std::uint64_t min_K, std::uint64_t guard) {
  const std::uint64_t limit = n + std::max(min_K, guard);
  const auto reach = x.reach_below(limit);
  if (!reach || *reach <= n + min_K) return min_K;
  return *reach - n;
}

namespace {

struct HeadSums {
  BigRational sv = 0;
  BigRational sy = 0;
  GaussianRational inner;  // sum v_k conj(y_k)
};

HeadSums head_sums(const WindowedVector& v, const WindowedVector& y) {
  if (v.K != y.K) throw DomainError("windowed vectors use different windows");
  HeadSums s;
  for (const auto& [k, c] : v.head) s.sv += c.norm2();
  for (const auto& [k, c] : y.head) {
    s.sy += c.norm2();
    const auto it = v.head.find(k);
    if (it != v.head.end()) s.inner = s.inner + it->second * c.conj();
  }
  return s;
}

BigRational combined_tail(const BigRational& a, const BigRational& b) {
  if (a == 0) return b;
  if (b == 0) return a;
  return 2 * (a + b);  // (sqrt a + sqrt b)^2 <= 2(a + b)
}

}  // namespace

RealInterval distance_sq(const WindowedVector& v, const UnitComplexApprox& phase, const WindowedVector& y) {
  const unsigned p = std::max(phase.re.precision(), phase.im.precision());
  if (phase.is_exact()) {
    // Rational point on the unit circle: evaluate exactly, round once.
    const GaussianRational lambda(phase.re.lo().to_rational(), phase.im.lo().to_rational());
    if (lambda.norm2() == 1) {
      auto [lo, hi] = distance_sq_exact(v, lambda, y);
      if (lo < 0) lo = 0;
      return RealInterval::from_bounds(Real::from_rational(lo, p, MPFR_RNDD), Real::from_rational(hi, p, MPFR_RNDU));
    }
  }
  const HeadSums s = head_sums(v, y);
  const RealInterval re_lambda_inner = phase.re * RealInterval::exact(s.inner.re, p) -
                                       phase.im * RealInterval::exact(s.inner.im, p);
  const RealInterval base = RealInterval::exact(s.sv + s.sy, p) - RealInterval::from_int(2, p) * re_lambda_inner;
  const RealInterval tail = RealInterval::exact(combined_tail(v.tail, y.tail), p);
  Real lo = base.lo();
  if (mpfr_sgn(lo.raw()) < 0) mpfr_set_zero(lo.raw(), 1);
  Real hi(p);
  mpfr_add(hi.raw(), base.hi().raw(), tail.hi().raw(), MPFR_RNDU);
  if (lo.compare(hi) > 0) hi = lo;
  return RealInterval::from_bounds(std::move(lo), std::move(hi));
}

std::pair<BigRational, BigRational> distance_sq_exact(const WindowedVector& v, const GaussianRational& lambda,
                                                      const WindowedVector& y) {
  if (lambda.norm2() != 1) throw DomainError("phase must have modulus one");
  const HeadSums s = head_sums(v, y);
  const GaussianRational li = lambda * s.inner;
  const BigRational lo = s.sv + s.sy - 2 * li.re;
  return {lo, lo + combined_tail(v.tail, y.tail)};
}

RealInterval certified_distance(const WeightedShift& T, const BlockVector& x, std::uint64_t n,
                                const UnitComplexApprox& phase, const FiniteVector& y, std::uint64_t K) {
  if (const auto mi = y.max_index(); mi && *mi > K) throw DomainError("window must cover the target support");
  return sqrt_clamped(distance_sq(orbit_windowed(T, x, n, K), phase, windowed(y, K)));
}

RealInterval certified_distance(const WeightedShift& T, const BlockVector& x, std::uint64_t n,
                                const UnitComplexApprox& phase, const BlockVector& y, std::uint64_t K) {
  return sqrt_clamped(
      distance_sq(orbit_windowed(T, x, n, K), phase, orbit_windowed(WeightedShift::unweighted(), y, 0, K)));
}

RealInterval chordal_distance(const Turn& a, const Turn& b, unsigned precision) {
  const Turn d = a.plus(b.negated(), precision + 16);
  const UnitComplexApprox u = unit_eval(d, precision);
  const unsigned p = u.re.precision();
  return sqrt_clamped(RealInterval::from_int(2, p) - RealInterval::from_int(2, p) * u.re);
}

RealInterval product_distance(const RealInterval& vector_distance, const std::vector<Turn>& phases,
                              const std::vector<Turn>& targets, unsigned precision) {
  if (phases.size() != targets.size()) throw DomainError("torus dimension mismatch");
  RealInterval d = vector_distance;
  for (std::size_t i = 0; i < phases.size(); ++i) d = max(d, chordal_distance(phases[i], targets[i], precision));
  return d;
}

BigRational sqrt_upper(const BigRational& q, unsigned precision) {
  if (q < 0) throw DomainError("sqrt of a negative rational");
  Real r = Real::from_rational(q, precision, MPFR_RNDU);
  mpfr_sqrt(r.raw(), r.raw(), MPFR_RNDU);
  return r.to_rational();
}

BigRational sqrt_lower(const BigRational& q, unsigned precision) {
  if (q < 0) throw DomainError("sqrt of a negative rational");
  Real r = Real::from_rational(q, precision, MPFR_RNDD);
  mpfr_sqrt(r.raw(), r.raw(), MPFR_RNDD);
  return r.to_rational();
}

}  // namespace orbitlab

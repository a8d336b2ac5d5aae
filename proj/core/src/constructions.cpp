#include "orbitlab/constructions.hpp"

#include <algorithm>
#include <limits>
#include <mutex>
#include <numeric>

namespace orbitlab {

namespace {

std::uint64_t to_u64_checked(const BigInt& z, const char* what) {
  if (z < 0 || !z.fits_ulong_p()) throw DomainError(std::string(what) + " out of range");
  return z.get_ui();
}

std::uint64_t totient(std::uint64_t t) {
  std::uint64_t result = t;
  for (std::uint64_t p = 2; p * p <= t; ++p) {
    if (t % p == 0) {
      while (t % p == 0) t /= p;
      result -= result / p;
    }
  }
  if (t > 1) result -= result / t;
  return result;
}

// Rationals of height exactly t, ascending.
const std::vector<BigRational>& height_class(std::uint64_t t) {
  static std::mutex mu;
  static std::map<std::uint64_t, std::vector<BigRational>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(t);
  if (it != cache.end()) return it->second;
  std::vector<BigRational> out;
  if (t == 0) {
    out.emplace_back(0);
  } else if (t == 1) {
    out = {BigRational(-1), BigRational(1)};
  } else {
    for (std::uint64_t q = 1; q < t; ++q) {
      if (std::gcd(t, q) != 1) continue;
      BigRational a(static_cast<unsigned long>(t), static_cast<unsigned long>(q));
      BigRational b(static_cast<unsigned long>(q), static_cast<unsigned long>(t));
      out.push_back(a);
      out.push_back(b);
      out.push_back(-a);
      out.push_back(-b);
    }
    std::sort(out.begin(), out.end());
  }
  return cache.emplace(t, std::move(out)).first->second;
}

std::uint64_t class_size(std::uint64_t t) {
  if (t == 0) return 1;
  if (t == 1) return 2;
  return 4 * totient(t);
}

// |R_h| = number of rationals of height <= h.
BigInt rationals_up_to(std::int64_t h) {
  BigInt total = 0;
  for (std::int64_t t = 0; t <= h; ++t) total += static_cast<unsigned long>(class_size(static_cast<std::uint64_t>(t)));
  return total;
}

std::uint64_t height_u64(const BigRational& q) { return to_u64_checked(rational_height(q), "rational height"); }

BigInt rational_index(const BigRational& q) {
  const std::uint64_t t = height_u64(q);
  const auto& cls = height_class(t);
  const auto pos = std::lower_bound(cls.begin(), cls.end(), q) - cls.begin();
  return rationals_up_to(static_cast<std::int64_t>(t) - 1) + static_cast<unsigned long>(pos);
}

BigRational rational_at(const BigInt& i) {
  BigInt before = 0;
  for (std::uint64_t t = 0;; ++t) {
    const BigInt size = static_cast<unsigned long>(class_size(t));
    if (i < before + size) return height_class(t)[BigInt(i - before).get_ui()];
    before += size;
  }
}

// Index of a Gaussian rational among those of height <= h: ordered by
// (height m, index of re, index of im).
BigInt gaussian_index(const GaussianRational& z) {
  const std::uint64_t hr = height_u64(z.re);
  const std::uint64_t hi = height_u64(z.im);
  const std::uint64_t m = std::max(hr, hi);
  const BigInt r0 = rationals_up_to(static_cast<std::int64_t>(m) - 1);
  const BigInt r = rationals_up_to(static_cast<std::int64_t>(m));
  const BigInt ia = rational_index(z.re);
  const BigInt ib = rational_index(z.im);
  if (m == 0) return 0;
  BigInt local;
  if (hr < m) {
    local = ia * (r - r0) + (ib - r0);
  } else {
    local = r0 * (r - r0) + (ia - r0) * r + ib;
  }
  return r0 * r0 + local;
}

GaussianRational gaussian_at(const BigInt& j) {
  if (j == 0) return {};
  std::uint64_t m = 1;
  while (true) {
    const BigInt r = rationals_up_to(static_cast<std::int64_t>(m));
    if (j < r * r) break;
    ++m;
  }
  const BigInt r0 = rationals_up_to(static_cast<std::int64_t>(m) - 1);
  const BigInt r = rationals_up_to(static_cast<std::int64_t>(m));
  BigInt local = j - r0 * r0;
  BigInt ia, ib;
  const BigInt low_block = r0 * (r - r0);
  if (local < low_block) {
    ia = local / (r - r0);
    ib = r0 + local % (r - r0);
  } else {
    local -= low_block;
    ia = r0 + local / r;
    ib = local % r;
  }
  return {rational_at(ia), rational_at(ib)};
}

BigInt pow_big(const BigInt& b, std::uint64_t e) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), b.get_mpz_t(), e);
  return out;
}

// Number of vectors of height <= h; C(-1) = 0.
BigInt count_up_to(std::int64_t h) {
  if (h < 0) return 0;
  const BigInt r = rationals_up_to(h);
  return pow_big(r * r, static_cast<std::uint64_t>(h) + 1);
}

}  // namespace

BigInt rational_height(const BigRational& q) {
  if (q == 0) return 0;
  BigInt p = abs(q.get_num());
  return std::max(p, BigInt(q.get_den()));
}

BigInt vector_height(const FiniteVector& v) {
  if (v.is_zero()) return 0;
  BigInt h = static_cast<unsigned long>(*v.max_index());
  for (const auto& [k, z] : v.coords()) {
    h = std::max({h, rational_height(z.re), rational_height(z.im)});
  }
  return h;
}

std::uint64_t height_of_index(const BigInt& k) {
  if (k < 1) throw DomainError("dense family index starts at 1");
  std::uint64_t h = 0;
  while (count_up_to(static_cast<std::int64_t>(h)) < k) ++h;
  return h;
}

FiniteVector height_enumeration(const BigInt& k) {
  const std::uint64_t h = height_of_index(k);
  if (h == 0) return {};
  const BigInt g = rationals_up_to(static_cast<std::int64_t>(h));
  const BigInt gh = g * g;
  const BigInt r1 = rationals_up_to(static_cast<std::int64_t>(h) - 1);
  const BigInt gl = r1 * r1;  // digits allowed in the lower set
  BigInt rank = k - count_up_to(static_cast<std::int64_t>(h) - 1) - 1;
  std::vector<BigInt> digits(h + 1);
  bool consistent = true;  // the prefix could still extend into the lower set
  for (std::uint64_t i = 0; i <= h; ++i) {
    const BigInt total = pow_big(gh, h - i);
    if (consistent) {
      const BigInt in_lower = i < h ? pow_big(gl, h - 1 - i) : BigInt(1);
      const BigInt allowed = i < h ? gl : BigInt(1);
      const BigInt per = total - in_lower;
      if (per > 0 && rank < allowed * per) {
        digits[i] = rank / per;
        rank %= per;
        continue;
      }
      rank -= allowed * per;
      digits[i] = allowed + rank / total;
      rank %= total;
      consistent = false;
    } else {
      digits[i] = rank / total;
      rank %= total;
    }
  }
  FiniteVector v;
  for (std::uint64_t i = 0; i <= h; ++i) v.set(i, gaussian_at(digits[i]));
  return v;
}

BigInt height_rank(const FiniteVector& v) {
  const std::uint64_t h = to_u64_checked(vector_height(v), "vector height");
  if (h == 0) return 1;
  const BigInt g = rationals_up_to(static_cast<std::int64_t>(h));
  const BigInt gh = g * g;
  const BigInt r1 = rationals_up_to(static_cast<std::int64_t>(h) - 1);
  const BigInt gl = r1 * r1;
  BigInt lex = 0;
  BigInt lower_before = 0;
  bool consistent = true;
  for (std::uint64_t i = 0; i <= h; ++i) {
    const BigInt d = gaussian_index(v.at(i));
    lex = lex * gh + d;
    if (!consistent) continue;
    const BigInt allowed = i < h ? gl : BigInt(1);
    const BigInt completions = i < h ? pow_big(gl, h - 1 - i) : BigInt(1);
    lower_before += std::min(d, allowed) * completions;
    if (d >= allowed) consistent = false;
  }
  return count_up_to(static_cast<std::int64_t>(h) - 1) + 1 + lex - lower_before;
}

DenseFamilySpec DenseFamilySpec::standard() {
  DenseFamilySpec s;
  s.support = [](std::uint64_t k) { return BigInt(static_cast<unsigned long>(k)); };
  s.norm = [](std::uint64_t k) { return BigRational(static_cast<unsigned long>(k)); };
  return s;
}

DenseFamilySpec DenseFamilySpec::with_support(std::function<BigInt(std::uint64_t)> support,
                                              std::string description) {
  DenseFamilySpec s = standard();
  s.support = std::move(support);
  s.support_rule = std::move(description);
  return s;
}

FiniteVector dense_family(const DenseFamilySpec& spec, std::uint64_t k) {
  if (k < 1) throw DomainError("dense family index starts at 1");
  FiniteVector v = height_enumeration(BigInt(static_cast<unsigned long>(k)));
  if (v.is_zero()) return v;
  if (BigInt(static_cast<unsigned long>(*v.max_index())) > spec.support(k)) return {};
  const BigRational r = spec.norm(k);
  if (r <= 0) throw RuleViolation("norm rule must be positive");
  const BigRational r2 = r * r;
  BigRational n2 = v.norm2();
  long e = 0;
  while (n2 > r2) {
    n2 /= 4;
    ++e;
  }
  return e == 0 ? v : v.scaled(pow2(-e));
}

std::optional<BigInt> dense_family_locate(const DenseFamilySpec& spec, const FiniteVector& v, const BigRational& eps,
                                          std::uint64_t limit) {
  auto close = [&](const FiniteVector& xk) {
    const BigRational d2 = (xk - v).norm2();
    return eps == 0 ? d2 == 0 : d2 < eps * eps;
  };
  const BigInt rank = height_rank(v);
  const std::uint64_t scan = rank.fits_ulong_p() ? std::min<std::uint64_t>(limit, rank.get_ui()) : limit;
  for (std::uint64_t k = 1; k <= scan; ++k) {
    if (close(dense_family(spec, k))) return BigInt(static_cast<unsigned long>(k));
  }
  if (rank.fits_ulong_p() && rank.get_ui() > scan && close(dense_family(spec, rank.get_ui()))) return rank;
  return std::nullopt;
}

// ----------------------------------------------------------- block vectors

BigRational spacing_majorant(std::uint64_t k) {
  return BigRational(static_cast<unsigned long>(k + 2)) * pow2(-static_cast<long>(k));
}

BigRational HcBlockVector::approach_bound(std::uint64_t k) const {
  constexpr long kCut = 256;
  const BigInt nk = offsets(k);
  BigRational sum = 0;
  for (std::uint64_t j = k + 1;; ++j) {
    const BigInt d = offsets(j) - nk;
    if (d > kCut) {
      // Offsets increase by at least 1 per block: sum_{i>=0} (j+i) 2^{-(d+i)} = 2^{-d} (2j + 2).
      sum += BigRational(static_cast<unsigned long>(2 * j + 2)) * pow2(-(kCut + 1));
      break;
    }
    sum += BigRational(static_cast<unsigned long>(j)) * pow2(-d.get_si());
  }
  sum.canonicalize();
  return sum;
}

HcBlockVector hc_block_vector(std::function<BigInt(std::uint64_t)> offsets, std::string offset_rule,
                              const DenseFamilySpec& family, std::uint64_t checked) {
  for (std::uint64_t k = 1; k <= checked; ++k) {
    const BigInt width = std::min(family.support(k), BigInt(static_cast<unsigned long>(height_of_index(k))));
    if (offsets(k + 1) <= offsets(k) + width) {
      throw RuleViolation("spacing-violation: n_" + std::to_string(k + 1) + " <= n_" + std::to_string(k) +
                          " + support width");
    }
  }
  if (offsets(1) < 0) throw RuleViolation("spacing-violation: negative offset");
  HcBlockVector hc;
  hc.family = family;
  hc.offsets = offsets;
  hc.offset_rule = offset_rule;
  LazyBlocks rule;
  rule.first = 1;
  rule.offset = offsets;
  rule.block = [family](std::uint64_t j) { return dense_family(family, j); };
  rule.width = [family](std::uint64_t j) {
    return std::min(family.support(j), BigInt(static_cast<unsigned long>(height_of_index(j))));
  };
  rule.norm_coeff = BigRational(1);
  rule.disjoint = true;
  rule.description = "x = sum_j 2^{-n_j} S^{n_j} x_j, n_j = " + offset_rule + ", x_j: dense family (support " +
                     family.support_rule + ", norm <= " + family.norm_rule + ")";
  hc.x.set_lazy(std::move(rule));
  return hc;
}

// ----------------------------------------------------------------- bundles

AvoidanceCertificate Bundle::certify(const AvoidOptions& opt) const {
  AvoidOptions o = opt;
  if (adversarial && !o.in_A) {
    auto ad = std::make_shared<AdversarialPhase>(*adversarial);
    o.in_A = [ad](std::uint64_t n) { return ad->in_A(n); };
  }
  return avoid_certify(setup(), forbidden, delta, horizon, o);
}

std::pair<BigInt, BigInt> example44_endpoints(std::uint64_t k) {
  unsigned p = 64 + static_cast<unsigned>(10 * k);
  for (int attempt = 0; attempt < 8; ++attempt, p *= 2) {
    const RealInterval pi = RealInterval::pi(p);
    const RealInterval base = RealInterval::from_int(static_cast<long>(2 * k), p) * pi;
    const RealInterval half = pi / RealInterval::from_int(2, p);
    const RealInterval left = exp(base - half);
    const RealInterval right = exp(base + half);
    const BigInt a_lo = ceil_of(left.lo().to_rational());
    const BigInt a_hi = ceil_of(left.hi().to_rational());
    const BigInt b_lo = floor_of(right.lo().to_rational());
    const BigInt b_hi = floor_of(right.hi().to_rational());
    if (a_lo == a_hi && b_lo == b_hi) return {a_lo, b_lo};
  }
  throw PrecisionInsufficient("endpoint rounding for k = " + std::to_string(k));
}

namespace {

// Memoized endpoint table shared by the lazy rules of one bundle.
struct EndpointCache {
  std::mutex mu;
  std::map<std::uint64_t, std::pair<BigInt, BigInt>> table;

  std::pair<BigInt, BigInt> get(std::uint64_t k) {
    {
      std::lock_guard<std::mutex> lock(mu);
      auto it = table.find(k);
      if (it != table.end()) return it->second;
    }
    auto v = example44_endpoints(k);
    std::lock_guard<std::mutex> lock(mu);
    table.emplace(k, v);
    return v;
  }
};

}  // namespace

Bundle example44_assemble(std::uint64_t horizon) {
  if (horizon < 1) throw DomainError("horizon must be >= 1");
  auto ends = std::make_shared<EndpointCache>();
  auto support = [ends](std::uint64_t j) {
    const BigInt s = ends->get(j + 1).first - ends->get(j).second - 1;
    if (s < 0) throw RuleViolation("gap condition a_{j+1} - b_j >= 1 fails at j = " + std::to_string(j));
    return s;
  };
  const DenseFamilySpec family = DenseFamilySpec::with_support(support, "a_{k+1} - b_k - 1");
  auto offsets = [ends](std::uint64_t j) { return ends->get(j * j).second; };
  HcBlockVector hc = hc_block_vector(offsets, "b_{k^2}", family, 4);

  Bundle b;
  b.name = "example44";
  b.T = WeightedShift::constant(2);
  b.x = hc.x;
  b.phase = PhaseSeq::constant(Turn::exact(0));
  b.torus = {PhaseSeq::slow_growth("log(n)", true)};
  b.forbidden.vector = FiniteVector::basis(0);
  b.forbidden.torus = {Turn::exact(0)};
  b.delta = BigRational(99, 100);
  b.horizon = horizon;
  b.blocks = hc;
  const auto [a1, b1] = ends->get(1);
  b.provenance = {{"T", "2B"},
                  {"x", hc.offset_rule + "; family support " + family.support_rule + ", norm <= k"},
                  {"torus", "log(n) radians"},
                  {"a_1", a1.get_str()},
                  {"b_1", b1.get_str()},
                  {"forbidden", "(e_0, 1)"},
                  {"delta", "99/100"}};
  return b;
}

bool in_patch(const std::function<BigInt(std::uint64_t)>& offsets, std::uint64_t n) {
  const BigInt nn = static_cast<unsigned long>(n);
  for (std::uint64_t k = 1;; ++k) {
    const BigInt nk = offsets(k);
    if (nk > nn) return false;
    if (nn <= nk + static_cast<unsigned long>(k)) return true;
  }
}

namespace {

// Patch windows [n_k, n_k + k] with offsets cached up to the largest query.
struct PatchIndex {
  std::function<BigInt(std::uint64_t)> offsets;
  std::mutex mu;
  std::vector<std::uint64_t> starts;  // starts[k - 1] = n_k while it fits in 64 bits
  bool exhausted = false;

  bool contains(std::uint64_t n) {
    std::lock_guard<std::mutex> lock(mu);
    while (!exhausted && (starts.empty() || starts.back() <= n)) {
      const BigInt next = offsets(starts.size() + 1);
      if (!next.fits_ulong_p()) {
        exhausted = true;
        break;
      }
      starts.push_back(next.get_ui());
    }
    auto it = std::upper_bound(starts.begin(), starts.end(), n);
    if (it == starts.begin()) return false;
    const std::uint64_t k = static_cast<std::uint64_t>(it - starts.begin());
    return n <= starts[k - 1] + k;
  }
};

}  // namespace

Bundle prop53_assemble(const PhaseSeq& g, std::function<BigInt(std::uint64_t)> offsets, std::string offset_rule,
                       std::uint64_t horizon) {
  constexpr std::uint64_t kChecked = 2000;
  BigRational prev_ratio;
  for (std::uint64_t k = 1; k <= kChecked; ++k) {
    const BigInt nk = offsets(k);
    if (offsets(k + 1) <= nk + static_cast<unsigned long>(k + 1)) {
      throw RuleViolation("rule n_{k+1} > n_k + (k+1) fails at k = " + std::to_string(k));
    }
    if (nk <= 0) throw RuleViolation("offsets must be positive");
    BigRational ratio(BigInt(static_cast<unsigned long>(k * k)), nk);
    ratio.canonicalize();
    if (k > 1 && ratio >= prev_ratio) {
      throw RuleViolation("k^2 / n_k is not decreasing at k = " + std::to_string(k));
    }
    prev_ratio = ratio;
  }
  const WeightedShift T = WeightedShift::constant(2);
  HcBlockVector hc = hc_block_vector(offsets, offset_rule, DenseFamilySpec::standard());

  auto index = std::make_shared<PatchIndex>();
  index->offsets = offsets;
  PatchedPhase patched;
  patched.base = std::make_shared<const PhaseSeq>(g);
  patched.in_patch = [index](std::uint64_t n) { return index->contains(n); };
  BlockVector x = hc.x;
  patched.patch_value = [T, x](std::uint64_t n) {
    const GaussianRational c = orbit_coord(T, x, n, 0);
    if (c.is_zero()) return PhaseValue{Turn::exact(0), GaussianRational(1)};
    const GaussianRational u = c.conj();
    return PhaseValue{direction_turn(u, default_precision()), u};
  };
  patched.description = "g off [n_k, n_k + k], argument of conj((T^n x)_0) on it; n_k = " + offset_rule;

  Bundle b;
  b.name = "prop53";
  b.T = T;
  b.x = hc.x;
  b.phase = PhaseSeq(std::move(patched));
  b.forbidden.vector = FiniteVector::basis(0).scaled(BigRational(-1));
  b.delta = BigRational(99, 100);
  b.horizon = horizon;
  b.blocks = hc;
  b.patch_offsets = offsets;
  b.provenance = {{"T", "2B"},
                  {"x", "n_k = " + offset_rule + "; family support k, norm <= k"},
                  {"g", g.kind()},
                  {"forbidden", "-e_0"},
                  {"delta", "99/100"}};
  return b;
}

Bundle prop53_assemble(std::uint64_t horizon) {
  const PhaseSeq gphase = PhaseSeq::slow_growth("n*phi", false);
  auto cube = [](std::uint64_t k) {
    const BigInt kk = static_cast<unsigned long>(k);
    return BigInt(kk * kk * kk);
  };
  Bundle b = prop53_assemble(gphase, cube, "k^3", horizon);
  b.provenance["g"] = "n*phi (turns)";
  return b;
}

Bundle prop41_assemble(const GeometricDescriptor& f, std::optional<std::uint64_t> N, std::uint64_t horizon) {
  if (f.c < 1 || f.a < 2) throw RuleViolation("growth-violation: need f(n) = c a^n with c >= 1 and a >= 2");
  const std::uint64_t target = N ? *N : minimal_target_index(f.a);
  if (target < 1) throw RuleViolation("target index N must be >= 1");
  auto square = [](std::uint64_t k) {
    const BigInt kk = static_cast<unsigned long>(k);
    return BigInt(kk * kk);
  };
  HcBlockVector hc = hc_block_vector(square, "k^2", DenseFamilySpec::standard());
  const WeightedShift T = WeightedShift::constant(2);
  AdversarialPhase ad = adversarial_theta(T, hc.x, f, target, horizon);

  Bundle b;
  b.name = "prop41";
  b.T = T;
  b.x = hc.x;
  b.phase = ad.phase();
  b.forbidden.vector = FiniteVector::basis(target);
  b.delta = BigRational(49, 100);
  b.N = target;
  b.horizon = horizon;
  b.blocks = hc;
  b.provenance = {{"T", "2B"},
                  {"x", "n_k = k^2; family support k, norm <= k"},
                  {"f", f.c.get_str() + "*" + f.a.get_str() + "^n"},
                  {"N", std::to_string(target) + (N ? " (given)" : " (minimal)")},
                  {"theta", ad.provenance},
                  {"forbidden", "e_" + std::to_string(target)},
                  {"delta", "49/100"}};
  b.adversarial = std::move(ad);
  return b;
}

}  // namespace orbitlab

#include "orbitlab/density.hpp"

#include <algorithm>
#include <random>
#include <thread>

#include "orbitlab/equidistribution.hpp"

namespace orbitlab {

namespace {

// Runs fn(n) for n in [1, horizon] on up to `threads` workers over contiguous ranges.
template <typename Fn>
void for_range(std::uint64_t horizon, unsigned threads, Fn fn) {
  const std::uint64_t workers = std::max<std::uint64_t>(1, std::min<std::uint64_t>(threads, horizon));
  if (workers == 1) {
    for (std::uint64_t n = 1; n <= horizon; ++n) fn(n);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::uint64_t chunk = (horizon + workers - 1) / workers;
  for (std::uint64_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        const std::uint64_t lo = 1 + w * chunk;
        const std::uint64_t hi = std::min(horizon, lo + chunk - 1);
        for (std::uint64_t n = lo; n <= hi; ++n) fn(n);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

RealInterval lower_only(const BigRational& lo, unsigned precision) {
  return RealInterval::from_bounds(Real::from_rational(lo, precision, MPFR_RNDD), Real::infinity(precision));
}

std::uint64_t min_window(const ProductPoint& target, std::uint64_t K) {
  return std::max(K, target.vector.max_index().value_or(0));
}

}  // namespace

OrbitDistance orbit_distance(const OrbitSetup& s, std::uint64_t n, const ProductPoint& target, std::uint64_t K,
                             unsigned precision) {
  if (target.torus.size() != s.torus.size()) throw DomainError("target torus dimension does not match the phases");
  const PhaseValue pv = phase_value(s.phase, n, precision);
  const UnitComplexApprox unit = phase_unit(pv, precision);
  const std::uint64_t Keff = auto_window(s.x, n, min_window(target, K));
  const RealInterval vd = certified_distance(s.T, s.x, n, unit, target.vector, Keff);
  std::vector<Turn> turns;
  turns.reserve(s.torus.size());
  for (const auto& t : s.torus) turns.push_back(phase_eval(t, n, precision));
  return {product_distance(vd, turns, target.torus, precision), vd, pv.turn};
}

// ------------------------------------------------------------------ hits

HitReport hit_search(const OrbitSetup& s, const ProductPoint& target, const BigRational& epsilon,
                     std::uint64_t horizon, const HitOptions& opt) {
  if (epsilon <= 0) throw DomainError("hit_search needs epsilon > 0");
  struct Slot {
    std::optional<RealInterval> d;
    bool hit = false;
    bool contradiction = false;
  };
  std::vector<Slot> slots(horizon);
  for_range(horizon, opt.threads, [&](std::uint64_t n) {
    Slot& slot = slots[n - 1];
    try {
      slot.d = orbit_distance(s, n, target, opt.window, opt.precision).distance;
    } catch (const PrecisionInsufficient&) {
      return;
    } catch (const AmbiguousSign&) {
      return;
    }
    slot.hit = slot.d->hi().compare(epsilon) < 0;
    if (slot.hit && opt.recheck) {
      try {
        const RealInterval again = orbit_distance(s, n, target, opt.window, 2 * opt.precision).distance;
        const bool overlap = again.lo().compare(slot.d->hi()) <= 0 && slot.d->lo().compare(again.hi()) <= 0;
        slot.contradiction = !overlap || again.hi().compare(epsilon) >= 0;
      } catch (const Error&) {
        slot.contradiction = true;
      }
    }
  });
  HitReport rep;
  rep.target = target;
  rep.epsilon = epsilon;
  rep.horizon = horizon;
  rep.precision = opt.precision;
  for (std::uint64_t n = 1; n <= horizon; ++n) {
    const Slot& slot = slots[n - 1];
    if (!slot.d) {
      rep.indeterminate.push_back(n);
      continue;
    }
    if (slot.contradiction) {
      rep.contradictions.push_back(n);
    } else if (slot.hit) {
      rep.hits.push_back({n, *slot.d});
    }
    if (slot.d->hi().is_finite() && (!rep.best || slot.d->hi().compare(rep.best->distance.hi()) < 0)) {
      rep.best = HitEntry{n, *slot.d};
    }
  }
  return rep;
}

// ------------------------------------------------------------- avoidance

std::string to_string(AvoidRule r) {
  switch (r) {
    case AvoidRule::Torus:
      return "torus";
    case AvoidRule::ZeroCoordinate:
      return "zero-coordinate";
    case AvoidRule::Sign:
      return "sign";
    case AvoidRule::Distance:
      return "distance";
  }
  return "?";
}

std::string to_string(AvoidStatus s) {
  switch (s) {
    case AvoidStatus::Certified:
      return "CERTIFIED";
    case AvoidStatus::Failed:
      return "FAILED";
    case AvoidStatus::Indeterminate:
      return "INDETERMINATE";
  }
  return "?";
}

std::size_t AvoidanceCertificate::count(AvoidRule r) const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [r](const AvoidRow& x) { return x.rule == r; }));
}

namespace {

// Lower bound for ||lambda v - y||^2 from the coordinates on supp(y): a term
// contributes |y_k|^2 when v_k = 0 or Re(lambda v_k conj(y_k)) <= 0 is certain.
std::optional<std::pair<BigRational, bool>> coordinate_bound(const OrbitSetup& s, std::uint64_t n,
                                                             const FiniteVector& y, const PhaseValue& pv,
                                                             unsigned precision) {
  BigRational bound = 0;
  bool used_sign = false;
  std::optional<UnitComplexApprox> unit;
  for (const auto& [k, yk] : y.coords()) {
    const GaussianRational vk = orbit_coord(s.T, s.x, n, k);
    if (vk.is_zero()) {
      bound += yk.norm2();
      continue;
    }
    const GaussianRational w = vk * yk.conj();
    bool nonpositive = false;
    if (pv.direction) {
      nonpositive = (*pv.direction * w).re <= 0;
    } else {
      if (!unit) unit = phase_unit(pv, precision);
      const RealInterval re = unit->re * RealInterval::exact(w.re, precision) -
                              unit->im * RealInterval::exact(w.im, precision);
      nonpositive = re.hi().compare(BigRational(0)) <= 0;
    }
    if (nonpositive) {
      bound += yk.norm2();
      used_sign = true;
    }
  }
  if (bound == 0) return std::nullopt;
  return std::make_pair(bound, used_sign);
}

AvoidRow avoid_row(const OrbitSetup& s, std::uint64_t n, const ProductPoint& forbidden, const BigRational& delta,
                   const AvoidOptions& opt, unsigned& retries) {
  AvoidRow row;
  row.n = n;
  const unsigned p = opt.precision;
  if (opt.in_A) row.in_A = opt.in_A(n);

  if (!s.torus.empty()) {
    RealInterval chord = RealInterval::from_int(0, p);
    for (std::size_t i = 0; i < s.torus.size(); ++i) {
      chord = max(chord, chordal_distance(phase_eval(s.torus[i], n, p), forbidden.torus[i], p));
    }
    if (chord.lo().compare(delta) >= 0) {
      row.rule = AvoidRule::Torus;
      row.distance = lower_only(chord.lo().to_rational(), p);
      row.phase_turn = phase_eval(s.phase, n, p);
      return row;
    }
  }

  const PhaseValue pv = phase_value(s.phase, n, p);
  row.phase_turn = pv.turn;
  if (!forbidden.vector.is_zero()) {
    if (auto cb = coordinate_bound(s, n, forbidden.vector, pv, p)) {
      if (cb->first >= delta * delta) {
        row.rule = cb->second ? AvoidRule::Sign : AvoidRule::ZeroCoordinate;
        row.distance = lower_only(sqrt_lower(cb->first), p);
        return row;
      }
    }
  }

  row.rule = AvoidRule::Distance;
  unsigned q = p;
  for (unsigned attempt = 0;; ++attempt) {
    try {
      row.distance = orbit_distance(s, n, forbidden, 0, q).distance;
      if (row.distance.lo().compare(delta) >= 0 || row.distance.hi().compare(delta) < 0) return row;
    } catch (const PrecisionInsufficient&) {
      row.distance = RealInterval::whole_nonnegative(q);
    }
    if (attempt >= opt.max_retries) return row;
    q *= 2;
    ++retries;
  }
}

}  // namespace

AvoidanceCertificate avoid_certify(const OrbitSetup& s, const ProductPoint& forbidden, const BigRational& delta,
                                   std::uint64_t horizon, const AvoidOptions& opt) {
  if (delta <= 0) throw DomainError("avoid_certify needs delta > 0");
  if (forbidden.torus.size() != s.torus.size()) throw DomainError("forbidden torus dimension does not match the phases");
  std::vector<AvoidRow> rows(horizon);
  std::vector<unsigned> retries(horizon, 0);
  for_range(horizon, opt.threads, [&](std::uint64_t n) { rows[n - 1] = avoid_row(s, n, forbidden, delta, opt, retries[n - 1]); });

  AvoidanceCertificate cert;
  cert.forbidden = forbidden;
  cert.delta = delta;
  cert.horizon = horizon;
  for (std::uint64_t n = 1; n <= horizon; ++n) {
    AvoidRow& row = rows[n - 1];
    cert.precision_retries += retries[n - 1];
    const bool ok = row.distance.lo().compare(delta) >= 0;
    cert.rows.push_back(std::move(row));
    if (!ok) {
      cert.failure = cert.rows.back();
      cert.status = cert.failure->distance.hi().compare(delta) < 0 ? AvoidStatus::Failed : AvoidStatus::Indeterminate;
      break;
    }
  }
  return cert;
}

// --------------------------------------------------------- lower density

BigRational DensityCurve::lower_density_proxy() const {
  if (N == 0) return 0;
  return suffix_min[(N + 1) / 2 - 1];
}

DensityCurve lower_density_curve(const std::vector<std::uint64_t>& A, std::uint64_t N) {
  std::vector<char> member(N + 1, 0);
  for (std::uint64_t a : A) {
    if (a < 1 || a > N) throw DomainError("hit set must lie in [1, N]");
    member[a] = 1;
  }
  DensityCurve c;
  c.N = N;
  c.curve.reserve(N);
  std::uint64_t count = 0;
  for (std::uint64_t n = 1; n <= N; ++n) {
    count += member[n];
    BigRational v(static_cast<unsigned long>(count), static_cast<unsigned long>(n));
    v.canonicalize();
    c.curve.push_back(std::move(v));
  }
  c.suffix_min.resize(N);
  for (std::uint64_t i = N; i-- > 0;) {
    c.suffix_min[i] = (i + 1 == N) ? c.curve[i] : std::min(c.curve[i], c.suffix_min[i + 1]);
  }
  return c;
}

bool IndexClass::contains(std::uint64_t n) const {
  if (modulus == 0) throw DomainError("index class modulus must be positive");
  return n >= lo && (!hi || n <= *hi) && n % modulus == residue % modulus;
}

ShiftedUnionReport shifted_union(const std::vector<std::uint64_t>& A, std::uint64_t N,
                                 const std::vector<ShiftPart>& parts) {
  if (parts.empty()) throw RuleViolation("shifted_union needs at least one part");
  for (std::uint64_t n = 1; n <= N; ++n) {
    const bool covered = std::any_of(parts.begin(), parts.end(), [n](const ShiftPart& p) { return p.indices.contains(n); });
    if (!covered) throw RuleViolation("cover violation: index " + std::to_string(n) + " is in no I_j");
  }
  std::uint64_t max_shift = 0;
  for (const auto& p : parts) max_shift = std::max(max_shift, p.shift);
  const std::uint64_t limit = N + max_shift;
  std::vector<char> inB(limit + 1, 0);
  for (std::uint64_t a : A) {
    if (a < 1 || a > N) throw DomainError("A must lie in [1, N]");
    for (const auto& p : parts) {
      if (p.indices.contains(a) && a + p.shift >= 1) inB[a + p.shift] = 1;
    }
  }
  ShiftedUnionReport rep;
  rep.N = N;
  for (std::uint64_t b = 1; b <= limit; ++b) {
    if (inB[b]) rep.B.push_back(b);
  }
  rep.density_A = lower_density_curve(A, N);
  rep.density_B = lower_density_curve(rep.B, limit);
  return rep;
}

// ------------------------------------------------------ random rotations

PhaseSeq random_rotation(std::uint64_t seed, std::uint64_t horizon) {
  std::mt19937_64 rng(seed);
  ExplicitPhase e;
  e.start = 1;
  e.table.reserve(horizon);
  const BigRational denom(BigInt(1) << 64);
  for (std::uint64_t n = 1; n <= horizon; ++n) {
    const std::uint64_t u = rng();
    BigInt num;
    mpz_import(num.get_mpz_t(), 1, 1, sizeof(u), 0, 0, &u);
    BigRational t = BigRational(num) / denom;
    t.canonicalize();
    e.table.push_back({Turn::exact(t), std::nullopt});
  }
  return PhaseSeq(std::move(e));
}

RandomRotationReport random_rotation_experiment(const WeightedShift& T, const BlockVector& x,
                                                const ProductPoint& target, const BigRational& epsilon,
                                                std::uint64_t horizon, std::size_t samples, std::uint64_t seed,
                                                const HitOptions& opt) {
  if (!target.torus.empty()) throw DomainError("random rotations act on the vector part only");
  RandomRotationReport rep;
  rep.seed = seed;
  rep.horizon = horizon;
  rep.epsilon = epsilon;
  rep.metric_note = "d(L, M) = sum_n |l_n - m_n| / 2^n on the circle sequence space (metadata only)";
  std::size_t with_hit = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    OrbitSetup s{T, x, random_rotation(splitmix64(seed + i), horizon), {}};
    const HitReport hr = hit_search(s, target, epsilon, horizon, opt);
    rep.hits.push_back(hr.hits.size());
    rep.best.push_back(hr.best);
    if (!hr.hits.empty()) ++with_hit;
  }
  rep.hit_rate = samples == 0 ? 0.0 : static_cast<double>(with_hit) / static_cast<double>(samples);
  return rep;
}

}  // namespace orbitlab

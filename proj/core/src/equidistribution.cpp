#include "orbitlab/equidistribution.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

namespace orbitlab {

namespace {

BigInt big(std::uint64_t v) { return BigInt(std::to_string(v)); }

Turn frac_turn(const RealExpr& f, std::uint64_t n, unsigned precision) {
  const BigRational nq(big(n));
  if (const auto q = f.try_exact(nq)) return Turn::exact(*q);
  unsigned extra = 32;
  for (int attempt = 0; attempt < 8; ++attempt, extra *= 2) {
    try {
      const Turn t = Turn::enclosure(f.eval(nq, precision + extra));
      if (t.interval().width().compare(pow2(4 - static_cast<long>(precision))) <= 0) {
        return Turn::enclosure(t.interval().rounded(precision + 8));
      }
    } catch (const PrecisionInsufficient&) {
    }
  }
  throw PrecisionInsufficient("could not enclose frac(f(" + std::to_string(n) + "))");
}

}  // namespace

PointSample sample_sequence(const RealExpr& f, std::uint64_t N, unsigned precision) {
  PointSample s;
  s.points.reserve(N);
  for (std::uint64_t n = 1; n <= N; ++n) s.points.push_back(frac_turn(f, n, precision));
  return s;
}

PointSample sample_phases(const PhaseSeq& seq, std::uint64_t N, unsigned precision) {
  PointSample s;
  s.points.reserve(N);
  for (std::uint64_t n = 1; n <= N; ++n) s.points.push_back(phase_eval(seq, n, precision));
  return s;
}

// -------------------------------------------------------- star discrepancy

namespace {

DiscrepancyReport exact_discrepancy(const std::vector<BigRational>& pts, unsigned precision) {
  std::vector<BigRational> x = pts;
  std::sort(x.begin(), x.end());
  const BigRational N(big(x.size()));
  BigRational d = 0;
  for (std::size_t i = 1; i <= x.size(); ++i) {
    const BigRational a = BigRational(big(i)) / N - x[i - 1];
    const BigRational b = x[i - 1] - BigRational(big(i - 1)) / N;
    if (a > d) d = a;
    if (b > d) d = b;
  }
  d.canonicalize();
  DiscrepancyReport r;
  r.N = x.size();
  r.method = "exact-sorted";
  r.exact = d;
  r.dstar = RealInterval::exact(d, precision);
  return r;
}

DiscrepancyReport interval_discrepancy(const PointSample& s, unsigned p) {
  const std::size_t N = s.N();
  std::vector<Real> lo;
  std::vector<Real> hi;
  lo.reserve(N);
  hi.reserve(N);
  for (const Turn& t : s.points) {
    const RealInterval iv = t.as_interval(p);
    if (iv.hi().compare(BigRational(1)) >= 0) {
      // The enclosure wraps around 0: the true point can sit anywhere near either end.
      lo.emplace_back(p);
      hi.push_back(Real::from_rational(BigRational(1), p, MPFR_RNDU));
    } else {
      lo.push_back(iv.lo());
      hi.push_back(iv.hi());
    }
  }
  auto less = [](const Real& a, const Real& b) { return a.compare(b) < 0; };
  std::sort(lo.begin(), lo.end(), less);
  std::sort(hi.begin(), hi.end(), less);

  Real best_lo(p);
  Real best_hi(p);
  Real t(p);
  Real frac_i(p);
  for (std::size_t i = 1; i <= N; ++i) {
    // lower bound of max(i/N - x, x - (i-1)/N) over x in [lo_(i), hi_(i)]
    mpfr_set_ui(frac_i.raw(), static_cast<unsigned long>(i), MPFR_RNDN);
    mpfr_div_ui(frac_i.raw(), frac_i.raw(), static_cast<unsigned long>(N), MPFR_RNDD);
    mpfr_sub(t.raw(), frac_i.raw(), hi[i - 1].raw(), MPFR_RNDD);
    if (t.compare(best_lo) > 0) best_lo = t;
    mpfr_set_ui(frac_i.raw(), static_cast<unsigned long>(i - 1), MPFR_RNDN);
    mpfr_div_ui(frac_i.raw(), frac_i.raw(), static_cast<unsigned long>(N), MPFR_RNDU);
    mpfr_sub(t.raw(), lo[i - 1].raw(), frac_i.raw(), MPFR_RNDD);
    if (t.compare(best_lo) > 0) best_lo = t;
    // upper bound
    mpfr_set_ui(frac_i.raw(), static_cast<unsigned long>(i), MPFR_RNDN);
    mpfr_div_ui(frac_i.raw(), frac_i.raw(), static_cast<unsigned long>(N), MPFR_RNDU);
    mpfr_sub(t.raw(), frac_i.raw(), lo[i - 1].raw(), MPFR_RNDU);
    if (t.compare(best_hi) > 0) best_hi = t;
    mpfr_set_ui(frac_i.raw(), static_cast<unsigned long>(i - 1), MPFR_RNDN);
    mpfr_div_ui(frac_i.raw(), frac_i.raw(), static_cast<unsigned long>(N), MPFR_RNDD);
    mpfr_sub(t.raw(), hi[i - 1].raw(), frac_i.raw(), MPFR_RNDU);
    if (t.compare(best_hi) > 0) best_hi = t;
  }
  if (best_hi.compare(BigRational(1)) > 0) mpfr_set_ui(best_hi.raw(), 1, MPFR_RNDN);
  DiscrepancyReport r;
  r.N = N;
  r.method = "interval-order-statistics";
  r.dstar = RealInterval::from_bounds(std::move(best_lo), std::move(best_hi));
  return r;
}

}  // namespace

DiscrepancyReport star_discrepancy(const PointSample& s, unsigned precision) {
  if (s.N() == 0) throw DomainError("star discrepancy needs N >= 1");
  const bool all_exact = std::all_of(s.points.begin(), s.points.end(), [](const Turn& t) { return t.is_exact(); });
  if (all_exact) {
    std::vector<BigRational> x;
    x.reserve(s.N());
    for (const Turn& t : s.points) x.push_back(t.exact_value());
    return exact_discrepancy(x, precision);
  }
  return interval_discrepancy(s, precision);
}

std::vector<DiscrepancyReport> discrepancy_prefix_curve(const PointSample& s, const std::vector<std::size_t>& Ms,
                                                        unsigned precision) {
  std::vector<DiscrepancyReport> out;
  for (std::size_t M : Ms) {
    if (M == 0 || M > s.N()) throw DomainError("prefix length out of range");
    PointSample prefix;
    prefix.points.assign(s.points.begin(), s.points.begin() + static_cast<std::ptrdiff_t>(M));
    out.push_back(star_discrepancy(prefix, precision));
  }
  return out;
}

RealInterval weyl_sum(const PointSample& s, long h, unsigned precision) {
  if (h == 0) throw DomainError("Weyl sums need h != 0");
  if (s.N() == 0) throw DomainError("Weyl sums need N >= 1");
  const unsigned p = precision;
  RealInterval re = RealInterval::from_int(0, p);
  RealInterval im = RealInterval::from_int(0, p);
  for (const Turn& t : s.points) {
    Turn ht;
    if (t.is_exact()) {
      ht = Turn::exact(BigRational(h) * t.exact_value());
    } else {
      ht = Turn::enclosure(RealInterval::from_int(h, p + 16) * t.as_interval(p + 16));
    }
    const UnitComplexApprox u = unit_eval(ht, p);
    re = re + u.re;
    im = im + u.im;
  }
  RealInterval mod = sqrt_clamped(square(re) + square(im)) / RealInterval::from_int(static_cast<long>(s.N()), p);
  Real lo = mod.lo();
  Real hi = mod.hi();
  if (hi.compare(BigRational(1)) > 0) mpfr_set_ui(hi.raw(), 1, MPFR_RNDN);
  if (lo.compare(hi) > 0) lo = hi;
  return RealInterval::from_bounds(std::move(lo), std::move(hi));
}

// ------------------------------------------------------------------ Koksma

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string KoksmaSequence::describe() const {
  if (kind == KoksmaKind::Geometric) return "geometric:" + c.get_str() + "*" + a.get_str() + "^n";
  return "expression:" + (expr ? expr->text() : std::string());
}

std::size_t KoksmaReport::count_below(double eps) const {
  return static_cast<std::size_t>(std::count_if(samples.begin(), samples.end(), [&](const KoksmaSampleResult& s) {
    return s.report.dstar.hi().compare(BigRational(eps)) < 0;
  }));
}

namespace {

std::vector<BigInt> expression_values(const RealExpr& f, std::uint64_t N) {
  std::vector<BigInt> v;
  v.reserve(N);
  for (std::uint64_t n = 1; n <= N; ++n) {
    const auto q = f.try_exact(BigRational(big(n)));
    if (!q || q->get_den() != 1) throw DomainError("Koksma expressions must be integer valued (n=" + std::to_string(n) + ")");
    v.push_back(q->get_num());
  }
  return v;
}

BigRational dyadic_theta(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  BigInt u = 0;
  for (int i = 0; i < 2; ++i) {
    const std::uint64_t w = rng();
    u = u * BigInt("18446744073709551616") + BigInt(std::to_string(w));
  }
  BigRational q(u, BigInt(1) << 128);
  q.canonicalize();
  return q;
}

}  // namespace

KoksmaReport koksma_sample(const KoksmaSequence& f, const KoksmaOptions& opt) {
  if (opt.N == 0) throw DomainError("Koksma sampling needs N >= 1");
  KoksmaReport rep;
  rep.sequence = f.describe();
  rep.N = opt.N;
  rep.seed = opt.seed;

  std::vector<BigInt> values;
  if (f.kind == KoksmaKind::Geometric) {
    if (f.c < 1 || f.a < 2) throw RuleViolation("hypothesis-violated: geometric f needs c >= 1 and a >= 2");
    rep.min_gap = BigRational(f.c * f.a * (f.a - 1));
  } else {
    if (!f.expr) throw DomainError("expression sequence without an expression");
    values = expression_values(*f.expr, opt.N);
    std::vector<BigInt> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    if (sorted.size() < 2) {
      rep.min_gap = 1;
    } else {
      BigInt gap = sorted[1] - sorted[0];
      for (std::size_t i = 2; i < sorted.size(); ++i) gap = std::min<BigInt>(gap, sorted[i] - sorted[i - 1]);
      rep.min_gap = BigRational(gap);
    }
    if (rep.min_gap <= 0) throw RuleViolation("hypothesis-violated: f takes a value twice among the first N terms");
  }

  const std::size_t S = opt.forced_theta ? 1 : opt.samples;
  rep.samples.resize(S);
  auto run = [&](std::size_t i) {
    KoksmaSampleResult res;
    res.index = i;
    const std::uint64_t sub = splitmix64(opt.seed + i);
    PointSample pts;
    pts.points.reserve(opt.N);
    if (f.kind == KoksmaKind::Geometric) {
      std::variant<DigitStream, BigRational> theta;
      if (opt.forced_theta) {
        theta = *opt.forced_theta;
        res.theta_tag = "rational:" + to_string(*opt.forced_theta);
      } else {
        const unsigned base = f.a <= 36 ? static_cast<unsigned>(f.a.get_ui()) : 2U;
        DigitStream s = DigitStream::seeded(base, sub);
        res.theta_tag = s.tag();
        theta = s;
      }
      const PhaseSeq seq = PhaseSeq::geometric(f.c, f.a, theta);
      for (std::uint64_t n = 1; n <= opt.N; ++n) pts.points.push_back(phase_eval(seq, n, opt.precision));
    } else {
      const BigRational theta = opt.forced_theta ? *opt.forced_theta : dyadic_theta(sub);
      res.theta_tag = "rational:" + to_string(theta);
      for (const BigInt& v : values) pts.points.push_back(Turn::exact(BigRational(v) * theta));
    }
    res.report = star_discrepancy(pts, opt.precision);
    rep.samples[i] = std::move(res);
  };

  const unsigned threads = std::max(1U, std::min<unsigned>(opt.threads, static_cast<unsigned>(S)));
  if (threads == 1) {
    for (std::size_t i = 0; i < S; ++i) run(i);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i = t; i < S; i += threads) run(i);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  std::vector<double> his;
  for (const auto& s : rep.samples) his.push_back(s.report.dstar.hi().to_double(MPFR_RNDU));
  std::sort(his.begin(), his.end());
  for (double q : {0.0, 0.1, 0.5, 0.9, 1.0}) {
    const auto idx = static_cast<std::size_t>(std::max(0.0, std::ceil(q * static_cast<double>(his.size())) - 1));
    rep.quantiles.push_back(his[std::min(idx, his.size() - 1)]);
  }
  return rep;
}

}  // namespace orbitlab

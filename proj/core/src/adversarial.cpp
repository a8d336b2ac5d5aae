#include <algorithm>
#include <set>

#include "orbitlab/phases.hpp"

namespace orbitlab {

namespace {

BigInt big(std::uint64_t v) { return BigInt(std::to_string(v)); }

BigRational f_value(const GeometricDescriptor& f, std::uint64_t n) {
  BigInt p;
  mpz_pow_ui(p.get_mpz_t(), f.a.get_mpz_t(), n);
  return BigRational(f.c * p);
}

void check_descriptor(const GeometricDescriptor& f) {
  if (f.c < 1) throw RuleViolation("growth-violation: f(0) must be a positive integer");
  if (f.a < 2) throw RuleViolation("growth-violation: the ratio a must be an integer >= 2");
}

// sum_{j >= N+1} a^{-j} = a^{-N} / (a - 1).
BigRational geometric_tail(const BigInt& a, std::uint64_t N) {
  BigInt p;
  mpz_pow_ui(p.get_mpz_t(), a.get_mpz_t(), N);
  BigRational t(BigInt(1), p * (a - 1));
  t.canonicalize();
  return t;
}

enum class Membership { In, Out, Undecided };

// n is in A iff min_lambda ||lambda T^n x - e_N||^2 = ||T^n x||^2 + 1 - 2|c_N| < 1/4,
// i.e. 2|c_N| > ||T^n x||^2 + 3/4. ||T^n x||^2 lies in [S, S + tail].
Membership membership(const WeightedShift& T, const BlockVector& x, std::uint64_t n, std::uint64_t N,
                      GaussianRational& c_out) {
  std::uint64_t K = auto_window(x, n, std::max<std::uint64_t>(N, 8));
  for (int attempt = 0; attempt < 4; ++attempt, K = 2 * K + 16) {
    const WindowedVector w = orbit_windowed(T, x, n, K);
    BigRational S = 0;
    for (const auto& [k, c] : w.head) S += c.norm2();
    const auto it = w.head.find(N);
    c_out = it == w.head.end() ? GaussianRational() : it->second;
    const BigRational four_c2 = 4 * c_out.norm2();
    const BigRational lo = S + BigRational(3, 4);
    const BigRational hi = lo + w.tail;
    if (four_c2 > hi * hi) return Membership::In;
    if (four_c2 <= lo * lo) return Membership::Out;
  }
  return Membership::Undecided;
}

// Re(e^{2 pi i t} c) for t a multiple of 1/2.
BigRational rotated_real_part(const BigRational& t, const GaussianRational& c) {
  BigRational r = t - BigRational(floor_of(t));
  if (r == 0) return c.re;
  if (r == BigRational(1, 2)) return -c.re;
  throw DomainError("turn is not a multiple of 1/2");
}

}  // namespace

std::uint64_t minimal_target_index(const BigInt& a) {
  if (a < 2) throw RuleViolation("growth-violation: the ratio a must be an integer >= 2");
  for (std::uint64_t N = 1;; ++N) {
    if (geometric_tail(a, N) <= BigRational(1, 4)) return N;
  }
}

PhaseSeq AdversarialPhase::phase() const { return PhaseSeq::geometric(f.c, f.a, theta); }

bool AdversarialPhase::in_A(std::uint64_t n) const {
  return std::binary_search(members.begin(), members.end(), n) ||
         std::binary_search(undecided.begin(), undecided.end(), n);
}

AdversarialPhase adversarial_theta(const WeightedShift& T, const BlockVector& x, const GeometricDescriptor& f,
                                   std::uint64_t N, std::uint64_t horizon) {
  check_descriptor(f);
  if (N < 1) throw RuleViolation("target index N must be >= 1");
  if (geometric_tail(f.a, N) > BigRational(1, 4)) {
    throw RuleViolation("sum_{j>=N+1} a^{-j} exceeds 1/4 for N=" + std::to_string(N));
  }
  AdversarialPhase out;
  out.f = f;
  out.N = N;
  out.horizon = horizon;
  out.alphas.assign(horizon + 1, BigRational(0));

  // u_n = frac(f(n) theta_{n-1}); since f(n+1) = a f(n), u_{n+1} = frac(a (u_n + alpha_n)).
  // With integer a and alpha in {0, 1/2}, u stays in {0, 1/2}.
  BigRational u = 0;
  BigRational theta = 0;
  for (std::uint64_t n = 0; n <= horizon; ++n) {
    GaussianRational c;
    const Membership m = membership(T, x, n, N, c);
    if (m != Membership::Out) {
      (m == Membership::In ? out.members : out.undecided).push_back(n);
      // Ties (real part exactly 0) keep alpha = 0.
      if (rotated_real_part(u, c) > 0) out.alphas[n] = BigRational(1, 2);
    }
    if (out.alphas[n] != 0) theta += out.alphas[n] / f_value(f, n);
    BigRational next = f.a * (u + out.alphas[n]);
    next -= BigRational(floor_of(next));
    next.canonicalize();
    u = next;
  }
  theta.canonicalize();
  out.theta = theta;
  out.provenance = "T=" + T.describe() + "; f(n)=" + f.c.get_str() + "*" + f.a.get_str() +
                   "^n; N=" + std::to_string(N) + "; horizon=" + std::to_string(horizon);
  return out;
}

AdversarialCheck recheck_adversarial(const WeightedShift& T, const BlockVector& x, const AdversarialPhase& ph) {
  AdversarialCheck chk;
  const std::set<std::uint64_t> in_a(ph.members.begin(), ph.members.end());
  std::set<std::uint64_t> flagged(in_a);
  flagged.insert(ph.undecided.begin(), ph.undecided.end());

  BigRational theta_prev = 0;  // theta_{n-1}
  for (std::uint64_t n = 0; n <= ph.horizon; ++n) {
    const BigRational& alpha = ph.alphas[n];
    if (alpha != 0 && alpha != BigRational(1, 2)) {
      chk.alphas_zero_off_A = false;
      chk.violations.push_back("alpha_" + std::to_string(n) + " not in {0, 1/2}");
    }
    if (!flagged.count(n)) {
      if (alpha != 0) {
        chk.alphas_zero_off_A = false;
        chk.violations.push_back("alpha_" + std::to_string(n) + " nonzero off A");
      }
    } else {
      const GaussianRational c = orbit_coord(T, x, n, ph.N);
      const BigRational t = f_value(ph.f, n) * theta_prev + alpha;
      if (rotated_real_part(t, c) > 0) {
        chk.sign_condition = false;
        chk.violations.push_back("positive real part at n=" + std::to_string(n));
      }
    }
    if (alpha != 0) theta_prev += alpha / f_value(ph.f, n);
  }
  theta_prev.canonicalize();
  if (theta_prev != ph.theta) {
    chk.alphas_zero_off_A = false;
    chk.violations.push_back("theta does not match the alpha log");
  }
  for (std::uint64_t n : in_a) {
    for (std::uint64_t k = 1; k <= ph.N; ++k) {
      if (in_a.count(n + k)) {
        chk.spacing_condition = false;
        chk.violations.push_back("n=" + std::to_string(n) + " and n+" + std::to_string(k) + " both in A");
      }
    }
  }
  return chk;
}

// ------------------------------------------------------ growth certifier

namespace {

// Coefficients of the Lagrange basis polynomials on nodes 0..d:
// basis[i][l] is the coefficient of k^l in l_i(k).
std::vector<std::vector<BigRational>> lagrange_basis(std::uint64_t d) {
  std::vector<std::vector<BigRational>> basis(d + 1);
  for (std::uint64_t i = 0; i <= d; ++i) {
    std::vector<BigRational> poly{BigRational(1)};
    BigRational denom = 1;
    for (std::uint64_t j = 0; j <= d; ++j) {
      if (j == i) continue;
      // multiply by (k - j)
      std::vector<BigRational> next(poly.size() + 1, BigRational(0));
      for (std::size_t l = 0; l < poly.size(); ++l) {
        next[l + 1] += poly[l];
        next[l] -= poly[l] * BigRational(big(j));
      }
      poly = std::move(next);
      denom *= BigRational(big(i)) - BigRational(big(j));
    }
    for (auto& c : poly) {
      c /= denom;
      c.canonicalize();
    }
    basis[i] = std::move(poly);
  }
  return basis;
}

BigRational basis_at(const std::vector<BigRational>& poly, std::uint64_t k) {
  BigRational acc = 0;
  const BigRational kq(big(k));
  for (std::size_t l = poly.size(); l-- > 0;) acc = acc * kq + poly[l];
  return acc;
}

}  // namespace

GrowthReport slow_growth_certify(const RealExpr& f, std::uint64_t d, std::uint64_t k_max,
                                 const std::vector<std::uint64_t>& n_grid, const BigRational& threshold,
                                 unsigned precision) {
  if (k_max < d + 1) throw DomainError("k_max must be at least d + 1");
  if (n_grid.empty()) throw DomainError("n_grid is empty");
  for (std::size_t i = 1; i < n_grid.size(); ++i) {
    if (n_grid[i] <= n_grid[i - 1]) throw DomainError("n_grid must be increasing");
  }
  GrowthReport rep;
  rep.d = d;
  rep.k_max = k_max;
  rep.threshold = threshold;
  const auto basis = lagrange_basis(d);
  const unsigned p = precision;

  for (std::uint64_t n : n_grid) {
    GrowthRow row;
    row.n = n;
    const std::uint64_t kk = std::max(d, k_max);
    // F_k = f(n+k) - f(n), exact when the expression stays rational.
    std::vector<std::optional<BigRational>> exact(kk + 1);
    bool all_exact = true;
    for (std::uint64_t k = 0; k <= kk; ++k) {
      exact[k] = f.try_exact(BigRational(big(n + k)));
      all_exact = all_exact && exact[k].has_value();
    }
    row.exact = all_exact;
    std::vector<RealInterval> F(kk + 1);
    if (all_exact) {
      for (std::uint64_t k = 0; k <= kk; ++k) F[k] = RealInterval::exact(*exact[k] - *exact[0], p);
    } else {
      const RealInterval f0 = f.eval(BigRational(big(n)), p);
      for (std::uint64_t k = 0; k <= kk; ++k) F[k] = f.eval(BigRational(big(n + k)), p) - f0;
      F[0] = RealInterval::from_int(0, p);  // f(n) - f(n) is exactly 0
    }
    for (std::uint64_t l = 0; l <= d; ++l) {
      if (all_exact) {
        BigRational g = 0;
        for (std::uint64_t i = 0; i <= d; ++i) g += basis[i][l] * (*exact[i] - *exact[0]);
        row.g.push_back(RealInterval::exact(g, p));
      } else {
        RealInterval g = RealInterval::from_int(0, p);
        for (std::uint64_t i = 0; i <= d; ++i) g = g + RealInterval::exact(basis[i][l], p) * F[i];
        row.g.push_back(g);
      }
    }
    RealInterval sup = RealInterval::from_int(0, p);
    for (std::uint64_t k = 1; k <= k_max; ++k) {
      RealInterval eps(p);
      if (all_exact) {
        BigRational e = *exact[k] - *exact[0];
        for (std::uint64_t i = 0; i <= d; ++i) e -= basis_at(basis[i], k) * (*exact[i] - *exact[0]);
        eps = RealInterval::exact(e, p);
      } else {
        eps = F[k];
        for (std::uint64_t i = 0; i <= d; ++i) eps = eps - RealInterval::exact(basis_at(basis[i], k), p) * F[i];
      }
      sup = max(sup, abs(eps));
      row.eps.push_back(std::move(eps));
    }
    row.sup_abs_eps = sup;
    rep.rows.push_back(std::move(row));
  }

  rep.pass = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    const auto& prev = rep.rows[i - 1].sup_abs_eps;
    const auto& cur = rep.rows[i].sup_abs_eps;
    if (cur.hi().compare(prev.lo()) > 0) {
      rep.pass = false;
      rep.reason = "sup |eps_k(n)| not certifiably nonincreasing between n=" + std::to_string(rep.rows[i - 1].n) +
                   " and n=" + std::to_string(rep.rows[i].n);
      break;
    }
  }
  if (rep.pass && rep.rows.back().sup_abs_eps.hi().compare(threshold) > 0) {
    rep.pass = false;
    rep.reason = "final sup |eps_k(n)| exceeds the threshold";
  }
  if (rep.pass) rep.reason = "residuals nonincreasing and below threshold";
  return rep;
}

}  // namespace orbitlab

#pragma once

// Independent reference implementations used by the unit and acceptance tests.
// They share no code paths with the library beyond the basic value types.

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "orbitlab/space.hpp"

namespace oracle {

using orbitlab::BigInt;
using orbitlab::BigRational;
using orbitlab::FiniteVector;
using orbitlab::GaussianRational;

/// sup_t |#{x_i < t}/N - t| over t in [0, 1], checking every one-sided limit at
/// the sample points. O(N^2).
inline BigRational brute_star_discrepancy(const std::vector<BigRational>& x) {
  const BigRational N(static_cast<long>(x.size()));
  BigRational best = 0;
  auto consider = [&](const BigRational& v) {
    const BigRational a = v < 0 ? BigRational(-v) : v;
    if (a > best) best = a;
  };
  for (const auto& t : x) {
    long lt = 0, le = 0;
    for (const auto& y : x) {
      lt += y < t;
      le += y <= t;
    }
    consider(BigRational(lt) / N - t);  // at t
    consider(BigRational(le) / N - t);  // just right of t
  }
  consider(BigRational(1) - 1);
  return best;
}

/// Dense coordinates 0..L-1 of T^n x by repeated application of the truncated
/// shift matrix. Exact as long as the support of x lies below L.
inline std::vector<GaussianRational> materialized_orbit(const std::vector<BigRational>& weights_from_1,
                                                        std::vector<GaussianRational> x, std::uint64_t n) {
  for (std::uint64_t step = 0; step < n; ++step) {
    std::vector<GaussianRational> y(x.size());
    for (std::size_t k = 0; k + 1 < x.size(); ++k) y[k] = weights_from_1[k] * x[k + 1];
    x = std::move(y);
  }
  return x;
}

inline BigRational norm2(const std::vector<GaussianRational>& v) {
  BigRational s = 0;
  for (const auto& z : v) s += z.norm2();
  return s;
}

inline BigInt height(const BigRational& q) {
  if (q == 0) return 0;
  return std::max(BigInt(abs(q.get_num())), BigInt(q.get_den()));
}

/// Rationals of height <= h sorted by (height, value), by brute force over p/q.
inline std::vector<BigRational> rationals_by_height(long h) {
  std::set<std::pair<long, BigRational>> s;
  for (long q = 1; q <= std::max(h, 1L); ++q) {
    for (long p = -h; p <= h; ++p) {
      BigRational r(p, q);
      r.canonicalize();
      if (height(r) <= h) s.insert({height(r).get_si(), r});
    }
  }
  std::vector<BigRational> out;
  for (const auto& [ht, r] : s) out.push_back(r);
  return out;
}

/// The raw height enumeration for heights 0..hmax, built from its definition:
/// tuples (c_0..c_h) over Gaussian rationals of height <= h, lexicographic with
/// c_0 most significant, keeping only vectors of height exactly h.
inline std::vector<FiniteVector> height_enumeration_upto(long hmax) {
  std::vector<FiniteVector> out;
  out.emplace_back();
  for (long h = 1; h <= hmax; ++h) {
    const auto R = rationals_by_height(h);
    std::vector<std::pair<std::tuple<long, std::size_t, std::size_t>, GaussianRational>> G;
    for (std::size_t a = 0; a < R.size(); ++a) {
      for (std::size_t b = 0; b < R.size(); ++b) {
        const long m = std::max(height(R[a]), height(R[b])).get_si();
        G.push_back({{m, a, b}, GaussianRational(R[a], R[b])});
      }
    }
    std::sort(G.begin(), G.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
    const std::size_t g = G.size();
    std::vector<std::size_t> digit(static_cast<std::size_t>(h) + 1, 0);
    while (true) {
      FiniteVector v;
      long ht = 0;
      for (std::size_t i = 0; i < digit.size(); ++i) {
        const auto& z = G[digit[i]];
        if (!z.second.is_zero()) {
          v.set(i, z.second);
          ht = std::max({ht, static_cast<long>(i), std::get<0>(z.first)});
        }
      }
      if (ht == h) out.push_back(v);
      std::size_t pos = digit.size();
      while (pos > 0) {
        --pos;
        if (++digit[pos] < g) break;
        digit[pos] = 0;
        if (pos == 0) {
          pos = digit.size() + 1;
          break;
        }
      }
      if (pos == digit.size() + 1) break;
    }
  }
  return out;
}

/// Named reference values at 256 bits, rounded to double.
inline double mpfr256(const std::string& what, long k = 0) {
  mpfr_t pi, v;
  mpfr_inits2(256, pi, v, static_cast<mpfr_ptr>(nullptr));
  mpfr_const_pi(pi, MPFR_RNDN);
  double out = 0;
  if (what == "exp_left" || what == "exp_right") {
    // exp(2 k pi -+ pi / 2)
    mpfr_mul_si(v, pi, 4 * k + (what == "exp_left" ? -1 : 1), MPFR_RNDN);
    mpfr_div_ui(v, v, 2, MPFR_RNDN);
    mpfr_exp(v, v, MPFR_RNDN);
  } else if (what == "cos_eighth") {
    mpfr_div_ui(v, pi, 4, MPFR_RNDN);
    mpfr_cos(v, v, MPFR_RNDN);
  }
  out = mpfr_get_d(v, MPFR_RNDN);
  mpfr_clears(pi, v, static_cast<mpfr_ptr>(nullptr));
  return out;
}

/// ceil(exp(2 k pi - pi/2)) and floor(exp(2 k pi + pi/2)) from a 256-bit evaluation.
inline std::pair<long, long> example_endpoints(long k) {
  mpfr_t pi, v;
  mpfr_inits2(256, pi, v, static_cast<mpfr_ptr>(nullptr));
  mpfr_const_pi(pi, MPFR_RNDN);
  auto eval = [&](long sign) {
    mpfr_mul_si(v, pi, 4 * k + sign, MPFR_RNDN);
    mpfr_div_ui(v, v, 2, MPFR_RNDN);
    mpfr_exp(v, v, MPFR_RNDN);
  };
  eval(-1);
  mpfr_ceil(v, v);
  const long a = mpfr_get_si(v, MPFR_RNDN);
  eval(1);
  mpfr_floor(v, v);
  const long b = mpfr_get_si(v, MPFR_RNDN);
  mpfr_clears(pi, v, static_cast<mpfr_ptr>(nullptr));
  return {a, b};
}

/// C(n, k).
inline BigInt binom(long n, long k) {
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return out;
}

}  // namespace oracle

namespace orbitlab {

// Readable gtest failure messages.
inline void PrintTo(const GaussianRational& z, std::ostream* os) { *os << z.to_string(); }
inline void PrintTo(const FiniteVector& v, std::ostream* os) { *os << v.to_string(); }

}  // namespace orbitlab

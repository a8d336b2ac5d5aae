#include <algorithm>
#include <cmath>
#include <set>

#include "orbitlab/equidistribution.hpp"

namespace orbitlab {

namespace {

using IntMatrix = std::vector<std::vector<BigInt>>;

// One integer row per (degree, non-pi symbol): h must annihilate it.
IntMatrix constraint_rows(const std::vector<SymbolicPoly>& P) {
  std::set<std::string> symbols;
  int deg = -1;
  for (const auto& p : P) {
    deg = std::max(deg, p.degree());
    for (const auto& c : p.coeffs()) {
      for (const auto& [name, q] : c.coords()) {
        if (name != "pi") symbols.insert(name);
      }
    }
  }
  IntMatrix rows;
  for (int d = 0; d <= deg; ++d) {
    for (const auto& s : symbols) {
      std::vector<BigRational> row;
      BigInt den = 1;
      bool nonzero = false;
      for (const auto& p : P) {
        row.push_back(p.coeff(d).get(s));
        nonzero = nonzero || row.back() != 0;
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), row.back().get_den_mpz_t());
      }
      if (!nonzero) continue;
      std::vector<BigInt> irow;
      for (const auto& q : row) irow.push_back(q.get_num() * (den / q.get_den()));
      rows.push_back(std::move(irow));
    }
  }
  return rows;
}

// Column operation on columns (c1, c2) of every matrix in `ms`:
// c1 <- x c1 + y c2, c2 <- u c1 + v c2 with xv - yu = 1.
void column_op(std::vector<IntMatrix*> ms, std::size_t c1, std::size_t c2, const BigInt& x, const BigInt& y,
               const BigInt& u, const BigInt& v) {
  for (IntMatrix* m : ms) {
    for (auto& row : *m) {
      const BigInt a = row[c1];
      const BigInt b = row[c2];
      row[c1] = x * a + y * b;
      row[c2] = u * a + v * b;
    }
  }
}

// Basis of {h in Z^r : M h = 0} via a unimodular column echelon reduction.
IntMatrix integer_kernel(IntMatrix M, std::size_t r) {
  IntMatrix U(r, std::vector<BigInt>(r, BigInt(0)));
  for (std::size_t i = 0; i < r; ++i) U[i][i] = 1;
  std::size_t col = 0;
  for (std::size_t i = 0; i < M.size() && col < r; ++i) {
    for (std::size_t c = col + 1; c < r; ++c) {
      if (M[i][c] == 0) continue;
      const BigInt a = M[i][col];
      const BigInt b = M[i][c];
      BigInt g, x, y;
      mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
      // [x, -b/g; y, a/g] has determinant 1.
      const BigInt bg = b / g;
      const BigInt ag = a / g;
      column_op({&M, &U}, col, c, x, y, BigInt(-bg), ag);
    }
    if (M[i][col] != 0) ++col;
  }
  IntMatrix kernel;
  for (std::size_t c = col; c < r; ++c) {
    std::vector<BigInt> h(r);
    for (std::size_t i = 0; i < r; ++i) h[i] = U[i][c];
    kernel.push_back(std::move(h));
  }
  return kernel;
}

// Row Hermite normal form: positive pivots, entries above a pivot reduced into [0, pivot).
IntMatrix hermite_normal_form(IntMatrix rows, std::size_t r) {
  std::size_t pivot = 0;
  for (std::size_t col = 0; col < r && pivot < rows.size(); ++col) {
    for (std::size_t i = pivot + 1; i < rows.size(); ++i) {
      if (rows[i][col] == 0) continue;
      const BigInt a = rows[pivot][col];
      const BigInt b = rows[i][col];
      BigInt g, x, y;
      mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
      const BigInt ag = a / g;
      const BigInt bg = b / g;
      for (std::size_t k = 0; k < r; ++k) {
        const BigInt p = rows[pivot][k];
        const BigInt q = rows[i][k];
        rows[pivot][k] = x * p + y * q;
        rows[i][k] = -bg * p + ag * q;
      }
    }
    if (rows[pivot][col] == 0) continue;
    if (rows[pivot][col] < 0) {
      for (auto& v : rows[pivot]) v = -v;
    }
    for (std::size_t i = 0; i < pivot; ++i) {
      BigInt q;
      mpz_fdiv_q(q.get_mpz_t(), rows[i][col].get_mpz_t(), rows[pivot][col].get_mpz_t());
      if (q == 0) continue;
      for (std::size_t k = 0; k < r; ++k) rows[i][k] -= q * rows[pivot][k];
    }
    ++pivot;
  }
  rows.resize(pivot);
  return rows;
}

}  // namespace

std::optional<std::vector<BigRational>> relation_witness(const std::vector<SymbolicPoly>& P,
                                                         const std::vector<BigInt>& h) {
  if (h.size() != P.size()) throw DomainError("relation vector has the wrong length");
  SymbolicPoly sum = SymbolicPoly::from_coeffs({}, true);
  for (std::size_t j = 0; j < P.size(); ++j) sum = sum + BigRational(h[j]) * P[j];
  std::vector<BigRational> pi_part;
  for (const auto& c : sum.coeffs()) {
    if (!c.in_pi_q()) return std::nullopt;
    pi_part.push_back(c.get("pi"));
  }
  return pi_part;
}

RelationLattice relation_lattice(const std::vector<SymbolicPoly>& P) {
  RelationLattice lat;
  lat.r = P.size();
  if (P.empty()) return lat;
  const IntMatrix kernel = integer_kernel(constraint_rows(P), P.size());
  lat.basis = hermite_normal_form(kernel, P.size());
  for (const auto& h : lat.basis) {
    auto w = relation_witness(P, h);
    if (!w) throw Error("internal: lattice basis vector fails the pi*Q[t] check");
    lat.witnesses.push_back(std::move(*w));
  }
  return lat;
}

// ------------------------------------------------------------ closure model

namespace {

BigRational eval_q(const std::vector<BigRational>& q, const BigInt& s) {
  BigRational acc = 0;
  for (std::size_t d = q.size(); d-- > 0;) acc = acc * BigRational(s) + q[d];
  return acc;
}

RealInterval circle_distance(const RealInterval& v) {
  const double mid = v.mid_double();
  const BigRational nearest(BigInt(static_cast<long>(std::llround(mid))));
  return abs(v - RealInterval::exact(nearest, v.precision()));
}

constexpr std::uint64_t kMaxBranches = 1000000;

}  // namespace

SubtorusModel closure_model(const std::vector<SymbolicPoly>& P) {
  for (const auto& p : P) {
    if (p.has_constant()) throw RuleViolation("closure_model expects polynomials without constant term");
  }
  SubtorusModel m;
  m.r = P.size();
  std::vector<SymbolicPoly> chosen;
  for (std::size_t j = 0; j < P.size(); ++j) {
    std::vector<SymbolicPoly> cand = chosen;
    cand.push_back(P[j]);
    if (relation_lattice(cand).independent()) {
      chosen = std::move(cand);
      m.independent.push_back(j);
    }
  }
  for (std::size_t j = 0; j < P.size(); ++j) {
    if (std::find(m.independent.begin(), m.independent.end(), j) != m.independent.end()) continue;
    std::vector<SymbolicPoly> fam = chosen;
    fam.push_back(P[j]);
    const RelationLattice lat = relation_lattice(fam);
    if (lat.rank() != 1) throw Error("internal: dependent polynomial with relation rank != 1");
    std::vector<BigInt> h = lat.basis[0];
    if (h.back() == 0) throw Error("internal: relation does not involve the dependent polynomial");
    if (h.back() < 0) {
      for (auto& v : h) v = -v;
    }
    SubtorusModel::Relation rel;
    rel.j = j;
    rel.m = h.back();
    for (std::size_t k = 0; k + 1 < h.size(); ++k) rel.a.push_back(-h[k]);
    rel.q = *relation_witness(fam, h);
    mpz_lcm(m.M.get_mpz_t(), m.M.get_mpz_t(), rel.m.get_mpz_t());
    m.relations.push_back(std::move(rel));
  }
  // q_j(n) / (2 m_j) mod 1 has period lcm of the denominators of q_{j,d} / (2 m_j), d >= 1.
  for (const auto& rel : m.relations) {
    for (std::size_t d = 1; d < rel.q.size(); ++d) {
      BigRational c = rel.q[d] / (2 * BigRational(rel.m));
      c.canonicalize();
      mpz_lcm(m.period.get_mpz_t(), m.period.get_mpz_t(), c.get_den_mpz_t());
    }
  }
  return m;
}

std::vector<RealInterval> SubtorusModel::dependent_turns(const std::vector<RealInterval>& phi, const BigInt& s,
                                                         unsigned precision) const {
  std::vector<RealInterval> out;
  for (const auto& rel : relations) {
    RealInterval v = RealInterval::exact(eval_q(rel.q, s) / (2 * BigRational(rel.m)), precision);
    const BigRational scale = BigRational(M) / BigRational(rel.m);
    for (std::size_t k = 0; k < rel.a.size(); ++k) {
      v = v + RealInterval::exact(BigRational(rel.a[k]) * scale, precision) * phi[k];
    }
    out.push_back(v);
  }
  return out;
}

bool SubtorusModel::contains(const std::vector<Turn>& point, const BigRational& tol, unsigned precision) const {
  if (point.size() != r) throw DomainError("point has the wrong torus dimension");
  if (!period.fits_ulong_p() || period.get_ui() > kMaxBranches) throw DomainError("closure period too large");
  BigInt branches = 1;
  for (std::size_t k = 0; k < p(); ++k) branches *= M;
  if (branches * period > kMaxBranches) throw DomainError("too many closure branches to enumerate");
  const unsigned w = precision;
  const RealInterval Mi = RealInterval::exact(BigRational(M), w);
  const std::uint64_t nb = branches.get_ui();
  for (std::uint64_t s = 0; s < period.get_ui(); ++s) {
    for (std::uint64_t b = 0; b < nb; ++b) {
      std::vector<RealInterval> phi;
      std::uint64_t code = b;
      for (std::size_t k = 0; k < p(); ++k) {
        const std::uint64_t i = code % M.get_ui();
        code /= M.get_ui();
        phi.push_back((point[independent[k]].as_interval(w) + RealInterval::from_int(static_cast<long>(i), w)) / Mi);
      }
      const auto dep = dependent_turns(phi, BigInt(std::to_string(s)), w);
      bool ok = true;
      for (std::size_t i = 0; i < relations.size() && ok; ++i) {
        const RealInterval d = circle_distance(dep[i] - point[relations[i].j].as_interval(w));
        ok = d.hi().compare(tol) <= 0;
      }
      if (ok) return true;
    }
  }
  return false;
}

std::vector<std::vector<BigRational>> SubtorusModel::finite_points() const {
  if (p() != 0) throw DomainError("closure is not finite");
  std::set<std::vector<BigRational>> pts;
  for (BigInt s = 0; s < period; ++s) {
    std::vector<BigRational> tuple(r);
    for (const auto& rel : relations) {
      BigRational t = eval_q(rel.q, s) / (2 * BigRational(rel.m));
      t -= BigRational(floor_of(t));
      t.canonicalize();
      tuple[rel.j] = t;
    }
    pts.insert(std::move(tuple));
  }
  return {pts.begin(), pts.end()};
}

}  // namespace orbitlab

#pragma once

// Vectors of l^2(Z_+) with Gaussian-rational coordinates, weighted backward
// shifts and certified distances along orbits. Orbits are never
// materialized: (T^n x)_k = (prod_{i=1}^n w_{k+i}) * x_{k+n}.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "orbitlab/expr.hpp"
#include "orbitlab/numerics.hpp"

namespace orbitlab {

struct GaussianRational {
  BigRational re;
  BigRational im;

  GaussianRational() = default;
  /// Parts are canonicalized, so values built from unreduced p/q compare correctly.
  GaussianRational(BigRational r, BigRational i = 0) : re(std::move(r)), im(std::move(i)) {
    re.canonicalize();
    im.canonicalize();
  }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }
  GaussianRational conj() const { return {re, -im}; }
  /// |z|^2.
  BigRational norm2() const { return re * re + im * im; }

  /// Parses "3", "-1/2", "2i", "-i", "1/2+3/4 i", "0.5-2i".
  static GaussianRational parse(std::string_view text);
  std::string to_string() const;
};

GaussianRational operator+(const GaussianRational& a, const GaussianRational& b);
GaussianRational operator-(const GaussianRational& a, const GaussianRational& b);
GaussianRational operator-(const GaussianRational& a);
GaussianRational operator*(const GaussianRational& a, const GaussianRational& b);
GaussianRational operator*(const BigRational& s, const GaussianRational& z);
bool operator==(const GaussianRational& a, const GaussianRational& b);

/// Finitely supported vector; only nonzero coordinates are stored.
class FiniteVector {
 public:
  FiniteVector() = default;

  /// e_k.
  static FiniteVector basis(std::uint64_t k);
  static FiniteVector from_coords(const std::vector<GaussianRational>& dense);

  void set(std::uint64_t k, const GaussianRational& v);
  GaussianRational at(std::uint64_t k) const;
  const std::map<std::uint64_t, GaussianRational>& coords() const { return coords_; }
  bool is_zero() const { return coords_.empty(); }
  /// Largest index with a nonzero coordinate.
  std::optional<std::uint64_t> max_index() const;
  BigRational norm2() const;

  FiniteVector scaled(const BigRational& s) const;
  FiniteVector scaled(const GaussianRational& s) const;

  friend FiniteVector operator+(const FiniteVector& a, const FiniteVector& b);
  friend FiniteVector operator-(const FiniteVector& a, const FiniteVector& b);
  friend bool operator==(const FiniteVector& a, const FiniteVector& b) { return a.coords_ == b.coords_; }

  std::string to_string() const;

 private:
  std::map<std::uint64_t, GaussianRational> coords_;
};

/// Backward shift with positive rational weights, (T x)_k = w_{k+1} x_{k+1}.
class WeightedShift {
 public:
  enum class Kind { Constant, Periodic, ClosedForm };

  /// w_k = w for every k (T = 2B is constant(2)).
  static WeightedShift constant(const BigRational& w);
  /// w_k = pattern[(k - 1) mod pattern.size()].
  static WeightedShift periodic(std::vector<BigRational> pattern);
  /// w_k given by an exact rational expression in k; sup_bound, when
  /// supplied, must dominate every weight and enables tail bounds.
  static WeightedShift closed_form(const std::string& expr, std::optional<BigRational> sup_bound);
  /// The unweighted backward shift B.
  static WeightedShift unweighted() { return constant(1); }

  Kind kind() const { return kind_; }
  /// w_k for k >= 1.
  BigRational weight(std::uint64_t k) const;
  /// prod_{i=1}^{n} w_{k+i}.
  BigRational product(std::uint64_t k, std::uint64_t n) const;
  /// An upper bound on every weight, when one is known.
  const std::optional<BigRational>& sup_bound() const { return sup_; }
  std::string describe() const;
  const std::vector<BigRational>& pattern() const { return pattern_; }
  const std::string& expression() const { return expr_text_; }

 private:
  Kind kind_ = Kind::Constant;
  std::vector<BigRational> pattern_;
  std::string expr_text_;
  std::shared_ptr<RealExpr> expr_;
  std::optional<BigRational> sup_;
};

/// Rule for blocks generated on demand: block j (j >= first) sits at offset(j)
/// with scale 2^{-offset(j)}. width(j) bounds the largest support index of
/// block j and norm_coeff c declares ||block j|| <= c * j, so tail bounds never
/// need to build far blocks.
struct LazyBlocks {
  std::uint64_t first = 1;
  std::function<BigInt(std::uint64_t)> offset;
  std::function<FiniteVector(std::uint64_t)> block;
  std::function<BigInt(std::uint64_t)> width;
  std::optional<BigRational> norm_coeff;
  /// Shifted supports of distinct blocks never overlap.
  bool disjoint = true;
  std::string description;
};

struct BlockRef {
  BigInt offset;
  BigRational scale;
  const FiniteVector* block = nullptr;
};

/// x = sum_j scale_j S^{offset_j} x_j with explicit blocks followed by an
/// optional lazily generated sequence. Copies share the lazy cache.
class BlockVector {
 public:
  BlockVector();

  static BlockVector from_finite(const FiniteVector& v);

  /// Appends an explicit block; offsets must be strictly increasing.
  void add_block(const BigInt& offset, const BigRational& scale, FiniteVector block);
  /// Installs the lazy tail. Lazy offsets must exceed every explicit offset.
  void set_lazy(LazyBlocks rule);

  bool has_lazy() const;
  const LazyBlocks* lazy() const;
  std::vector<BlockRef> explicit_blocks() const;
  BigInt lazy_offset(std::uint64_t j) const;
  /// Forces and caches lazy block j.
  const FiniteVector& lazy_block(std::uint64_t j) const;

  /// x_m.
  GaussianRational coord(std::uint64_t m) const;
  /// Nonzero coordinates with index in [lo, hi].
  std::map<std::uint64_t, GaussianRational> coords_in(std::uint64_t lo, std::uint64_t hi) const;
  /// Largest possible nonzero index among blocks with offset <= limit
  /// (forcing lazy blocks in that range).
  std::optional<std::uint64_t> reach_below(std::uint64_t limit) const;

  /// Total support end when there is no lazy tail.
  std::optional<std::uint64_t> finite_support_end() const;
  FiniteVector truncated(std::uint64_t upto) const;

 private:
  struct State;
  std::shared_ptr<State> state_;
};

/// Target point in X x T^r.
struct ProductPoint {
  FiniteVector vector;
  std::vector<Turn> torus;
};

/// Coordinates 0..K of a vector exactly, with a bound on the squared norm of
/// everything beyond K.
struct WindowedVector {
  std::uint64_t K = 0;
  std::map<std::uint64_t, GaussianRational> head;
  BigRational tail;
};

GaussianRational orbit_coord(const WeightedShift& T, const BlockVector& x, std::uint64_t n, std::uint64_t k);
GaussianRational orbit_coord(const WeightedShift& T, const FiniteVector& x, std::uint64_t n, std::uint64_t k);
std::vector<GaussianRational> orbit_window(const WeightedShift& T, const BlockVector& x, std::uint64_t n,
                                           std::uint64_t K);

/// Upper bound for sum_{k>K} |(T^n x)_k|^2. Throws DomainError ("unbounded")
/// when lazy blocks exist but no weight or norm bound makes the majorant finite.
BigRational tail_norm_bound(const WeightedShift& T, const BlockVector& x, std::uint64_t n, std::uint64_t K);

WindowedVector orbit_windowed(const WeightedShift& T, const BlockVector& x, std::uint64_t n, std::uint64_t K);
WindowedVector windowed(const FiniteVector& y, std::uint64_t K);

/// Smallest K >= min_K such that every block meeting [n, n+K+guard] lies
/// inside the window [n, n+K].
std::uint64_t auto_window(const BlockVector& x, std::uint64_t n, std::uint64_t min_K, std::uint64_t guard = 96);

/// Enclosure of ||phase * v - y||^2 given windowed data on the same window.
RealInterval distance_sq(const WindowedVector& v, const UnitComplexApprox& phase, const WindowedVector& y);
/// Exact bounds [lo, hi] of ||lambda * v - y||^2 for an exact Gaussian-rational lambda
/// of modulus one.
std::pair<BigRational, BigRational> distance_sq_exact(const WindowedVector& v, const GaussianRational& lambda,
                                                      const WindowedVector& y);

/// Enclosure of ||phase * T^n x - y||.
RealInterval certified_distance(const WeightedShift& T, const BlockVector& x, std::uint64_t n,
                                const UnitComplexApprox& phase, const FiniteVector& y, std::uint64_t K);
RealInterval certified_distance(const WeightedShift& T, const BlockVector& x, std::uint64_t n,
                                const UnitComplexApprox& phase, const BlockVector& y, std::uint64_t K);

/// |e^{2 pi i a} - e^{2 pi i b}| = 2 |sin pi (a - b)|.
RealInterval chordal_distance(const Turn& a, const Turn& b, unsigned precision);

/// Max of the vector distance and the per-coordinate chordal distances.
RealInterval product_distance(const RealInterval& vector_distance, const std::vector<Turn>& phases,
                              const std::vector<Turn>& targets, unsigned precision);

/// Rational upper bound of sqrt(q), q >= 0.
BigRational sqrt_upper(const BigRational& q, unsigned precision = 128);
/// Rational lower bound of sqrt(q), q >= 0.
BigRational sqrt_lower(const BigRational& q, unsigned precision = 128);

}  // namespace orbitlab

#include <charconv>
#include <cmath>
#include <mutex>
#include <random>

#include "orbitlab/numerics.hpp"

namespace orbitlab {

namespace {

constexpr unsigned kMaxBase = 36;

char digit_char(unsigned d) { return static_cast<char>(d < 10 ? '0' + d : 'a' + (d - 10)); }

std::optional<std::uint64_t> termination_index(const BigInt& denominator, unsigned base) {
  BigInt d = denominator;
  std::uint64_t k = 0;
  const BigInt b(base);
  while (d != 1) {
    BigInt g;
    mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), b.get_mpz_t());
    if (g == 1) return std::nullopt;
    // d | b^k  <=>  k rounds of d /= gcd(d, b) reach 1
    d /= g;
    ++k;
  }
  return k;
}

}  // namespace

struct DigitStream::Impl {
  enum class Kind { Seeded, Rational, Digits };

  unsigned base = 2;
  Kind kind = Kind::Rational;
  std::uint64_t seed = 0;
  BigRational theta;
  std::optional<std::uint64_t> terminates;

  mutable std::mutex mu;
  mutable std::string cache;  // digits as characters, index i-1 holds d_i
  mutable std::mt19937_64 rng;
  mutable BigInt rational_num;  // remainder numerator for long division

  void extend_to(std::uint64_t count) const {
    while (cache.size() < count) {
      switch (kind) {
        case Kind::Seeded:
          if (base == 2) {
            const std::uint64_t draw = rng();
            for (int bit = 63; bit >= 0; --bit) cache.push_back(((draw >> bit) & 1U) ? '1' : '0');
          } else {
            cache.push_back(digit_char(static_cast<unsigned>(rng() % base)));
          }
          break;
        case Kind::Rational:
        case Kind::Digits: {
          rational_num *= base;
          BigInt d;
          mpz_fdiv_qr(d.get_mpz_t(), rational_num.get_mpz_t(), rational_num.get_mpz_t(),
                      theta.get_den_mpz_t());
          cache.push_back(digit_char(static_cast<unsigned>(d.get_ui())));
          break;
        }
      }
    }
  }
};

DigitStream::DigitStream() : impl_(std::make_shared<Impl>()) { impl_->terminates = 0; }

DigitStream DigitStream::seeded(unsigned base, std::uint64_t seed) {
  if (base < 2 || base > kMaxBase) throw DomainError("digit stream base must lie in [2, 36]");
  DigitStream s;
  auto impl = std::make_shared<Impl>();
  impl->base = base;
  impl->kind = Impl::Kind::Seeded;
  impl->seed = seed;
  impl->rng.seed(seed);
  s.impl_ = std::move(impl);
  return s;
}

DigitStream DigitStream::from_rational(unsigned base, const BigRational& theta) {
  if (base < 2 || base > kMaxBase) throw DomainError("digit stream base must lie in [2, 36]");
  if (theta < 0 || theta >= 1) throw DomainError("digit stream value must lie in [0, 1)");
  DigitStream s;
  s.impl_ = std::make_shared<Impl>();
  s.impl_->base = base;
  s.impl_->kind = Impl::Kind::Rational;
  s.impl_->theta = theta;
  s.impl_->rational_num = theta.get_num();
  s.impl_->terminates = termination_index(theta.get_den(), base);
  return s;
}

DigitStream DigitStream::from_digits(unsigned base, std::vector<unsigned> digits) {
  if (base < 2 || base > kMaxBase) throw DomainError("digit stream base must lie in [2, 36]");
  BigInt num = 0;
  BigInt den = 1;
  for (unsigned d : digits) {
    if (d >= base) throw DomainError("digit out of range for base");
    num = num * base + d;
    den *= base;
  }
  BigRational theta(num, den);
  theta.canonicalize();
  DigitStream s = from_rational(base, theta);
  s.impl_->kind = Impl::Kind::Digits;
  s.impl_->terminates = digits.size();
  return s;
}

DigitStream DigitStream::parse(unsigned base, std::string_view tag) {
  auto starts = [&](std::string_view p) { return tag.substr(0, p.size()) == p; };
  if (starts("stream:seed=")) {
    const auto rest = tag.substr(12);
    std::uint64_t seed = 0;
    const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), seed);
    if (ec != std::errc() || ptr != rest.data() + rest.size()) throw ParseError("bad stream seed in '" + std::string(tag) + "'");
    return seeded(base, seed);
  }
  if (starts("rational:")) return from_rational(base, parse_rational(tag.substr(9)));
  if (starts("digits:")) {
    std::vector<unsigned> digits;
    for (char c : tag.substr(7)) {
      unsigned d = 0;
      if (c >= '0' && c <= '9') d = static_cast<unsigned>(c - '0');
      else if (c >= 'a' && c <= 'z') d = static_cast<unsigned>(c - 'a' + 10);
      else throw ParseError("bad digit in '" + std::string(tag) + "'");
      digits.push_back(d);
    }
    return from_digits(base, std::move(digits));
  }
  throw ParseError("unknown digit stream tag '" + std::string(tag) + "'");
}

unsigned DigitStream::base() const { return impl_->base; }

std::string DigitStream::tag() const {
  switch (impl_->kind) {
    case Impl::Kind::Seeded:
      return "stream:seed=" + std::to_string(impl_->seed);
    case Impl::Kind::Rational:
      return "rational:" + orbitlab::to_string(impl_->theta);
    case Impl::Kind::Digits: {
      std::lock_guard lock(impl_->mu);
      impl_->extend_to(*impl_->terminates);
      return "digits:" + impl_->cache.substr(0, *impl_->terminates);
    }
  }
  return {};
}

unsigned DigitStream::digit(std::uint64_t i) const {
  if (i == 0) throw DomainError("digit indices start at 1");
  std::lock_guard lock(impl_->mu);
  impl_->extend_to(i);
  const char c = impl_->cache[i - 1];
  return c <= '9' ? static_cast<unsigned>(c - '0') : static_cast<unsigned>(c - 'a' + 10);
}

BigInt DigitStream::window(std::uint64_t start, std::uint64_t count) const {
  if (start == 0) throw DomainError("digit indices start at 1");
  if (count == 0) return 0;
  std::string chunk;
  {
    std::lock_guard lock(impl_->mu);
    impl_->extend_to(start + count - 1);
    chunk = impl_->cache.substr(start - 1, count);
  }
  BigInt w;
  mpz_set_str(w.get_mpz_t(), chunk.c_str(), static_cast<int>(impl_->base));
  return w;
}

std::optional<std::uint64_t> DigitStream::terminates_after() const { return impl_->terminates; }

std::optional<BigRational> DigitStream::rational_value() const {
  if (impl_->kind == Impl::Kind::Seeded) return std::nullopt;
  return impl_->theta;
}

BigRational DigitStream::prefix_value(std::uint64_t t) const {
  BigInt den;
  mpz_ui_pow_ui(den.get_mpz_t(), impl_->base, t);
  BigRational q(window(1, t), den);
  q.canonicalize();
  return q;
}

Turn DigitStream::shifted(std::uint64_t n, unsigned precision) const {
  if (impl_->kind != Impl::Kind::Seeded) {
    const BigRational& th = impl_->theta;
    BigInt scaled;
    const BigInt b(impl_->base);
    const BigInt e(std::to_string(n));
    mpz_powm(scaled.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), th.get_den_mpz_t());
    scaled *= th.get_num();
    mpz_mod(scaled.get_mpz_t(), scaled.get_mpz_t(), th.get_den_mpz_t());
    BigRational value(scaled, th.get_den());
    value.canonicalize();
    return Turn::exact(value);
  }
  const double bits_per_digit = std::log2(static_cast<double>(impl_->base));
  const auto count = static_cast<std::uint64_t>(std::ceil((precision + 4) / bits_per_digit));
  const BigInt w = window(n + 1, count);
  BigInt den;
  mpz_ui_pow_ui(den.get_mpz_t(), impl_->base, count);
  const RealInterval lo = RealInterval::exact(BigRational(w, den), precision + 8);
  const RealInterval hi = RealInterval::exact(BigRational(w + 1, den), precision + 8);
  return Turn::enclosure(hull(lo, hi));
}

}  // namespace orbitlab

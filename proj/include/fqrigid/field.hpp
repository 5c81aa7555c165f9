#pragma once

#include "error.hpp"
#include "numtheory.hpp"

#include <compare>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace fqrigid {

/// A field element in its canonical integer encoding sum c_i p^i, where
/// (c_0, ..., c_{n-1}) are the coefficients of its polynomial representative.
struct Element {
  std::uint32_t code = 0;

  constexpr auto operator<=>(const Element &) const = default;
};

namespace poly {

// Dense polynomials over F_p, lowest coefficient first, no trailing zeros
// except for the zero polynomial which is the empty vector.
using Poly = std::vector<std::uint64_t>;

inline void trim(Poly &a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly rem(Poly a, const Poly &m, std::uint64_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const std::uint64_t lead_inv = nt::powmod(m.back(), p - 2, p);
  while (a.size() > dm) {
    const std::uint64_t c = a.back() * lead_inv % p;
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i)
      a[shift + i] = (a[shift + i] + (p - c) * m[i]) % p;
    trim(a);
  }
  return a;
}

inline Poly mulmod(const Poly &a, const Poly &b, const Poly &m, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  }
  return rem(std::move(r), m, p);
}

inline Poly powmod(Poly base, std::uint64_t e, const Poly &m, std::uint64_t p) {
  Poly r{1};
  base = rem(std::move(base), m, p);
  while (e) {
    if (e & 1) r = mulmod(r, base, m, p);
    base = mulmod(base, base, m, p);
    e >>= 1;
  }
  return r;
}

inline Poly gcd(Poly a, Poly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

/// Ben-Or irreducibility test for a monic polynomial of degree >= 1.
inline bool is_irreducible(const Poly &f, std::uint64_t p) {
  const std::size_t n = f.size() - 1;
  if (n == 1) return true;
  if (f[0] == 0) return false;
  Poly h{0, 1};
  for (std::size_t i = 1; i <= n / 2; ++i) {
    h = powmod(h, p, f, p);
    Poly diff = h;
    diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
    diff[1] = (diff[1] + p - 1) % p;
    trim(diff);
    if (gcd(f, diff, p).size() != 1) return false;
  }
  return true;
}

} // namespace poly

/// An explicit finite field F_{p^n} with full exponential, logarithm and
/// Zech-logarithm tables over a fixed primitive root.
///
/// The modulus is the monic irreducible polynomial of degree n whose
/// coefficient vector (c_0, ..., c_{n-1}) has the smallest encoding
/// sum c_i p^i. The primitive root is the generator of smallest encoding.
/// Instances are immutable after build() and safe to share between threads.
class Field {
public:
  static constexpr std::uint64_t kDefaultCap = std::uint64_t{1} << 22;

  static Field build(std::uint32_t p, std::uint32_t n,
                     std::uint64_t cap = kDefaultCap) {
    if (!nt::is_prime(p)) throw NonPrime("p = " + std::to_string(p));
    if (n == 0) throw DegreeZero("n must be at least 1");
    const std::uint64_t q = nt::saturating_pow(p, n, cap);
    if (q > cap)
      throw FieldTooLarge(std::to_string(p) + "^" + std::to_string(n) +
                          " exceeds cap " + std::to_string(cap));
    Field f;
    f.p_ = p;
    f.n_ = n;
    f.q_ = static_cast<std::uint32_t>(q);
    f.select_modulus();
    f.select_generator();
    f.fill_tables();
    return f;
  }

  std::uint32_t characteristic() const noexcept { return p_; }
  std::uint32_t degree() const noexcept { return n_; }
  std::uint32_t size() const noexcept { return q_; }
  /// Order q - 1 of the multiplicative group.
  std::uint32_t order() const noexcept { return q_ - 1; }

  /// Coefficients (c_0, ..., c_n) of the monic modulus, c_n = 1.
  const std::vector<std::uint32_t> &modulus() const noexcept { return modulus_; }
  Element generator() const noexcept { return generator_; }

  Element zero() const noexcept { return Element{0}; }
  Element one() const noexcept { return Element{1}; }

  /// Image of an integer in the prime field.
  Element from_int(std::int64_t k) const noexcept {
    const std::int64_t r = ((k % p_) + p_) % p_;
    return Element{static_cast<std::uint32_t>(r)};
  }

  Element element(std::uint64_t code) const {
    if (code >= q_)
      throw ExponentOutOfRange("encoding " + std::to_string(code) +
                               " outside [0, " + std::to_string(q_) + ")");
    return Element{static_cast<std::uint32_t>(code)};
  }

  Element from_coeffs(std::span<const std::uint32_t> c) const {
    if (c.size() > n_)
      throw ExponentOutOfRange("more than n coefficients");
    std::uint64_t code = 0;
    for (std::size_t i = c.size(); i-- > 0;) {
      if (c[i] >= p_) throw ExponentOutOfRange("coefficient not reduced mod p");
      code = code * p_ + c[i];
    }
    return Element{static_cast<std::uint32_t>(code)};
  }

  std::vector<std::uint32_t> coeffs(Element x) const {
    std::vector<std::uint32_t> c(n_);
    std::uint32_t code = x.code;
    for (auto &ci : c) {
      ci = code % p_;
      code /= p_;
    }
    return c;
  }

  bool is_zero(Element x) const noexcept { return x.code == 0; }

  Element add(Element x, Element y) const noexcept {
    if (p_ == 2) return Element{x.code ^ y.code};
    if (x.code == 0) return y;
    if (y.code == 0) return x;
    const std::uint32_t lx = log_[x.code];
    std::uint32_t k = log_[y.code] + order() - lx;
    if (k >= order()) k -= order();
    const std::uint32_t z = zech_[k];
    if (z == kNone) return zero();
    std::uint32_t e = lx + z;
    if (e >= order()) e -= order();
    return Element{exp_[e]};
  }

  Element neg(Element x) const noexcept {
    if (p_ == 2 || x.code == 0) return x;
    std::uint32_t e = log_[x.code] + order() / 2;
    if (e >= order()) e -= order();
    return Element{exp_[e]};
  }

  Element sub(Element x, Element y) const noexcept { return add(x, neg(y)); }

  Element mul(Element x, Element y) const noexcept {
    if (x.code == 0 || y.code == 0) return zero();
    std::uint32_t e = log_[x.code] + log_[y.code];
    if (e >= order()) e -= order();
    return Element{exp_[e]};
  }

  Element inv(Element x) const {
    if (x.code == 0) throw DivisionByZero("inverse of 0");
    const std::uint32_t l = log_[x.code];
    return Element{exp_[l == 0 ? 0 : order() - l]};
  }

  Element div(Element x, Element y) const {
    if (y.code == 0) throw DivisionByZero("division by 0");
    if (x.code == 0) return zero();
    std::uint32_t e = log_[x.code] + order() - log_[y.code];
    if (e >= order()) e -= order();
    return Element{exp_[e]};
  }

  /// x^k; negative k requires x != 0, and 0^0 = 1.
  Element pow(Element x, std::int64_t k) const {
    if (x.code == 0) {
      if (k < 0) throw DivisionByZero("negative power of 0");
      return k == 0 ? one() : zero();
    }
    const std::int64_t N = order();
    const std::int64_t km = ((k % N) + N) % N;
    return Element{exp_[nt::mulmod(log_[x.code], static_cast<std::uint64_t>(km),
                                   order())]};
  }

  /// x^(p^j), with j taken mod n.
  Element frobenius(Element x, std::uint64_t j) const noexcept {
    if (x.code == 0) return x;
    const std::uint64_t pj = nt::powmod(p_, j % n_, order());
    return Element{exp_[nt::mulmod(log_[x.code], pj, order())]};
  }

  std::uint32_t log(Element x) const {
    if (x.code == 0) throw LogOfZero("discrete log of 0");
    return log_[x.code];
  }

  /// Unchecked log for hot loops; x must be nonzero.
  std::uint32_t log_unchecked(Element x) const noexcept { return log_[x.code]; }

  Element exp(std::uint64_t e) const noexcept {
    return Element{exp_[e % order()]};
  }

  /// log(1 + g^k), or kNone when 1 + g^k = 0.
  std::uint32_t zech(std::uint32_t k) const noexcept { return zech_[k]; }

  bool in_subfield(Element x, std::uint32_t d) const noexcept {
    return frobenius(x, d) == x;
  }

  bool in_prime_field(Element x) const noexcept { return x.code < p_; }

  /// Divisors d of n with x in F_{p^d}.
  std::vector<std::uint32_t> subfield_profile(Element x) const {
    std::vector<std::uint32_t> out;
    for (auto d : nt::divisors(n_))
      if (in_subfield(x, static_cast<std::uint32_t>(d)))
        out.push_back(static_cast<std::uint32_t>(d));
    return out;
  }

  /// Degree of F_p[x] over F_p.
  std::uint32_t generated_degree(Element x) const {
    return subfield_profile(x).front();
  }

  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

private:
  Field() = default;

  poly::Poly decode(std::uint64_t code) const {
    poly::Poly a(n_);
    for (auto &c : a) {
      c = code % p_;
      code /= p_;
    }
    poly::trim(a);
    return a;
  }

  std::uint32_t encode(const poly::Poly &a) const {
    std::uint64_t code = 0;
    for (std::size_t i = a.size(); i-- > 0;) code = code * p_ + a[i];
    return static_cast<std::uint32_t>(code);
  }

  void select_modulus() {
    const std::uint64_t count = q_;
    for (std::uint64_t c = 0; c < count; ++c) {
      poly::Poly f(n_ + 1);
      std::uint64_t code = c;
      for (std::uint32_t i = 0; i < n_; ++i) {
        f[i] = code % p_;
        code /= p_;
      }
      f[n_] = 1;
      if (poly::is_irreducible(f, p_)) {
        modulus_.assign(f.begin(), f.end());
        modulus_poly_ = std::move(f);
        return;
      }
    }
    throw NotFound("no irreducible polynomial found");
  }

  void select_generator() {
    const auto primes = nt::prime_factors(order());
    for (std::uint64_t c = 1; c < q_; ++c) {
      const poly::Poly x = decode(c);
      bool primitive = true;
      for (auto l : primes) {
        if (poly::powmod(x, order() / l, modulus_poly_, p_) == poly::Poly{1}) {
          primitive = false;
          break;
        }
      }
      if (primitive) {
        generator_ = Element{static_cast<std::uint32_t>(c)};
        return;
      }
    }
    // F_2^* is trivial and 1 generates it; primes is empty there so the loop
    // already returned. Reaching here indicates a broken modulus.
    throw NotFound("no primitive root found");
  }

  void fill_tables() {
    exp_.assign(order(), 0);
    log_.assign(q_, kNone);
    const poly::Poly g = decode(generator_.code);
    std::vector<std::uint64_t> cur(n_, 0), next(2 * n_, 0);
    cur[0] = 1;
    for (std::uint32_t e = 0; e < order(); ++e) {
      std::uint64_t code = 0;
      for (std::size_t i = n_; i-- > 0;) code = code * p_ + cur[i];
      exp_[e] = static_cast<std::uint32_t>(code);
      log_[code] = e;
      // cur <- cur * g mod modulus
      std::fill(next.begin(), next.end(), 0);
      for (std::size_t k = 0; k < g.size(); ++k) {
        if (g[k] == 0) continue;
        for (std::size_t i = 0; i < n_; ++i)
          next[i + k] = (next[i + k] + cur[i] * g[k]) % p_;
      }
      for (std::size_t d = 2 * n_ - 1; d >= n_; --d) {
        const std::uint64_t c = next[d];
        if (c == 0) continue;
        next[d] = 0;
        for (std::size_t i = 0; i < n_; ++i)
          next[d - n_ + i] = (next[d - n_ + i] + (p_ - c) * modulus_[i]) % p_;
      }
      std::copy(next.begin(), next.begin() + n_, cur.begin());
    }
    zech_.assign(order(), kNone);
    if (p_ == 2) {
      for (std::uint32_t k = 0; k < order(); ++k) {
        const std::uint32_t s = exp_[k] ^ 1u;
        zech_[k] = s == 0 ? kNone : log_[s];
      }
    } else {
      for (std::uint32_t k = 0; k < order(); ++k) {
        const std::uint32_t c = exp_[k];
        const std::uint32_t c0 = c % p_;
        const std::uint32_t s = c - c0 + (c0 + 1) % p_;
        zech_[k] = s == 0 ? kNone : log_[s];
      }
    }
  }

  std::uint32_t p_ = 0;
  std::uint32_t n_ = 0;
  std::uint32_t q_ = 0;
  std::vector<std::uint32_t> modulus_;
  poly::Poly modulus_poly_;
  Element generator_{};
  std::vector<std::uint32_t> exp_;
  std::vector<std::uint32_t> log_;
  std::vector<std::uint32_t> zech_;
};

} // namespace fqrigid

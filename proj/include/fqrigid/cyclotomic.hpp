#pragma once

#include "numtheory.hpp"

#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

namespace fqrigid {

/// Coefficients of the d-th cyclotomic polynomial, lowest degree first.
inline std::vector<std::int64_t> cyclotomic_polynomial(std::uint32_t d) {
  // x^d - 1 divided by Phi_e for every proper divisor e of d.
  std::vector<std::int64_t> num(d + 1, 0);
  num[0] = -1;
  num[d] = 1;
  for (auto e : nt::divisors(d)) {
    if (e == d) continue;
    const auto den = cyclotomic_polynomial(static_cast<std::uint32_t>(e));
    // exact division by a monic polynomial
    std::vector<std::int64_t> quo(num.size() - den.size() + 1, 0);
    for (std::size_t i = quo.size(); i-- > 0;) {
      const std::int64_t c = num[i + den.size() - 1];
      quo[i] = c;
      for (std::size_t k = 0; k < den.size(); ++k) num[i + k] -= c * den[k];
    }
    num = std::move(quo);
  }
  return num;
}

/// An element of Z[zeta_d] in the power basis 1, zeta, ..., zeta^{phi(d)-1}.
/// Equality is exact.
class CyclotomicInteger {
public:
  explicit CyclotomicInteger(std::uint32_t d) : d_(d), phi_(cyclotomic_polynomial(d)) {
    c_.assign(phi_.size() - 1, 0);
  }

  /// sum_k counts[k] zeta^k, k = 0..d-1.
  static CyclotomicInteger from_counts(std::uint32_t d, const std::vector<std::int64_t> &counts) {
    CyclotomicInteger z(d);
    z.reduce(counts);
    return z;
  }

  std::uint32_t order() const noexcept { return d_; }
  const std::vector<std::int64_t> &coeffs() const noexcept { return c_; }

  /// The rational integer this element equals, if it is one.
  std::optional<std::int64_t> as_integer() const {
    for (std::size_t k = 1; k < c_.size(); ++k)
      if (c_[k] != 0) return std::nullopt;
    return c_.empty() ? 0 : c_[0];
  }

  std::complex<double> value() const {
    std::complex<double> s{};
    for (std::size_t k = 0; k < c_.size(); ++k)
      s += static_cast<double>(c_[k]) *
           std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / d_);
    return s;
  }

  CyclotomicInteger operator+(const CyclotomicInteger &o) const {
    CyclotomicInteger r = *this;
    for (std::size_t k = 0; k < c_.size(); ++k) r.c_[k] += o.c_[k];
    return r;
  }

  CyclotomicInteger operator*(const CyclotomicInteger &o) const {
    std::vector<std::int64_t> prod(d_, 0);
    for (std::size_t a = 0; a < c_.size(); ++a)
      for (std::size_t b = 0; b < o.c_.size(); ++b) prod[(a + b) % d_] += c_[a] * o.c_[b];
    return from_counts(d_, prod);
  }

  /// Complex conjugate, zeta -> zeta^{-1}.
  CyclotomicInteger conj() const {
    std::vector<std::int64_t> counts(d_, 0);
    for (std::size_t k = 0; k < c_.size(); ++k) counts[(d_ - k) % d_] += c_[k];
    return from_counts(d_, counts);
  }

  bool operator==(const CyclotomicInteger &o) const { return d_ == o.d_ && c_ == o.c_; }

private:
  void reduce(std::vector<std::int64_t> a) {
    const std::size_t deg = phi_.size() - 1;
    for (std::size_t i = a.size(); i-- > deg;) {
      const std::int64_t c = a[i];
      if (c == 0) continue;
      for (std::size_t k = 0; k <= deg; ++k) a[i - deg + k] -= c * phi_[k];
    }
    a.resize(deg);
    c_ = std::move(a);
  }

  std::uint32_t d_;
  std::vector<std::int64_t> phi_;
  std::vector<std::int64_t> c_;
};

} // namespace fqrigid

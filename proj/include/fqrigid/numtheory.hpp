#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace fqrigid::nt {

inline bool is_prime(std::uint64_t m) {
  if (m < 2) return false;
  for (std::uint64_t k = 2; k * k <= m; ++k)
    if (m % k == 0) return false;
  return true;
}

/// Distinct prime divisors of m, ascending.
inline std::vector<std::uint64_t> prime_factors(std::uint64_t m) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t k = 2; k * k <= m; ++k) {
    if (m % k == 0) {
      out.push_back(k);
      while (m % k == 0) m /= k;
    }
  }
  if (m > 1) out.push_back(m);
  return out;
}

/// All positive divisors of m, ascending.
inline std::vector<std::uint64_t> divisors(std::uint64_t m) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t k = 1; k * k <= m; ++k) {
    if (m % k == 0) {
      out.push_back(k);
      if (k != m / k) out.push_back(m / k);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Returns (p, n) when q = p^n with p prime, nothing otherwise.
inline std::optional<std::pair<std::uint32_t, std::uint32_t>>
prime_power(std::uint64_t q) {
  if (q < 2) return std::nullopt;
  auto ps = prime_factors(q);
  if (ps.size() != 1) return std::nullopt;
  std::uint32_t n = 0;
  while (q > 1) {
    q /= ps[0];
    ++n;
  }
  return std::pair{static_cast<std::uint32_t>(ps[0]), n};
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  base %= m;
  while (e) {
    if (e & 1) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    e >>= 1;
  }
  return r;
}

/// Integer power with saturation at `cap + 1`, so callers can compare against
/// a cap without overflow.
inline std::uint64_t saturating_pow(std::uint64_t base, std::uint32_t e,
                                    std::uint64_t cap) {
  std::uint64_t r = 1;
  for (std::uint32_t i = 0; i < e; ++i) {
    if (base != 0 && r > cap / base) return cap + 1;
    r *= base;
  }
  return r;
}

} // namespace fqrigid::nt

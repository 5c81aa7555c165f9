#pragma once

#include "directions.hpp"
#include "field.hpp"
#include "mult_structure.hpp"
#include "parallel.hpp"

#include <chrono>
#include <optional>
#include <string>
#include <vector>

namespace fqrigid {

namespace detail {

/// p (d - r)^2 >= k^2 r d^2 in exact arithmetic.
inline bool weil_p_bound(std::uint64_t p, std::uint64_t k, std::uint64_t d, std::uint64_t r) {
  using u128 = unsigned __int128;
  const u128 lhs = u128{p} * (d - r) * (d - r);
  const u128 rhs = u128{k} * k * r * d * d;
  return lhs >= rhs;
}

inline double weil_p_threshold(std::uint64_t k, std::uint64_t d, std::uint64_t r) {
  const double dr = static_cast<double>(d - r);
  return static_cast<double>(k * k * r * d * d) / (dr * dr);
}

/// Log-domain accumulator for sums of field elements.
struct LogSum {
  const Field *F;
  bool zero = true;
  std::uint32_t log = 0;

  void add_log(std::uint32_t t) noexcept {
    if (zero) {
      zero = false;
      log = t;
      return;
    }
    const std::uint32_t N = F->order();
    std::uint32_t k = t + N - log;
    if (k >= N) k -= N;
    const std::uint32_t z = F->zech(k);
    if (z == Field::kNone) {
      zero = true;
      return;
    }
    log += z;
    if (log >= N) log -= N;
  }
};

/// Per-x exponent tables (p^i - 1) log(x) mod (q-1), i = 0..n-1, x = 1..q-1.
inline std::vector<std::vector<std::uint32_t>> twist_exponents(const Field &F) {
  const std::uint32_t N = F.order();
  std::vector<std::vector<std::uint32_t>> ex(F.degree(), std::vector<std::uint32_t>(F.size(), 0));
  for (std::uint32_t i = 0; i < F.degree(); ++i) {
    const std::uint64_t pi1 = (nt::powmod(F.characteristic(), i, N) + N - 1) % N;
    for (std::uint32_t x = 1; x < F.size(); ++x)
      ex[i][x] = static_cast<std::uint32_t>(nt::mulmod(F.log_unchecked(Element{x}), pi1, N));
  }
  return ex;
}

} // namespace detail

/// Exact test of p >= (2n-1)^2 r d^2 / (d-r)^2.
inline bool check_p_bound(std::uint64_t p, std::uint64_t n, std::uint64_t d, std::uint64_t r) {
  if (n < 2 || d < 2 || r < 1 || r > d - 1)
    throw ParamOutOfRange("need n, d >= 2 and 1 <= r <= d-1");
  return detail::weil_p_bound(p, 2 * n - 1, d, r);
}

struct SearchOptions {
  unsigned jobs = 1;
  std::uint64_t cap = std::uint64_t{1} << 28;
};

/// Additive maps f (as coefficient tuples, zero map excluded) with
/// f(x)/x in D for every nonzero x, in increasing order of the tuple
/// encoding sum c_i q^i.
inline std::vector<LinearizedMap> enumerate_additive_in_D(const CosetUnion &D,
                                                          const SearchOptions &opts = {}) {
  const Field &F = D.field();
  const std::uint32_t n = F.degree();
  const std::uint32_t q = F.size();
  const std::uint32_t N = F.order();
  const std::uint64_t space = nt::saturating_pow(q, n, opts.cap);
  if (space > opts.cap)
    throw SearchSpaceTooLarge("q^n exceeds search cap " + std::to_string(opts.cap));

  const auto ex = detail::twist_exponents(F);
  std::vector<std::uint8_t> in_d(N);
  for (std::uint32_t e = 0; e < N; ++e) in_d[e] = D.contains_log(e);

  const std::uint64_t tail = space / q; // q^(n-1) tuples per leading coefficient
  std::vector<std::vector<std::vector<std::uint32_t>>> by_lead(q);

  detail::parallel_for(q, opts.jobs, [&](std::uint64_t lead) {
    std::vector<std::uint32_t> c(n, 0), logc(n, 0);
    c[n - 1] = static_cast<std::uint32_t>(lead);
    for (std::uint64_t t = 0; t < tail; ++t) {
      std::uint64_t rest = t;
      bool nonzero = false;
      for (std::uint32_t i = 0; i + 1 < n; ++i) {
        c[i] = static_cast<std::uint32_t>(rest % q);
        rest /= q;
      }
      for (std::uint32_t i = 0; i < n; ++i) {
        if (c[i]) {
          nonzero = true;
          logc[i] = F.log_unchecked(Element{c[i]});
        }
      }
      if (!nonzero) continue;
      bool ok = true;
      for (std::uint32_t x = 1; x < q && ok; ++x) {
        detail::LogSum s{&F};
        for (std::uint32_t i = 0; i < n; ++i) {
          if (!c[i]) continue;
          std::uint32_t e = logc[i] + ex[i][x];
          if (e >= N) e -= N;
          s.add_log(e);
        }
        ok = !s.zero && in_d[s.log];
      }
      if (ok) by_lead[lead].push_back(c);
    }
  });

  std::vector<LinearizedMap> out;
  for (auto &bucket : by_lead)
    for (auto &c : bucket) {
      std::vector<Element> coeffs(n);
      for (std::uint32_t i = 0; i < n; ++i) coeffs[i] = Element{c[i]};
      out.emplace_back(F, std::move(coeffs));
    }
  return out;
}

struct Survivor {
  std::vector<std::uint32_t> coeffs;
  /// Present when the map is a x^{p^j} (b = 0 for these representatives).
  std::optional<FrobeniusWitness> witness;
  std::uint64_t direction_count = 0;

  bool exceptional() const noexcept { return !witness.has_value(); }
  bool operator==(const Survivor &) const = default;
};

/// Outcome of an exhaustive check of the coset-union rigidity statement on
/// one instance (p, n, d, M).
struct RigidityReport {
  std::uint32_t p = 0, n = 0, q = 0, d = 0;
  std::vector<std::uint32_t> cosets;
  std::uint32_t r = 0;
  std::uint64_t coset_union_size = 0;
  /// p >= (2n-1)^2 r d^2/(d-r)^2; false when the parameters are outside
  /// n, d >= 2, 1 <= r <= d-1.
  bool p_bound = false;
  bool p_bound_applicable = false;
  double p_bound_threshold = 0.0;
  /// |D| <= (q+1)/2, which forces |D_f| <= (q+1)/2 for every survivor.
  bool small_d = false;
  std::uint64_t search_space = 0;
  std::vector<Survivor> survivors;
  std::uint64_t frobenius_linear = 0;
  std::uint64_t exceptional = 0;
  std::vector<std::string> violations;
  double seconds = 0.0;
};

inline Survivor classify_survivor(const LinearizedMap &L) {
  Survivor s;
  for (auto c : L.coeffs()) s.coeffs.push_back(c.code);
  if (auto j = L.monomial_index())
    s.witness = FrobeniusWitness{L.coeffs()[*j], *j, L.field().zero()};
  s.direction_count = directions_of_additive(L).size();
  return s;
}

inline RigidityReport verify_thm_main(const CosetUnion &D, const SearchOptions &opts = {}) {
  const auto start = std::chrono::steady_clock::now();
  const Field &F = D.field();
  RigidityReport rep;
  rep.p = F.characteristic();
  rep.n = F.degree();
  rep.q = F.size();
  rep.d = D.index();
  rep.cosets = D.exponents();
  rep.r = D.cosets();
  rep.coset_union_size = D.size();
  rep.p_bound_applicable = rep.n >= 2 && rep.d >= 2 && rep.r <= rep.d - 1;
  if (rep.p_bound_applicable) {
    rep.p_bound = check_p_bound(rep.p, rep.n, rep.d, rep.r);
    rep.p_bound_threshold = detail::weil_p_threshold(2 * rep.n - 1, rep.d, rep.r);
  }
  rep.small_d = 2 * rep.coset_union_size <= std::uint64_t{rep.q} + 1;
  rep.search_space = nt::saturating_pow(rep.q, rep.n, opts.cap) - 1;

  for (const auto &L : enumerate_additive_in_D(D, opts)) {
    Survivor s = classify_survivor(L);
    if (s.exceptional()) {
      ++rep.exceptional;
      if (rep.p_bound && 2 * s.direction_count <= std::uint64_t{rep.q} + 1) {
        std::string c;
        for (auto v : s.coeffs) c += (c.empty() ? "" : ",") + std::to_string(v);
        rep.violations.push_back("THEOREM VIOLATION: exceptional additive map (" + c +
                                 ") with directions inside D under the p-bound");
      }
    } else {
      ++rep.frobenius_linear;
    }
    rep.survivors.push_back(std::move(s));
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

inline RigidityReport verify_thm_main(std::uint32_t p, std::uint32_t n, std::uint32_t d,
                                      std::vector<std::uint32_t> M,
                                      const SearchOptions &opts = {}) {
  const Field F = Field::build(p, n);
  return verify_thm_main(CosetUnion(F, d, std::move(M)), opts);
}

struct BruteForceResult {
  std::uint32_t q = 0;
  std::uint64_t functions = 0;
  /// Functions with f(0) = 0 and |D_f| <= (q+1)/2.
  std::uint64_t few_directions = 0;
  std::uint64_t few_directions_additive = 0;
  std::uint64_t violations = 0;
};

/// Runs over every f with f(0) = 0 and counts those with at most (q+1)/2
/// directions that fail to be additive.
inline BruteForceResult verify_thm_directions_bruteforce(std::uint32_t q) {
  if (q > 9) throw SearchSpaceTooLarge("brute force limited to q <= 9");
  const auto pn = nt::prime_power(q);
  if (!pn) throw ParamOutOfRange(std::to_string(q) + " is not a prime power");
  const Field F = Field::build(pn->first, pn->second);

  std::vector<std::uint8_t> sub(q * q), mul(q * q), add(q * q);
  for (std::uint32_t a = 0; a < q; ++a)
    for (std::uint32_t b = 0; b < q; ++b) {
      sub[a * q + b] = static_cast<std::uint8_t>(F.sub(Element{a}, Element{b}).code);
      mul[a * q + b] = static_cast<std::uint8_t>(F.mul(Element{a}, Element{b}).code);
      add[a * q + b] = static_cast<std::uint8_t>(F.add(Element{a}, Element{b}).code);
    }
  struct Pair {
    std::uint8_t x, y, inv_dx;
  };
  std::vector<Pair> pairs;
  for (std::uint32_t x = 0; x < q; ++x)
    for (std::uint32_t y = x + 1; y < q; ++y)
      pairs.push_back({static_cast<std::uint8_t>(x), static_cast<std::uint8_t>(y),
                       static_cast<std::uint8_t>(F.inv(Element{sub[y * q + x]}).code)});

  const std::uint32_t limit = (q + 1) / 2;
  BruteForceResult res;
  res.q = q;
  std::vector<std::uint8_t> f(q, 0);
  while (true) {
    ++res.functions;
    std::uint32_t mask = 0;
    bool few = true;
    for (const auto &pr : pairs) {
      mask |= 1u << mul[sub[f[pr.y] * q + f[pr.x]] * q + pr.inv_dx];
      if (static_cast<std::uint32_t>(std::popcount(mask)) > limit) {
        few = false;
        break;
      }
    }
    if (few) {
      ++res.few_directions;
      bool additive = true;
      for (std::uint32_t x = 0; x < q && additive; ++x)
        for (std::uint32_t y = x; y < q && additive; ++y)
          additive = f[add[x * q + y]] == add[f[x] * q + f[y]];
      if (additive)
        ++res.few_directions_additive;
      else
        ++res.violations;
    }
    // odometer over f(1), ..., f(q-1)
    std::uint32_t i = 1;
    while (i < q && ++f[i] == q) f[i++] = 0;
    if (i == q) break;
  }
  return res;
}

struct ExceptionalExample {
  std::uint32_t d = 0;
  /// Cosets met by the directions of f: the smallest union containing them.
  std::vector<std::uint32_t> cosets;
  /// Coefficients of f normalised to f(1) = 1.
  std::vector<std::uint32_t> coeffs;
  /// Smallest coefficient tuple among the Frobenius conjugates of f.
  std::vector<std::uint32_t> orbit_representative;
  bool p_bound = false;

  bool operator==(const ExceptionalExample &) const = default;
};

/// Additive maps that are not of the form a x^{p^j} but whose directions lie
/// in a union of at most r_max cosets of the index-d subgroup, for each d in
/// d_range. Maps are listed once per scaling class f -> c f, through the
/// representative with f(1) = 1.
inline std::vector<ExceptionalExample>
find_exceptional_examples(const Field &F, const std::vector<std::uint32_t> &d_range,
                          std::uint32_t r_max, const SearchOptions &opts = {}) {
  const std::uint32_t n = F.degree();
  const std::uint32_t q = F.size();
  const std::uint32_t N = F.order();
  const std::uint64_t space = nt::saturating_pow(q, n, opts.cap);
  if (space > opts.cap)
    throw SearchSpaceTooLarge("q^n exceeds search cap " + std::to_string(opts.cap));
  const auto ex = detail::twist_exponents(F);
  const std::uint64_t tail = space / q; // free choices of c_1..c_{n-1}

  std::vector<ExceptionalExample> out;
  for (auto d : d_range) {
    if (d == 0 || N % d != 0)
      throw IndexNotDividing("d = " + std::to_string(d) + " does not divide q-1");
    std::vector<std::vector<ExceptionalExample>> slots(tail);
    detail::parallel_for(tail, opts.jobs, [&](std::uint64_t t) {
      std::vector<Element> c(n);
      std::uint64_t rest = t;
      Element s = F.zero();
      for (std::uint32_t i = 1; i < n; ++i) {
        c[i] = Element{static_cast<std::uint32_t>(rest % q)};
        rest /= q;
        s = F.add(s, c[i]);
      }
      c[0] = F.sub(F.one(), s);
      std::uint32_t nonzero = 0;
      for (auto ci : c) nonzero += ci.code != 0;
      if (nonzero < 2) return;
      std::vector<std::uint8_t> hit(d, 0);
      std::uint32_t r = 0;
      for (std::uint32_t x = 1; x < q; ++x) {
        detail::LogSum acc{&F};
        for (std::uint32_t i = 0; i < n; ++i) {
          if (!c[i].code) continue;
          std::uint32_t e = F.log_unchecked(c[i]) + ex[i][x];
          if (e >= N) e -= N;
          acc.add_log(e);
        }
        if (acc.zero) return;
        auto &h = hit[acc.log % d];
        if (!h) {
          h = 1;
          if (++r > r_max) return;
        }
      }
      ExceptionalExample exm;
      exm.d = d;
      for (std::uint32_t m = 0; m < d; ++m)
        if (hit[m]) exm.cosets.push_back(m);
      for (auto ci : c) exm.coeffs.push_back(ci.code);
      exm.orbit_representative = exm.coeffs;
      for (std::uint32_t k = 1; k < n; ++k) {
        std::vector<std::uint32_t> conj;
        for (auto ci : c) conj.push_back(F.frobenius(ci, k).code);
        if (std::lexicographical_compare(conj.rbegin(), conj.rend(),
                                         exm.orbit_representative.rbegin(),
                                         exm.orbit_representative.rend()))
          exm.orbit_representative = conj;
      }
      exm.p_bound = n >= 2 && d >= 2 && r <= d - 1 &&
                    detail::weil_p_bound(F.characteristic(), 2 * n - 1, d, r);
      slots[t].push_back(std::move(exm));
    });
    // Slot t corresponds to (c_1, ..., c_{n-1}) with c_1 least significant;
    // re-sort by the full tuple encoding with c_{n-1} most significant.
    std::vector<ExceptionalExample> found;
    for (auto &sl : slots)
      for (auto &e : sl) found.push_back(std::move(e));
    std::sort(found.begin(), found.end(), [](const auto &a, const auto &b) {
      return std::lexicographical_compare(a.coeffs.rbegin(), a.coeffs.rend(),
                                          b.coeffs.rbegin(), b.coeffs.rend());
    });
    out.insert(out.end(), found.begin(), found.end());
  }
  return out;
}

} // namespace fqrigid

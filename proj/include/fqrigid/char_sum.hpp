#pragma once

#include "cyclotomic.hpp"
#include "field.hpp"
#include "mult_structure.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace fqrigid {

/// A character sum over F_p kept exactly as a histogram of theta-exponents:
/// value = sum_k counts[k] theta^k with theta = exp(2 pi i / d). Terms where
/// the character argument vanishes contribute nothing.
struct ExactCharSum {
  std::uint32_t d = 1;
  std::vector<std::int64_t> counts;

  std::complex<double> value() const {
    std::complex<double> s{};
    for (std::uint32_t k = 0; k < d; ++k)
      if (counts[k]) s += static_cast<double>(counts[k]) * root_of_unity(k, d);
    return s;
  }

  CyclotomicInteger exact() const { return CyclotomicInteger::from_counts(d, counts); }

  /// |sum|^2 as an element of Z[theta].
  CyclotomicInteger norm_squared() const { return exact() * exact().conj(); }
};

enum class Verdict { Pass, Fail, NotApplicable };

constexpr const char *to_string(Verdict v) noexcept {
  switch (v) {
  case Verdict::Pass: return "pass";
  case Verdict::Fail: return "fail";
  case Verdict::NotApplicable: return "not-applicable";
  }
  return "?";
}

struct BoundAudit {
  ExactCharSum sum;
  std::complex<double> value;
  double bound = 0.0;
  /// bound - |value|
  double margin = 0.0;
  std::vector<std::pair<std::string, bool>> hypotheses;
  std::vector<std::pair<std::string, std::int64_t>> details;
  Verdict verdict = Verdict::NotApplicable;

  bool hypotheses_hold() const {
    for (const auto &h : hypotheses)
      if (!h.second) return false;
    return true;
  }
};

namespace detail {

inline void finish_audit(BoundAudit &a, double tol) {
  a.value = a.sum.value();
  a.margin = a.bound - std::abs(a.value);
  if (!a.hypotheses_hold())
    a.verdict = Verdict::NotApplicable;
  else
    a.verdict = std::abs(a.value) <= a.bound + tol ? Verdict::Pass : Verdict::Fail;
}

/// Order of the multiplicative group of F_p[x], p^e - 1.
inline std::uint64_t generated_group_order(const Field &F, Element x) {
  return nt::saturating_pow(F.characteristic(), F.generated_degree(x), F.size()) - 1;
}

} // namespace detail

/// Two shifted characters chi^{j1}(lambda - xi1) chi^{j2}(lambda - xi2) summed
/// over the prime field; both characters have base order d.
struct WeilInstance {
  const Field *field;
  Element xi1, xi2;
  std::uint32_t d;
  std::uint32_t j1, j2;
};

inline bool galois_conjugates(const Field &F, Element a, Element b) {
  for (std::uint32_t r = 0; r < F.degree(); ++r)
    if (a == F.frobenius(b, r)) return true;
  return false;
}

/// chi^j is trivial on F_p[x]^* exactly when it kills a generator of that
/// group, g^{(q-1)/(p^e-1)}.
inline bool character_trivial_on_generated(const Field &F, std::uint32_t d, std::uint32_t j,
                                           Element x) {
  const std::uint64_t sub = detail::generated_group_order(F, x);
  const std::uint64_t step = F.order() / sub;
  return nt::mulmod(step, j, d) == 0;
}

inline BoundAudit weil_pair_sum(const WeilInstance &in, double tol = 1e-9) {
  const Field &F = *in.field;
  const Character chi1(F, in.d, in.j1), chi2(F, in.d, in.j2);
  BoundAudit a;
  a.sum.d = in.d;
  a.sum.counts.assign(in.d, 0);
  for (std::uint32_t l = 0; l < F.characteristic(); ++l) {
    const auto e1 = chi1.exponent(F.sub(Element{l}, in.xi1));
    const auto e2 = chi2.exponent(F.sub(Element{l}, in.xi2));
    if (e1 && e2) ++a.sum.counts[(*e1 + *e2) % in.d];
  }
  a.bound = (2.0 * F.degree() - 1.0) * std::sqrt(static_cast<double>(F.characteristic()));
  a.hypotheses.emplace_back("not_galois_conjugate", !galois_conjugates(F, in.xi1, in.xi2));
  a.hypotheses.emplace_back(
      "character_nontrivial_on_generated_subfield",
      !character_trivial_on_generated(F, in.d, in.j1, in.xi1) ||
          !character_trivial_on_generated(F, in.d, in.j2, in.xi2));
  a.details.emplace_back("subfield_group_order_1",
                         static_cast<std::int64_t>(detail::generated_group_order(F, in.xi1)));
  a.details.emplace_back("subfield_group_order_2",
                         static_cast<std::int64_t>(detail::generated_group_order(F, in.xi2)));
  detail::finish_audit(a, tol);
  return a;
}

/// sum over lambda in F_p of chi^j((a u - b lambda v)/(u - lambda v)).
inline BoundAudit quotient_sum_cor22(const Field &F, std::uint32_t d, std::uint32_t j, Element a,
                                     Element b, Element u, Element v, double tol = 1e-9) {
  if (a.code == 0 || b.code == 0 || u.code == 0 || v.code == 0)
    throw DegenerateInput("a, b, u, v must be nonzero");
  const Element uv = F.div(u, v);
  if (F.in_prime_field(uv)) throw DegenerateInput("u/v lies in F_p; the sum has a pole");
  const Character chi(F, d, j);
  const Element ab = F.div(a, b);
  BoundAudit out;
  out.sum.d = d;
  out.sum.counts.assign(d, 0);
  for (std::uint32_t l = 0; l < F.characteristic(); ++l) {
    const Element lam{l};
    const Element num = F.sub(F.mul(a, u), F.mul(F.mul(b, lam), v));
    const Element den = F.sub(u, F.mul(lam, v));
    if (auto e = chi.exponent(F.div(num, den))) ++out.sum.counts[*e];
  }
  out.bound = (2.0 * F.degree() - 1.0) * std::sqrt(static_cast<double>(F.characteristic()));
  const std::uint64_t norm_exp = F.order() / (F.characteristic() - 1);
  out.hypotheses.emplace_back("character_nontrivial", !chi.trivial());
  out.hypotheses.emplace_back("chi_ab_not_one", chi.exponent(ab).value() != 0);
  out.hypotheses.emplace_back("ab_norm_not_one",
                              F.pow(ab, static_cast<std::int64_t>(norm_exp)) != F.one());
  out.hypotheses.emplace_back("uv_not_in_prime_field", true);
  detail::finish_audit(out, tol);
  return out;
}

/// Over F_{p^{2n}}: sum over lambda in F_p of chi^j((b - lambda)/(a - lambda)),
/// with the lambda = a term (possible only when a lies in F_p) counted as 0.
inline BoundAudit subfield_quotient_sum_cor23(const Field &F, std::uint32_t d, std::uint32_t j,
                                              Element a, Element b, double tol = 1e-9) {
  if (F.degree() % 2 != 0)
    throw PreconditionViolated("field degree must be even");
  const std::uint32_t half = F.degree() / 2;
  const Character chi(F, d, j);
  BoundAudit out;
  out.sum.d = d;
  out.sum.counts.assign(d, 0);
  for (std::uint32_t l = 0; l < F.characteristic(); ++l) {
    const Element lam{l};
    const Element den = F.sub(a, lam);
    if (den.code == 0) continue;
    if (auto e = chi.exponent(F.div(F.sub(b, lam), den))) ++out.sum.counts[*e];
  }
  out.bound = (4.0 * half - 1.0) * std::sqrt(static_cast<double>(F.characteristic()));
  out.hypotheses.emplace_back("character_nontrivial", !chi.trivial());
  out.hypotheses.emplace_back("a_in_half_subfield_nonzero",
                              a.code != 0 && F.in_subfield(a, half));
  out.hypotheses.emplace_back("b_generates_field", F.generated_degree(b) == F.degree());
  detail::finish_audit(out, tol);
  return out;
}

struct RouAudit {
  std::uint32_t d = 0;
  std::uint32_t r = 0;
  double l1 = 0.0;
  double l2 = 0.0;
  double bound = 0.0;
  bool l1_ok = false;
  bool l2_ok = false;
  /// sum_j |c_j|^2 evaluated in Z[theta]; present for d <= 12.
  std::optional<std::int64_t> exact_l2;
};

/// L1 and L2 norms of the coefficient vector c_j = sum_k theta^{-j m_k}.
inline RouAudit rou_l1_audit(std::uint32_t d, const std::vector<std::uint32_t> &M,
                             double tol = 1e-9) {
  if (M.empty()) throw EmptyM("coset exponent set is empty");
  if (d == 0) throw ParamOutOfRange("d must be positive");
  for (auto m : M)
    if (m >= d) throw ExponentOutOfRange("exponent outside [0, d)");
  RouAudit a;
  a.d = d;
  a.r = static_cast<std::uint32_t>(M.size());
  for (const auto &c : psi_coefficients(d, M)) {
    a.l1 += std::abs(c);
    a.l2 += std::norm(c);
  }
  a.bound = d * std::sqrt(static_cast<double>(a.r));
  a.l1_ok = a.l1 <= a.bound + tol;
  a.l2_ok = std::abs(a.l2 - static_cast<double>(d) * a.r) <= 1e-6;
  if (d <= 12) {
    std::vector<std::int64_t> counts(d, 0);
    for (std::uint32_t j = 0; j < d; ++j)
      for (auto mk : M)
        for (auto ml : M) counts[(std::uint64_t{j} * (mk + d - ml)) % d] += 1;
    a.exact_l2 = CyclotomicInteger::from_counts(d, counts).as_integer();
  }
  return a;
}

/// First element, in encoding order, of the F_p-span of `basis` that lies in
/// no proper subfield of F_{p^{2n}}.
inline Element subspace_generator(const Field &F, const std::vector<Element> &basis) {
  const std::uint32_t p = F.characteristic();
  if (p == 2) throw PreconditionViolated("p must be odd");
  if (F.degree() % 2 != 0 || F.degree() < 4)
    throw PreconditionViolated("field degree must be 2n with n >= 2");
  const std::uint32_t half = F.degree() / 2;
  if (basis.size() != half) throw PreconditionViolated("basis must have n elements");

  const std::uint64_t count = nt::saturating_pow(p, half, F.size());
  std::vector<Element> span;
  span.reserve(count);
  for (std::uint64_t t = 0; t < count; ++t) {
    std::uint64_t rest = t;
    Element s = F.zero();
    for (std::uint32_t i = 0; i < half; ++i) {
      s = F.add(s, F.mul(Element{static_cast<std::uint32_t>(rest % p)}, basis[i]));
      rest /= p;
    }
    span.push_back(s);
  }
  std::sort(span.begin(), span.end());
  if (std::adjacent_find(span.begin(), span.end()) != span.end())
    throw PreconditionViolated("basis is linearly dependent");
  if (!std::binary_search(span.begin(), span.end(), F.one()))
    throw PreconditionViolated("1 is not in the span");
  const bool inside_half = std::all_of(span.begin(), span.end(),
                                       [&](Element x) { return F.in_subfield(x, half); });
  if (inside_half) throw PreconditionViolated("the span is the subfield F_{p^n}");
  for (auto x : span)
    if (F.generated_degree(x) == F.degree()) return x;
  throw NotFound("no generator in the span");
}

/// One audited instance with the inputs that produced it.
struct AuditRow {
  std::string mode;
  std::vector<std::pair<std::string, std::int64_t>> inputs;
  BoundAudit audit;
};

namespace detail {

inline std::vector<std::uint32_t> primes_up_to(std::uint32_t m) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t k = 2; k <= m; ++k)
    if (nt::is_prime(k)) out.push_back(k);
  return out;
}

template <class Rng> std::uint64_t pick(Rng &rng, std::uint64_t lo, std::uint64_t hi) {
  return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
}

/// Random divisor of m that is at least 2.
template <class Rng> std::uint32_t pick_divisor(Rng &rng, std::uint64_t m) {
  auto ds = nt::divisors(m);
  ds.erase(ds.begin());
  return static_cast<std::uint32_t>(ds[pick(rng, 0, ds.size() - 1)]);
}

/// Draws (p, degree) pairs for `count` instances, then visits them grouped by
/// field so each field is built once. Every instance gets its own generator
/// seeded from (seed, index), so results do not depend on grouping.
template <class Visit>
void batch_by_field(std::uint64_t count, std::uint64_t seed, std::uint32_t p_min,
                    std::uint32_t p_max,
                    std::uint32_t deg_min, std::uint32_t deg_max, std::uint32_t deg_mult,
                    std::uint64_t cap, Visit &&visit) {
  std::mt19937_64 rng(seed);
  auto primes = primes_up_to(p_max);
  std::erase_if(primes, [&](std::uint32_t p) { return p < p_min; });
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::uint64_t>> groups;
  for (std::uint64_t i = 0; i < count; ++i) {
    while (true) {
      const std::uint32_t p = primes[pick(rng, 0, primes.size() - 1)];
      const std::uint32_t n = static_cast<std::uint32_t>(pick(rng, deg_min, deg_max));
      const std::uint64_t q = nt::saturating_pow(p, n * deg_mult, cap);
      if (q > cap || q <= 2) continue;
      groups[{p, n}].push_back(i);
      break;
    }
  }
  for (const auto &[key, idx] : groups) {
    const Field F = Field::build(key.first, key.second * deg_mult, cap);
    for (auto i : idx) {
      std::seed_seq ss{seed, i, std::uint64_t{0x5eed}};
      std::mt19937_64 local(ss);
      visit(i, F, local);
    }
  }
}

} // namespace detail

/// Random instances of the two-character sum with all hypotheses satisfied.
inline std::vector<AuditRow> weil_batch(std::uint64_t count, std::uint64_t seed,
                                        std::uint32_t p_max = 97, std::uint32_t n_max = 4,
                                        std::uint64_t cap = Field::kDefaultCap,
                                        double tol = 1e-9) {
  std::vector<AuditRow> rows(count);
  detail::batch_by_field(count, seed, 2, p_max, 1, n_max, 1, cap,
                         [&](std::uint64_t i, const Field &F, auto &rng) {
    while (true) {
      WeilInstance in{&F,
                      Element{static_cast<std::uint32_t>(detail::pick(rng, 0, F.size() - 1))},
                      Element{static_cast<std::uint32_t>(detail::pick(rng, 0, F.size() - 1))},
                      detail::pick_divisor(rng, F.order()), 0, 0};
      in.j1 = static_cast<std::uint32_t>(detail::pick(rng, 0, in.d - 1));
      in.j2 = static_cast<std::uint32_t>(detail::pick(rng, 0, in.d - 1));
      BoundAudit a = weil_pair_sum(in, tol);
      if (!a.hypotheses_hold()) continue;
      rows[i] = {"weil",
                 {{"p", F.characteristic()}, {"n", F.degree()}, {"d", in.d},
                  {"j1", in.j1}, {"j2", in.j2}, {"xi1", in.xi1.code}, {"xi2", in.xi2.code}},
                 std::move(a)};
      return;
    }
  });
  return rows;
}

/// Odd p only: for p = 2 the norm condition (a/b)^{(q-1)/(p-1)} != 1 can never hold.
inline std::vector<AuditRow> cor22_batch(std::uint64_t count, std::uint64_t seed,
                                         std::uint32_t p_max = 97, std::uint32_t n_max = 4,
                                         std::uint64_t cap = Field::kDefaultCap,
                                         double tol = 1e-9) {
  std::vector<AuditRow> rows(count);
  detail::batch_by_field(count, seed, 3, p_max, 2, n_max, 1, cap,
                         [&](std::uint64_t i, const Field &F, auto &rng) {
    auto nonzero = [&] {
      return Element{static_cast<std::uint32_t>(detail::pick(rng, 1, F.size() - 1))};
    };
    while (true) {
      const std::uint32_t d = detail::pick_divisor(rng, F.order());
      const auto j = static_cast<std::uint32_t>(detail::pick(rng, 1, d - 1));
      const Element a = nonzero(), b = nonzero(), u = nonzero(), v = nonzero();
      if (F.in_prime_field(F.div(u, v))) continue;
      BoundAudit au = quotient_sum_cor22(F, d, j, a, b, u, v, tol);
      if (!au.hypotheses_hold()) continue;
      rows[i] = {"cor22",
                 {{"p", F.characteristic()}, {"n", F.degree()}, {"d", d}, {"j", j},
                  {"a", a.code}, {"b", b.code}, {"u", u.code}, {"v", v.code}},
                 std::move(au)};
      return;
    }
  });
  return rows;
}

/// Random instances over F_{p^{2n}}, n <= n_max.
inline std::vector<AuditRow> cor23_batch(std::uint64_t count, std::uint64_t seed,
                                         std::uint32_t p_max = 97, std::uint32_t n_max = 3,
                                         std::uint64_t cap = Field::kDefaultCap,
                                         double tol = 1e-9) {
  std::vector<AuditRow> rows(count);
  detail::batch_by_field(count, seed, 2, p_max, 1, n_max, 2, cap,
                         [&](std::uint64_t i, const Field &F, auto &rng) {
    const std::uint32_t half = F.degree() / 2;
    const std::uint64_t sub_order = nt::saturating_pow(F.characteristic(), half, F.size()) - 1;
    const std::uint64_t step = F.order() / sub_order;
    while (true) {
      const std::uint32_t d = detail::pick_divisor(rng, F.order());
      const auto j = static_cast<std::uint32_t>(detail::pick(rng, 1, d - 1));
      const Element a = F.exp(step * detail::pick(rng, 0, sub_order - 1));
      const Element b{static_cast<std::uint32_t>(detail::pick(rng, 0, F.size() - 1))};
      BoundAudit au = subfield_quotient_sum_cor23(F, d, j, a, b, tol);
      if (!au.hypotheses_hold()) continue;
      rows[i] = {"cor23",
                 {{"p", F.characteristic()}, {"n", half}, {"d", d}, {"j", j},
                  {"a", a.code}, {"b", b.code}},
                 std::move(au)};
      return;
    }
  });
  return rows;
}

} // namespace fqrigid

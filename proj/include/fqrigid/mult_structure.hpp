#pragma once

#include "field.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <optional>
#include <vector>

namespace fqrigid {

/// exp(2 pi i k / d), with k reduced mod d first.
inline std::complex<double> root_of_unity(std::int64_t k, std::uint32_t d) {
  const std::int64_t r = ((k % d) + d) % d;
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / d);
}

/// A union of cosets g^m H of the index-d subgroup H of F_q^*, stored as
/// its exponent set M. The field must outlive the union.
class CosetUnion {
public:
  CosetUnion(const Field &field, std::uint32_t d, std::vector<std::uint32_t> m)
      : field_(&field), d_(d), m_(std::move(m)) {
    if (d_ == 0 || field.order() % d_ != 0)
      throw IndexNotDividing("d = " + std::to_string(d_) + " does not divide q-1 = " +
                             std::to_string(field.order()));
    if (m_.empty()) throw EmptyM("coset exponent set is empty");
    std::sort(m_.begin(), m_.end());
    for (auto e : m_)
      if (e >= d_)
        throw ExponentOutOfRange("exponent " + std::to_string(e) + " >= d");
    if (std::adjacent_find(m_.begin(), m_.end()) != m_.end())
      throw InvalidValue("duplicate coset exponent");
    mask_.assign(d_, 0);
    for (auto e : m_) mask_[e] = 1;
  }

  const Field &field() const noexcept { return *field_; }
  std::uint32_t index() const noexcept { return d_; }
  const std::vector<std::uint32_t> &exponents() const noexcept { return m_; }
  std::uint32_t cosets() const noexcept { return static_cast<std::uint32_t>(m_.size()); }

  /// Number of elements, r (q-1)/d.
  std::uint64_t size() const noexcept {
    return std::uint64_t{cosets()} * (field_->order() / d_);
  }

  bool contains(Element x) const noexcept {
    return x.code != 0 && mask_[field_->log_unchecked(x) % d_];
  }

  /// Membership of g^e.
  bool contains_log(std::uint64_t e) const noexcept { return mask_[e % d_]; }

  std::uint32_t coset_of(Element x) const { return field_->log(x) % d_; }

  /// Elements of the union in increasing encoding order.
  std::vector<Element> members() const {
    std::vector<Element> out;
    out.reserve(size());
    for (std::uint32_t c = 1; c < field_->size(); ++c)
      if (contains(Element{c})) out.push_back(Element{c});
    return out;
  }

  bool operator==(const CosetUnion &o) const noexcept {
    return field_ == o.field_ && d_ == o.d_ && m_ == o.m_;
  }

private:
  const Field *field_;
  std::uint32_t d_;
  std::vector<std::uint32_t> m_;
  std::vector<std::uint8_t> mask_;
};

inline CosetUnion make_coset_union(const Field &field, std::uint32_t d,
                                   std::vector<std::uint32_t> m) {
  return CosetUnion(field, d, std::move(m));
}

inline std::uint32_t coset_of(const CosetUnion &D, Element x) { return D.coset_of(x); }

/// The subgroup {x^k : x in F_q^*}, which has index gcd(k, q-1).
inline CosetUnion power_residue_subgroup(const Field &field, std::uint64_t k) {
  if (k == 0) throw ParamOutOfRange("k must be at least 1");
  const auto d = static_cast<std::uint32_t>(std::gcd<std::uint64_t>(k, field.order()));
  return CosetUnion(field, d, {0});
}

/// D / c.
inline CosetUnion scale_coset_union(const CosetUnion &D, Element c) {
  const std::uint32_t d = D.index();
  const std::uint32_t shift = D.field().log(c) % d;
  std::vector<std::uint32_t> m;
  m.reserve(D.cosets());
  for (auto e : D.exponents()) m.push_back((e + d - shift) % d);
  return CosetUnion(D.field(), d, std::move(m));
}

/// The character chi^j of order dividing d, pinned by chi(g) = exp(2 pi i/d).
/// chi^j(0) = 0 for every j, including j = 0.
struct Character {
  const Field *field;
  std::uint32_t d;
  std::uint32_t j;

  Character(const Field &f, std::uint32_t order, std::uint32_t power)
      : field(&f), d(order), j(power % order) {
    if (order == 0 || f.order() % order != 0)
      throw IndexNotDividing("character order must divide q-1");
  }

  /// Exponent k with chi^j(x) = theta^k, or nothing for x = 0.
  std::optional<std::uint32_t> exponent(Element x) const {
    if (x.code == 0) return std::nullopt;
    return static_cast<std::uint32_t>(
        nt::mulmod(field->log_unchecked(x), j, d));
  }

  std::complex<double> operator()(Element x) const {
    const auto k = exponent(x);
    return k ? root_of_unity(*k, d) : std::complex<double>{0.0, 0.0};
  }

  bool trivial() const noexcept { return j == 0; }
};

/// Inner coefficients c_j = sum_k theta^{-j m_k}, j = 0..d-1.
inline std::vector<std::complex<double>>
psi_coefficients(std::uint32_t d, const std::vector<std::uint32_t> &m) {
  std::vector<std::complex<double>> roots(d), c(d);
  for (std::uint32_t k = 0; k < d; ++k) roots[k] = root_of_unity(k, d);
  for (std::uint32_t j = 0; j < d; ++j)
    for (auto mk : m) c[j] += roots[(d - nt::mulmod(j, mk, d)) % d];
  return c;
}

/// Character-sum expansion of the indicator of a coset union:
///   psi(x) = (1/d) sum_j c_j chi^j(x).
/// The inner coefficients are computed once per union.
class Psi {
public:
  explicit Psi(const CosetUnion &D)
      : D_(&D), coeffs_(psi_coefficients(D.index(), D.exponents())) {
    const std::uint32_t d = D.index();
    roots_.reserve(d);
    for (std::uint32_t k = 0; k < d; ++k) roots_.push_back(root_of_unity(k, d));
  }

  std::complex<double> operator()(Element x) const {
    const std::uint32_t d = D_->index();
    const std::uint64_t l = D_->field().log(x) % d;
    std::complex<double> s{};
    std::uint64_t e = 0;
    for (std::uint32_t j = 0; j < d; ++j) {
      s += coeffs_[j] * roots_[e];
      e += l;
      if (e >= d) e -= d;
    }
    return s / static_cast<double>(d);
  }

private:
  const CosetUnion *D_;
  std::vector<std::complex<double>> coeffs_;
  std::vector<std::complex<double>> roots_;
};

inline std::complex<double> psi_indicator(const CosetUnion &D, Element x) {
  return Psi(D)(x);
}

struct PsiAuditRow {
  std::uint32_t x;
  double re;
  double im;
  bool member;
};

/// psi at every nonzero x, in increasing encoding order.
inline std::vector<PsiAuditRow> psi_audit(const CosetUnion &D) {
  const std::uint32_t d = D.index();
  const auto c = psi_coefficients(d, D.exponents());
  // psi depends on x only through log(x) mod d.
  std::vector<std::complex<double>> by_class(d);
  for (std::uint32_t l = 0; l < d; ++l) {
    for (std::uint32_t j = 0; j < d; ++j)
      by_class[l] += c[j] * root_of_unity(static_cast<std::int64_t>(j) * l, d);
    by_class[l] /= static_cast<double>(d);
  }
  std::vector<PsiAuditRow> rows;
  rows.reserve(D.field().order());
  for (std::uint32_t code = 1; code < D.field().size(); ++code) {
    const Element x{code};
    const auto v = by_class[D.coset_of(x)];
    rows.push_back({code, v.real(), v.imag(), D.contains(x)});
  }
  return rows;
}

} // namespace fqrigid

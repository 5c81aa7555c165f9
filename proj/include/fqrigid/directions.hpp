#pragma once

#include "field.hpp"
#include "mult_structure.hpp"

#include <bit>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace fqrigid {

/// A subset of F_q together with an optional vertical direction.
class DirectionSet {
public:
  DirectionSet() = default;
  explicit DirectionSet(std::uint32_t q) : q_(q), words_((q + 63) / 64, 0) {}

  std::uint32_t field_size() const noexcept { return q_; }

  void insert(Element s) noexcept { words_[s.code >> 6] |= std::uint64_t{1} << (s.code & 63); }
  void set_infinity(bool on = true) noexcept { infinity_ = on; }

  bool contains(Element s) const noexcept {
    return (words_[s.code >> 6] >> (s.code & 63)) & 1u;
  }
  bool has_infinity() const noexcept { return infinity_; }

  /// Number of finite slopes plus one for the vertical direction.
  std::size_t size() const noexcept {
    std::size_t c = infinity_ ? 1 : 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  /// Finite slopes in increasing encoding order.
  std::vector<Element> slopes() const {
    std::vector<Element> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        const int b = std::countr_zero(bits);
        out.push_back(Element{static_cast<std::uint32_t>(w * 64 + b)});
        bits &= bits - 1;
      }
    }
    return out;
  }

  bool subset_of(const DirectionSet &o) const noexcept {
    if (infinity_ && !o.infinity_) return false;
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w] & ~o.words_[w]) return false;
    return true;
  }

  bool operator==(const DirectionSet &) const = default;

private:
  std::uint32_t q_ = 0;
  std::vector<std::uint64_t> words_;
  bool infinity_ = false;
};

/// True when every slope of `dirs` is a (nonzero) member of D and there is
/// no vertical direction.
inline bool directions_within(const DirectionSet &dirs, const CosetUnion &D) {
  if (dirs.has_infinity()) return false;
  for (auto s : dirs.slopes())
    if (!D.contains(s)) return false;
  return true;
}

using Point = std::pair<Element, Element>;

/// A duplicate-free set of points of AG(2, q).
class PointSet {
public:
  PointSet(const Field &field, std::vector<Point> points)
      : field_(&field), points_(std::move(points)) {
    std::vector<std::uint64_t> keys;
    keys.reserve(points_.size());
    for (auto [x, y] : points_) {
      if (x.code >= field.size() || y.code >= field.size())
        throw ExponentOutOfRange("point coordinate outside the field");
      keys.push_back(std::uint64_t{x.code} * field.size() + y.code);
    }
    std::sort(keys.begin(), keys.end());
    if (std::adjacent_find(keys.begin(), keys.end()) != keys.end())
      throw InvalidValue("repeated point");
  }

  const Field &field() const noexcept { return *field_; }
  const std::vector<Point> &points() const noexcept { return points_; }

private:
  const Field *field_;
  std::vector<Point> points_;
};

inline DirectionSet directions_of_point_set(const PointSet &U) {
  const Field &F = U.field();
  const auto &pts = U.points();
  if (pts.size() < 2) throw TooFewPoints("need at least two points");
  DirectionSet out(F.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const Element dx = F.sub(pts[j].first, pts[i].first);
      const Element dy = F.sub(pts[j].second, pts[i].second);
      if (dx.code == 0)
        out.set_infinity();
      else
        out.insert(F.div(dy, dx));
    }
  }
  return out;
}

/// Directions of the graph {(x, f(x))}, where `table[c]` is the value at the
/// element with encoding c.
inline DirectionSet directions_of_function(const Field &F, std::span<const Element> table) {
  if (table.size() != F.size())
    throw InvalidValue("value table must have q entries");
  DirectionSet out(F.size());
  const std::uint32_t q = F.size();
  for (std::uint32_t x = 0; x < q; ++x) {
    for (std::uint32_t y = x + 1; y < q; ++y) {
      const Element dy = F.sub(table[y], table[x]);
      const Element dx = F.sub(Element{y}, Element{x});
      out.insert(F.div(dy, dx));
    }
  }
  return out;
}

inline bool is_additive(const Field &F, std::span<const Element> table) {
  if (table.size() != F.size())
    throw InvalidValue("value table must have q entries");
  const std::uint32_t q = F.size();
  for (std::uint32_t x = 0; x < q; ++x)
    for (std::uint32_t y = x; y < q; ++y)
      if (table[F.add(Element{x}, Element{y}).code] != F.add(table[x], table[y]))
        return false;
  return true;
}

/// f(x) = sum_i c_i x^{p^i}. Every additive map of F_q has exactly one such
/// representation with n coefficients.
class LinearizedMap {
public:
  LinearizedMap(const Field &field, std::vector<Element> coeffs)
      : field_(&field), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != field.degree())
      throw InvalidValue("a linearized map needs exactly n coefficients");
    for (auto c : coeffs_)
      if (c.code >= field.size()) throw ExponentOutOfRange("coefficient outside the field");
  }

  const Field &field() const noexcept { return *field_; }
  const std::vector<Element> &coeffs() const noexcept { return coeffs_; }

  Element operator()(Element x) const noexcept {
    const Field &F = *field_;
    Element s = F.zero();
    for (std::uint32_t i = 0; i < coeffs_.size(); ++i)
      if (coeffs_[i].code != 0) s = F.add(s, F.mul(coeffs_[i], F.frobenius(x, i)));
    return s;
  }

  std::vector<Element> value_table() const {
    std::vector<Element> t(field_->size());
    for (std::uint32_t x = 0; x < field_->size(); ++x) t[x] = (*this)(Element{x});
    return t;
  }

  bool is_zero() const noexcept {
    for (auto c : coeffs_)
      if (c.code != 0) return false;
    return true;
  }

  /// Index of the single nonzero coefficient, when there is exactly one.
  std::optional<std::uint32_t> monomial_index() const noexcept {
    std::optional<std::uint32_t> idx;
    for (std::uint32_t i = 0; i < coeffs_.size(); ++i) {
      if (coeffs_[i].code == 0) continue;
      if (idx) return std::nullopt;
      idx = i;
    }
    return idx;
  }

  bool operator==(const LinearizedMap &o) const noexcept {
    return field_ == o.field_ && coeffs_ == o.coeffs_;
  }

private:
  const Field *field_;
  std::vector<Element> coeffs_;
};

inline Element linearized_eval(const LinearizedMap &L, Element x) { return L(x); }

/// {L(x)/x : x != 0}. For additive maps every difference quotient reduces to
/// one of these.
inline DirectionSet directions_of_additive(const LinearizedMap &L) {
  const Field &F = L.field();
  DirectionSet out(F.size());
  for (std::uint32_t x = 1; x < F.size(); ++x)
    out.insert(F.div(L(Element{x}), Element{x}));
  return out;
}

struct FrobeniusWitness {
  Element a;
  std::uint32_t j;
  Element b;

  bool operator==(const FrobeniusWitness &) const = default;
};

/// Finds (a, j, b) with f(x) = a x^{p^j} + b for all x. Constant maps are
/// reported as (0, 0, b); otherwise the smallest matching j is returned.
inline std::optional<FrobeniusWitness> is_frobenius_linear(const Field &F,
                                                           std::span<const Element> table) {
  if (table.size() != F.size())
    throw InvalidValue("value table must have q entries");
  const Element b = table[0];
  const Element a = F.sub(table[1], b);
  if (a.code == 0) {
    for (auto v : table)
      if (v != b) return std::nullopt;
    return FrobeniusWitness{a, 0, b};
  }
  const Element g = F.generator();
  for (std::uint32_t j = 0; j < F.degree(); ++j) {
    // Cheap filter on f(g) before the O(q) verification.
    if (table[g.code] != F.add(F.mul(a, F.frobenius(g, j)), b)) continue;
    bool ok = true;
    for (std::uint32_t x = 0; x < F.size() && ok; ++x)
      ok = table[x] == F.add(F.mul(a, F.frobenius(Element{x}, j)), b);
    if (ok) return FrobeniusWitness{a, j, b};
  }
  return std::nullopt;
}

/// |D D^{-1} D^{-1}| for a coset union, computed on coset exponents.
inline std::uint64_t triple_quotient_size(const CosetUnion &D) {
  const std::uint32_t d = D.index();
  std::vector<std::uint8_t> hit(d, 0);
  for (auto a : D.exponents())
    for (auto b : D.exponents())
      for (auto c : D.exponents()) hit[((a + 2 * d) - b - c) % d] = 1;
  std::uint64_t classes = 0;
  for (auto h : hit) classes += h;
  return classes * (D.field().order() / d);
}

/// |D D^{-1} D^{-1}| for an explicit set of nonzero elements.
inline std::uint64_t triple_quotient_size(const Field &F, std::span<const Element> D) {
  if (D.empty()) throw EmptyM("empty set");
  const std::uint32_t N = F.order();
  std::vector<std::uint32_t> logs;
  for (auto x : D) {
    if (x.code == 0) throw ZeroInD("0 in D");
    logs.push_back(F.log(x));
  }
  std::sort(logs.begin(), logs.end());
  logs.erase(std::unique(logs.begin(), logs.end()), logs.end());
  std::vector<std::uint8_t> quot(N, 0), triple(N, 0);
  for (auto a : logs)
    for (auto b : logs) quot[(a + N - b) % N] = 1;
  for (std::uint32_t e = 0; e < N; ++e) {
    if (!quot[e]) continue;
    for (auto c : logs) triple[(e + N - c) % N] = 1;
  }
  std::uint64_t count = 0;
  for (auto t : triple) count += t;
  return count;
}

} // namespace fqrigid

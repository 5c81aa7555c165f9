#pragma once

#include "directions.hpp"
#include "field.hpp"
#include "mult_structure.hpp"
#include "parallel.hpp"
#include "rigidity_search.hpp"

#include <bit>
#include <chrono>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace fqrigid {

/// Cayley graph on F_{q^2} whose connection set S is a union of cosets of the
/// index-d subgroup H, with d | q+1 (so H contains F_q^*).
class CliqueInstance {
public:
  std::uint32_t p() const noexcept { return p_; }
  std::uint32_t n() const noexcept { return n_; }
  /// Base field size q; the vertex set has q^2 elements.
  std::uint32_t q() const noexcept { return q_; }
  const Field &field() const noexcept { return *big_; }
  const CosetUnion &S() const noexcept { return *S_; }
  std::uint32_t d() const noexcept { return S_->index(); }
  std::uint32_t r() const noexcept { return S_->cosets(); }
  bool fq_star_in_S() const noexcept { return S_->exponents().front() == 0; }
  bool r_at_most_half() const noexcept { return 2 * r() <= d(); }
  /// Elements of F_q inside F_{q^2}, by increasing encoding.
  const std::vector<Element> &subfield() const noexcept { return subfield_; }

  bool adjacent(Element x, Element y) const noexcept {
    return S_->contains(big_->sub(x, y));
  }

  static CliqueInstance make(std::uint32_t p, std::uint32_t n, std::uint32_t d,
                             std::vector<std::uint32_t> M,
                             std::uint64_t cap = Field::kDefaultCap) {
    CliqueInstance inst;
    inst.big_ = std::make_shared<const Field>(Field::build(p, 2 * n, cap));
    inst.p_ = p;
    inst.n_ = n;
    inst.q_ = static_cast<std::uint32_t>(nt::saturating_pow(p, n, cap));
    if (d == 0 || (inst.q_ + 1) % d != 0)
      throw IndexNotDividingQPlus1("d = " + std::to_string(d) + " does not divide q+1 = " +
                                   std::to_string(inst.q_ + 1));
    inst.S_ = std::make_shared<const CosetUnion>(*inst.big_, d, std::move(M));
    for (std::uint32_t c = 0; c < inst.big_->size(); ++c)
      if (inst.big_->in_subfield(Element{c}, n)) inst.subfield_.push_back(Element{c});
    return inst;
  }

private:
  CliqueInstance() = default;

  std::uint32_t p_ = 0, n_ = 0, q_ = 0;
  std::shared_ptr<const Field> big_;
  std::shared_ptr<const CosetUnion> S_;
  std::vector<Element> subfield_;
};

inline CliqueInstance make_instance(std::uint32_t p, std::uint32_t n, std::uint32_t d,
                                    std::vector<std::uint32_t> M) {
  return CliqueInstance::make(p, n, d, std::move(M));
}

struct CliqueSearchOptions {
  unsigned jobs = 1;
  std::uint32_t q_cap = 17;
  std::uint64_t max_results = 1'000'000;
};

struct CliqueSearchStats {
  std::uint64_t candidates = 0;
  std::uint64_t nodes = 0;
};

namespace detail {

class Bitset {
public:
  Bitset() = default;
  explicit Bitset(std::size_t bits) : w_((bits + 63) / 64, 0) {}

  void set(std::size_t i) noexcept { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) noexcept { w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  bool test(std::size_t i) const noexcept { return (w_[i >> 6] >> (i & 63)) & 1u; }
  bool none() const noexcept {
    for (auto w : w_)
      if (w) return false;
    return true;
  }
  Bitset operator&(const Bitset &o) const {
    Bitset r = *this;
    for (std::size_t k = 0; k < w_.size(); ++k) r.w_[k] &= o.w_[k];
    return r;
  }
  Bitset &operator-=(const Bitset &o) {
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] &= ~o.w_[k];
    return *this;
  }
  /// Lowest set index, or size() * 64 when empty.
  std::size_t first() const noexcept {
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k]) return k * 64 + static_cast<std::size_t>(std::countr_zero(w_[k]));
    return w_.size() * 64;
  }

private:
  std::vector<std::uint64_t> w_;
};

/// Enumerates every clique of exactly `target` vertices inside a candidate
/// set, pruning with greedy colouring bounds.
class KCliqueEnumerator {
public:
  KCliqueEnumerator(std::vector<Bitset> adj, std::size_t target, std::uint64_t max_results)
      : adj_(std::move(adj)), target_(target), max_results_(max_results) {}

  /// Greedy colouring of P: vertices in colour order with the number of
  /// colours used up to and including each one.
  void colour_sort(Bitset P, std::vector<std::size_t> &order,
                   std::vector<std::size_t> &bound) const {
    order.clear();
    bound.clear();
    std::size_t colour = 0;
    while (!P.none()) {
      ++colour;
      Bitset Q = P;
      while (!Q.none()) {
        const std::size_t v = Q.first();
        Q.reset(v);
        Q -= adj_[v];
        P.reset(v);
        order.push_back(v);
        bound.push_back(colour);
      }
    }
  }

  void expand(std::vector<std::size_t> &R, Bitset P, std::vector<std::vector<std::size_t>> &out,
              std::uint64_t &nodes) const {
    ++nodes;
    if (R.size() == target_) {
      if (out.size() >= max_results_)
        throw SearchSpaceTooLarge("more than " + std::to_string(max_results_) + " cliques");
      out.push_back(R);
      return;
    }
    std::vector<std::size_t> order, bound;
    colour_sort(P, order, bound);
    for (std::size_t i = order.size(); i-- > 0;) {
      if (R.size() + bound[i] < target_) return;
      const std::size_t v = order[i];
      R.push_back(v);
      expand(R, P & adj_[v], out, nodes);
      R.pop_back();
      P.reset(v);
    }
  }

  /// Top-level branches run independently; results come back sorted.
  std::vector<std::vector<std::size_t>> run(const Bitset &all, unsigned jobs,
                                            std::uint64_t &nodes) const {
    std::vector<std::vector<std::size_t>> out;
    if (target_ == 0) {
      out.emplace_back();
      return out;
    }
    std::vector<std::size_t> order, bound;
    colour_sort(all, order, bound);
    std::vector<Bitset> prefix(order.size());
    Bitset P = all;
    for (std::size_t i = order.size(); i-- > 0;) {
      prefix[i] = P;
      P.reset(order[i]);
    }
    std::vector<std::vector<std::vector<std::size_t>>> slots(order.size());
    std::vector<std::uint64_t> slot_nodes(order.size(), 0);
    parallel_for(order.size(), jobs, [&](std::uint64_t i) {
      if (bound[i] < target_) return;
      std::vector<std::size_t> R{order[i]};
      expand(R, prefix[i] & adj_[order[i]], slots[i], slot_nodes[i]);
    });
    for (std::size_t i = 0; i < order.size(); ++i) {
      nodes += slot_nodes[i];
      for (auto &c : slots[i]) {
        if (out.size() >= max_results_)
          throw SearchSpaceTooLarge("more than " + std::to_string(max_results_) + " cliques");
        std::sort(c.begin(), c.end());
        out.push_back(std::move(c));
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

private:
  std::vector<Bitset> adj_;
  std::size_t target_;
  std::uint64_t max_results_;
};

} // namespace detail

/// Every A with |A| = q, {0, 1} in A and A - A inside S u {0}. Each A is
/// sorted by encoding and the list is in lexicographic order.
inline std::vector<std::vector<Element>>
cliques_of_size_q_through_0_1(const CliqueInstance &inst, const CliqueSearchOptions &opts = {},
                              CliqueSearchStats *stats = nullptr) {
  if (inst.q() > opts.q_cap)
    throw SearchSpaceTooLarge("q = " + std::to_string(inst.q()) + " exceeds clique cap " +
                              std::to_string(opts.q_cap));
  if (!inst.fq_star_in_S()) return {};
  const Field &F = inst.field();
  std::vector<Element> cand;
  for (std::uint32_t c = 2; c < F.size(); ++c) {
    const Element x{c};
    if (inst.S().contains(x) && inst.S().contains(F.sub(x, F.one()))) cand.push_back(x);
  }
  std::vector<detail::Bitset> adj(cand.size(), detail::Bitset(cand.size()));
  detail::Bitset all(cand.size());
  for (std::size_t i = 0; i < cand.size(); ++i) {
    all.set(i);
    for (std::size_t j = i + 1; j < cand.size(); ++j)
      if (inst.adjacent(cand[i], cand[j])) {
        adj[i].set(j);
        adj[j].set(i);
      }
  }
  std::uint64_t nodes = 0;
  detail::KCliqueEnumerator search(std::move(adj), inst.q() - 2, opts.max_results);
  const auto found = search.run(all, opts.jobs, nodes);
  if (stats) {
    stats->candidates = cand.size();
    stats->nodes = nodes;
  }
  std::vector<std::vector<Element>> out;
  out.reserve(found.size());
  for (const auto &c : found) {
    std::vector<Element> A{F.zero(), F.one()};
    for (auto i : c) A.push_back(cand[i]);
    std::sort(A.begin(), A.end());
    out.push_back(std::move(A));
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// The graph {(x, f(x))} obtained from A through z = x + f(x) v, with the
/// consistency checks of the clique-to-directions reduction.
struct FunctionGraph {
  Element v;
  /// F_q as encodings in F_{q^2}, and f on it.
  std::vector<Element> domain;
  std::vector<Element> values;
  DirectionSet directions;
  /// 1 + s v lies in S for every direction s.
  bool direction_inclusion = false;
  /// |S intersected with 1 + F_q v|.
  std::uint64_t line_hits = 0;
  /// Number of F_q^*-cosets making up S, r (q+1)/d.
  std::uint64_t fq_cosets_in_S = 0;
  /// |D_f| <= (q+1)/2.
  bool few_directions = false;
  /// f - f(0) is additive on F_q.
  bool additive = false;
  bool f_is_zero = false;
};

/// Smallest nonzero element outside S, if any.
inline std::optional<Element> default_v(const CliqueInstance &inst) {
  for (std::uint32_t c = 1; c < inst.field().size(); ++c)
    if (!inst.S().contains(Element{c})) return Element{c};
  return std::nullopt;
}

inline FunctionGraph clique_to_function_graph(const CliqueInstance &inst,
                                              const std::vector<Element> &A,
                                              std::optional<Element> v_in = std::nullopt) {
  const Field &F = inst.field();
  const std::uint32_t q = inst.q();
  const auto v_opt = v_in ? v_in : default_v(inst);
  if (!v_opt) throw VInS("S contains every nonzero element");
  const Element v = *v_opt;
  if (v.code == 0 || inst.S().contains(v)) throw VInS("v must be nonzero and outside S");

  const auto &dom = inst.subfield();
  std::vector<std::uint32_t> index_of(F.size(), Field::kNone);
  for (std::uint32_t i = 0; i < q; ++i) index_of[dom[i].code] = i;
  // z = a + b v  ->  (a, b)
  std::vector<std::pair<std::uint32_t, std::uint32_t>> coords(F.size());
  for (std::uint32_t a = 0; a < q; ++a)
    for (std::uint32_t b = 0; b < q; ++b)
      coords[F.add(dom[a], F.mul(dom[b], v)).code] = {a, b};

  FunctionGraph g;
  g.v = v;
  g.domain = dom;
  std::vector<std::optional<std::uint32_t>> f(q);
  for (auto z : A) {
    const auto [a, b] = coords[z.code];
    if (f[a])
      throw NotAGraph("two points of A share the x-coordinate " + std::to_string(dom[a].code));
    f[a] = b;
  }
  for (std::uint32_t a = 0; a < q; ++a)
    if (!f[a]) throw NotAGraph("A misses the x-coordinate " + std::to_string(dom[a].code));
  for (std::uint32_t a = 0; a < q; ++a) g.values.push_back(dom[*f[a]]);

  g.directions = DirectionSet(F.size());
  for (std::uint32_t x = 0; x < q; ++x)
    for (std::uint32_t y = x + 1; y < q; ++y)
      g.directions.insert(
          F.div(F.sub(g.values[y], g.values[x]), F.sub(dom[y], dom[x])));

  g.direction_inclusion = true;
  for (auto s : g.directions.slopes())
    if (!inst.S().contains(F.add(F.one(), F.mul(s, v)))) g.direction_inclusion = false;
  for (auto b : dom)
    if (inst.S().contains(F.add(F.one(), F.mul(b, v)))) ++g.line_hits;
  g.fq_cosets_in_S = std::uint64_t{inst.r()} * (q + 1) / inst.d();
  g.few_directions = 2 * g.directions.size() <= std::uint64_t{q} + 1;

  const Element f0 = g.values[index_of[F.zero().code]];
  auto norm = [&](std::uint32_t i) { return F.sub(g.values[i], f0); };
  g.additive = true;
  for (std::uint32_t x = 0; x < q && g.additive; ++x)
    for (std::uint32_t y = x; y < q && g.additive; ++y)
      g.additive = norm(index_of[F.add(dom[x], dom[y]).code]) == F.add(norm(x), norm(y));
  g.f_is_zero = std::all_of(g.values.begin(), g.values.end(),
                            [&](Element e) { return e.code == 0; });
  return g;
}

struct CliquePipelineCheck {
  bool graph = false;
  bool direction_inclusion = false;
  bool few_directions = false;
  bool additive = false;
  std::uint64_t direction_count = 0;
  std::string error;

  bool ok() const noexcept { return graph && direction_inclusion && few_directions && additive; }
};

struct CliqueReport {
  std::uint32_t p = 0, n = 0, q = 0, d = 0, r = 0;
  std::vector<std::uint32_t> cosets;
  std::string mode = "verify";
  bool fq_star_in_S = false;
  bool r_at_most_half = false;
  /// p >= (4n-1)^2 r d^2/(d-r)^2 with n, d >= 2 and r <= d/2.
  bool p_bound = false;
  /// S is the subgroup itself (M = {0}); no bound on p is needed.
  bool subgroup_case = false;
  /// n = 1 with r <= d/2 and F_q^* in S: additive maps of F_p are linear, so
  /// the reduction through directions already forces A = F_q.
  bool prime_base_case = false;
  bool theorem_applies = false;
  std::vector<std::vector<Element>> cliques;
  bool subfield_found = false;
  std::uint64_t exceptions = 0;
  std::vector<CliquePipelineCheck> pipeline;
  std::optional<Element> v;
  CliqueSearchStats stats;
  std::vector<std::string> violations;
  double seconds = 0.0;
};

inline CliqueReport verify_thm_main2(const CliqueInstance &inst, const std::string &mode = "verify",
                                     const CliqueSearchOptions &opts = {}) {
  const auto start = std::chrono::steady_clock::now();
  CliqueReport rep;
  rep.p = inst.p();
  rep.n = inst.n();
  rep.q = inst.q();
  rep.d = inst.d();
  rep.r = inst.r();
  rep.cosets = inst.S().exponents();
  rep.mode = mode;
  rep.fq_star_in_S = inst.fq_star_in_S();
  rep.r_at_most_half = inst.r_at_most_half();
  if (rep.n >= 2 && rep.d >= 2 && rep.r_at_most_half)
    rep.p_bound = detail::weil_p_bound(rep.p, 4 * rep.n - 1, rep.d, rep.r);
  rep.subgroup_case = rep.cosets == std::vector<std::uint32_t>{0} && rep.d >= 2;
  rep.prime_base_case = rep.n == 1 && rep.r_at_most_half && rep.fq_star_in_S;
  rep.theorem_applies = rep.subgroup_case || rep.prime_base_case ||
                        (rep.p_bound && rep.fq_star_in_S);

  rep.cliques = cliques_of_size_q_through_0_1(inst, opts, &rep.stats);
  const auto &Fq = inst.subfield();
  for (const auto &A : rep.cliques) {
    if (A == Fq)
      rep.subfield_found = true;
    else
      ++rep.exceptions;
  }
  // Catalog mode records exceptions as data only.
  if (mode != "catalog" && rep.theorem_applies && rep.exceptions > 0)
    rep.violations.push_back("THEOREM VIOLATION: " + std::to_string(rep.exceptions) +
                             " clique(s) through 0,1 other than F_q");
  if (rep.fq_star_in_S && !rep.subfield_found)
    rep.violations.push_back("F_q missing from the clique list");

  rep.v = default_v(inst);
  if (rep.v && rep.fq_star_in_S) {
    const bool expect_ok = rep.r_at_most_half;
    for (const auto &A : rep.cliques) {
      CliquePipelineCheck chk;
      try {
        const auto g = clique_to_function_graph(inst, A, rep.v);
        chk.graph = true;
        chk.direction_inclusion = g.direction_inclusion;
        chk.few_directions = g.few_directions;
        chk.additive = g.additive;
        chk.direction_count = g.directions.size();
      } catch (const Error &e) {
        chk.error = e.what();
      }
      if (expect_ok && !chk.ok())
        rep.violations.push_back("pipeline check failed for a clique: " +
                                 (chk.error.empty() ? std::string("inconsistent graph")
                                                    : chk.error));
      rep.pipeline.push_back(std::move(chk));
    }
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

/// "x y" per line for every edge x < y of the Cayley graph.
inline void write_edge_list(const CliqueInstance &inst, std::ostream &os) {
  const Field &F = inst.field();
  for (std::uint32_t x = 0; x < F.size(); ++x)
    for (std::uint32_t y = x + 1; y < F.size(); ++y)
      if (inst.adjacent(Element{x}, Element{y})) os << x << ' ' << y << '\n';
}

} // namespace fqrigid

#include "fqrigid/directions.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace fqrigid;

namespace {

std::set<std::uint64_t> slope_codes(const DirectionSet &S) {
  std::set<std::uint64_t> out;
  for (auto s : S.slopes()) out.insert(s.code);
  return out;
}

std::vector<Element> table_of(const Field &F, auto f) {
  std::vector<Element> t(F.size());
  for (std::uint32_t x = 0; x < F.size(); ++x) t[x] = f(Element{x});
  return t;
}

// a + b u in F_25 with u = 2t.
Element f25(std::int64_t a, std::int64_t b) {
  auto m = [](std::int64_t v) { return static_cast<std::uint32_t>(((v % 5) + 5) % 5); };
  return Element{m(a) + 5 * m(2 * b)};
}

} // namespace

TEST(DirectionSet, Basics) {
  DirectionSet S(70);
  EXPECT_EQ(S.size(), 0u);
  S.insert(Element{3});
  S.insert(Element{69});
  S.insert(Element{3});
  EXPECT_EQ(S.size(), 2u);
  S.set_infinity();
  EXPECT_EQ(S.size(), 3u);
  EXPECT_TRUE(S.contains(Element{69}));
  EXPECT_FALSE(S.contains(Element{4}));
  EXPECT_EQ(S.slopes(), (std::vector<Element>{Element{3}, Element{69}}));
  DirectionSet T(70);
  T.insert(Element{3});
  EXPECT_TRUE(T.subset_of(S));
  EXPECT_FALSE(S.subset_of(T));
}

TEST(PointSetDirections, ContractExamples) {
  const Field F = Field::build(5, 1);
  auto pt = [](std::uint32_t x, std::uint32_t y) { return Point{Element{x}, Element{y}}; };
  const auto vert = directions_of_point_set(PointSet(F, {pt(0, 0), pt(0, 1)}));
  EXPECT_TRUE(vert.has_infinity());
  EXPECT_EQ(vert.size(), 1u);

  const auto line = directions_of_point_set(PointSet(F, {pt(0, 0), pt(1, 1), pt(2, 2)}));
  EXPECT_EQ(slope_codes(line), (std::set<std::uint64_t>{1}));
  EXPECT_FALSE(line.has_infinity());

  std::vector<Point> sq;
  for (std::uint32_t x = 0; x < 5; ++x) sq.push_back(pt(x, x * x % 5));
  const auto par = directions_of_point_set(PointSet(F, sq));
  EXPECT_EQ(slope_codes(par), (std::set<std::uint64_t>{0, 1, 2, 3, 4}));
  EXPECT_FALSE(par.has_infinity());

  EXPECT_THROW(directions_of_point_set(PointSet(F, {pt(1, 1)})), TooFewPoints);
  EXPECT_THROW(PointSet(F, {pt(1, 1), pt(1, 1)}), InvalidValue);
}

TEST(FunctionDirections, ContractExamples) {
  const Field F = Field::build(5, 2);
  const auto id = directions_of_function(F, table_of(F, [](Element x) { return x; }));
  EXPECT_EQ(slope_codes(id), (std::set<std::uint64_t>{1}));
  const auto cst = directions_of_function(F, table_of(F, [](Element) { return Element{7}; }));
  EXPECT_EQ(slope_codes(cst), (std::set<std::uint64_t>{0}));

  const Element u = f25(0, 1);
  ASSERT_EQ(F.mul(u, u), F.from_int(2));
  const auto t = table_of(F, [&](Element x) { return F.add(x, F.mul(u, F.frobenius(x, 1))); });
  const auto dirs = directions_of_function(F, t);
  const std::set<std::uint64_t> expected{f25(0, 2).code, f25(0, 3).code, f25(1, 1).code,
                                         f25(1, -1).code, f25(2, 2).code, f25(2, -2).code};
  EXPECT_EQ(slope_codes(dirs), expected);
  EXPECT_FALSE(dirs.has_infinity());

  EXPECT_THROW(directions_of_function(F, std::vector<Element>(5)), InvalidValue);
}

TEST(FunctionDirections, MatchesPointSetAndSlowOracle) {
  const Field F = Field::build(3, 2);
  const oracle::SlowField S(3, 2);
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Element> t(F.size());
    std::vector<std::uint64_t> raw(F.size());
    std::vector<Point> pts;
    for (std::uint32_t x = 0; x < F.size(); ++x) {
      raw[x] = rng() % F.size();
      t[x] = Element{static_cast<std::uint32_t>(raw[x])};
      pts.push_back({Element{x}, t[x]});
    }
    const auto a = directions_of_function(F, t);
    EXPECT_EQ(a, directions_of_point_set(PointSet(F, pts)));
    EXPECT_EQ(slope_codes(a), oracle::secant_slopes(S, raw));
  }
}

TEST(FunctionDirections, TranslationAndScaling) {
  const Field F = Field::build(7, 1);
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Element> t(F.size());
    for (auto &v : t) v = Element{static_cast<std::uint32_t>(rng() % 7)};
    const auto base = directions_of_function(F, t);
    for (std::uint32_t c = 0; c < 7; ++c) {
      std::vector<Element> shifted = t, scaled = t;
      for (auto &v : shifted) v = F.add(v, Element{c});
      EXPECT_EQ(directions_of_function(F, shifted), base);
      if (c == 0) continue;
      for (auto &v : scaled) v = F.mul(v, Element{c});
      DirectionSet expect(F.size());
      for (auto s : base.slopes()) expect.insert(F.mul(s, Element{c}));
      EXPECT_EQ(directions_of_function(F, scaled), expect);
    }
  }
}

TEST(Additivity, ContractExamples) {
  const Field f5 = Field::build(5, 1);
  EXPECT_TRUE(is_additive(f5, table_of(f5, [&](Element x) { return f5.mul(Element{3}, x); })));
  EXPECT_FALSE(is_additive(f5, table_of(f5, [&](Element x) { return f5.mul(x, x); })));
  const Field F = Field::build(5, 2);
  const Element u = f25(0, 1);
  EXPECT_TRUE(is_additive(F, LinearizedMap(F, {F.one(), u}).value_table()));
}

TEST(LinearizedMap, EvaluationMatchesSchoolbook) {
  const Field F = Field::build(2, 4);
  const oracle::SlowField S(2, 4);
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Element> c(4);
    std::vector<std::uint64_t> raw(4);
    for (int i = 0; i < 4; ++i) {
      raw[i] = rng() % 16;
      c[i] = Element{static_cast<std::uint32_t>(raw[i])};
    }
    const LinearizedMap L(F, c);
    for (std::uint32_t x = 0; x < 16; ++x)
      ASSERT_EQ(linearized_eval(L, Element{x}).code, oracle::linearized(S, raw, x));
    EXPECT_TRUE(is_additive(F, L.value_table()));
    EXPECT_EQ(L(F.zero()), F.zero());
  }
  EXPECT_THROW(LinearizedMap(F, {F.one()}), InvalidValue);
  EXPECT_THROW(LinearizedMap(F, {Element{16}, F.zero(), F.zero(), F.zero()}), ExponentOutOfRange);
}

TEST(AdditiveDirections, ContractExamples) {
  const Field F = Field::build(5, 2);
  const LinearizedMap cx(F, {Element{13}, F.zero()});
  EXPECT_EQ(slope_codes(directions_of_additive(cx)), (std::set<std::uint64_t>{13}));
  const LinearizedMap zero(F, {F.zero(), F.zero()});
  EXPECT_EQ(slope_codes(directions_of_additive(zero)), (std::set<std::uint64_t>{0}));
  const LinearizedMap ex(F, {F.one(), f25(0, 1)});
  EXPECT_EQ(directions_of_additive(ex), directions_of_function(F, ex.value_table()));
  EXPECT_EQ(directions_of_additive(ex).size(), 6u);
}

TEST(AdditiveDirections, FrobeniusPowerGivesPowerResidues) {
  for (auto [p, n] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 4}, {3, 3}, {5, 2}, {2, 6}}) {
    const Field F = Field::build(p, n);
    for (std::uint32_t j = 1; j < n; ++j) {
      std::vector<Element> c(n, F.zero());
      c[j] = F.one();
      const auto dirs = directions_of_additive(LinearizedMap(F, c));
      const auto L = power_residue_subgroup(F, oracle::ipow(p, j) - 1);
      EXPECT_EQ(dirs.slopes(), L.members());
    }
  }
}

TEST(FrobeniusLinear, ContractExamples) {
  const Field F9 = Field::build(3, 2);
  const auto w = is_frobenius_linear(
      F9, table_of(F9, [&](Element x) { return F9.add(F9.mul(Element{2}, x), F9.one()); }));
  ASSERT_TRUE(w);
  EXPECT_EQ(*w, (FrobeniusWitness{Element{2}, 0, Element{1}}));

  const Field F = Field::build(5, 2);
  EXPECT_FALSE(is_frobenius_linear(F, LinearizedMap(F, {F.one(), f25(0, 1)}).value_table()));

  const auto fr = is_frobenius_linear(F, table_of(F, [&](Element x) { return F.frobenius(x, 1); }));
  ASSERT_TRUE(fr);
  EXPECT_EQ(*fr, (FrobeniusWitness{F.one(), 1, F.zero()}));

  const auto cst = is_frobenius_linear(F, table_of(F, [](Element) { return Element{4}; }));
  ASSERT_TRUE(cst);
  EXPECT_EQ(*cst, (FrobeniusWitness{F.zero(), 0, Element{4}}));
}

TEST(FrobeniusLinear, RecoversEveryAffineTwist) {
  const Field F = Field::build(2, 4);
  for (std::uint32_t a = 1; a < F.size(); ++a)
    for (std::uint32_t j = 0; j < 4; ++j)
      for (std::uint32_t b : {0u, 5u}) {
        const auto t = table_of(F, [&](Element x) {
          return F.add(F.mul(Element{a}, F.frobenius(x, j)), Element{b});
        });
        const auto w = is_frobenius_linear(F, t);
        ASSERT_TRUE(w);
        EXPECT_EQ(w->a.code, a);
        EXPECT_EQ(w->j, j);
        EXPECT_EQ(w->b.code, b);
        std::vector<Element> shifted = t;
        for (auto &v : shifted) v = F.sub(v, Element{b});
        EXPECT_TRUE(is_additive(F, shifted));
      }
}

TEST(FrobeniusLinear, RandomTablesAreRarelyLinear) {
  const Field F = Field::build(3, 2);
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Element> t(F.size());
    for (auto &v : t) v = Element{static_cast<std::uint32_t>(rng() % 9)};
    const auto w = is_frobenius_linear(F, t);
    if (!w) continue;
    // Any witness must reproduce the table.
    for (std::uint32_t x = 0; x < 9; ++x)
      ASSERT_EQ(t[x], F.add(F.mul(w->a, F.frobenius(Element{x}, w->j)), w->b));
  }
}

TEST(TripleQuotient, ContractExamples) {
  const Field F = Field::build(5, 2);
  const CosetUnion H(F, 6, {0});
  EXPECT_EQ(triple_quotient_size(H), H.size());
  const std::vector<Element> g{F.generator()};
  EXPECT_EQ(triple_quotient_size(F, g), 1u);

  const Element u = f25(0, 1), one = F.one();
  const CosetUnion D(F, 6, {F.log(u) % 6, F.log(F.add(one, u)) % 6, F.log(F.sub(one, u)) % 6});
  EXPECT_EQ(triple_quotient_size(D), 24u);
  EXPECT_EQ(triple_quotient_size(F, D.members()), 24u);

  EXPECT_THROW(triple_quotient_size(F, std::vector<Element>{F.zero(), one}), ZeroInD);
  EXPECT_THROW(triple_quotient_size(F, std::vector<Element>{}), EmptyM);
}

TEST(TripleQuotient, ExponentRouteMatchesEnumeration) {
  const Field F = Field::build(3, 3);
  std::mt19937_64 rng(6);
  for (auto d : nt::divisors(F.order())) {
    for (int t = 0; t < 10; ++t) {
      std::vector<std::uint32_t> M;
      for (std::uint32_t m = 0; m < d; ++m)
        if (rng() % 3 == 0) M.push_back(m);
      if (M.empty()) M.push_back(0);
      const CosetUnion D(F, static_cast<std::uint32_t>(d), M);
      const auto mem = D.members();
      std::set<std::uint32_t> trip;
      for (auto a : mem)
        for (auto b : mem)
          for (auto c : mem) trip.insert(F.div(a, F.mul(b, c)).code);
      EXPECT_EQ(triple_quotient_size(D), trip.size());
      EXPECT_EQ(triple_quotient_size(F, mem), trip.size());
    }
  }
}

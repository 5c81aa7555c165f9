#include "fqrigid/field.hpp"
#include "fqrigid/numtheory.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace fqrigid;

namespace {

struct PN {
  std::uint32_t p, n;
};

const std::vector<PN> kSmall{{2, 1}, {2, 2}, {2, 3}, {2, 4}, {2, 5}, {2, 6}, {3, 1}, {3, 2},
                             {3, 3}, {3, 4}, {5, 1}, {5, 2}, {5, 3}, {7, 1}, {7, 2}, {11, 1},
                             {11, 2}, {13, 1}, {17, 1}, {19, 1}};

} // namespace

TEST(NumberTheory, Basics) {
  EXPECT_TRUE(nt::is_prime(2));
  EXPECT_TRUE(nt::is_prime(97));
  EXPECT_FALSE(nt::is_prime(1));
  EXPECT_FALSE(nt::is_prime(91));
  EXPECT_EQ(nt::prime_factors(360), (std::vector<std::uint64_t>{2, 3, 5}));
  EXPECT_EQ(nt::divisors(12), (std::vector<std::uint64_t>{1, 2, 3, 4, 6, 12}));
  EXPECT_EQ(nt::prime_power(49), (std::optional<std::pair<std::uint32_t, std::uint32_t>>{{7, 2}}));
  EXPECT_FALSE(nt::prime_power(12));
  EXPECT_FALSE(nt::prime_power(1));
  std::uint64_t slow = 1;
  for (int i = 0; i < 200; ++i) slow = slow * 3 % 1000003;
  EXPECT_EQ(nt::powmod(3, 200, 1000003), slow);
  EXPECT_EQ(nt::saturating_pow(10, 30, 1000), 1001u);
}

TEST(FieldBuild, ExamplesFromContract) {
  const Field f5 = Field::build(5, 1);
  EXPECT_EQ(f5.modulus(), (std::vector<std::uint32_t>{0, 1}));
  EXPECT_EQ(f5.generator().code, 2u);

  const Field f25 = Field::build(5, 2);
  EXPECT_EQ(f25.modulus(), (std::vector<std::uint32_t>{2, 0, 1}));

  const Field f2 = Field::build(2, 1);
  EXPECT_EQ(f2.size(), 2u);
  EXPECT_EQ(f2.generator().code, 1u);
}

TEST(FieldBuild, ModulusAndGeneratorMatchTrialDivision) {
  for (auto [p, n] : kSmall) {
    const Field F = Field::build(p, n);
    const oracle::SlowField S(p, n);
    ASSERT_EQ(F.modulus(), S.modulus) << p << "^" << n;
    EXPECT_EQ(F.generator().code, S.primitive_root()) << p << "^" << n;
  }
}

TEST(FieldBuild, Errors) {
  EXPECT_THROW(Field::build(4, 1), NonPrime);
  EXPECT_THROW(Field::build(1, 1), NonPrime);
  EXPECT_THROW(Field::build(5, 0), DegreeZero);
  EXPECT_THROW(Field::build(2, 23), FieldTooLarge);
  EXPECT_THROW(Field::build(3, 5, 100), FieldTooLarge);
  try {
    Field::build(9, 1);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::NonPrime);
  }
}

TEST(FieldBuild, Deterministic) {
  const Field a = Field::build(3, 4), b = Field::build(3, 4);
  EXPECT_EQ(a.modulus(), b.modulus());
  EXPECT_EQ(a.generator(), b.generator());
  for (std::uint32_t e = 0; e < a.order(); ++e) ASSERT_EQ(a.exp(e), b.exp(e));
}

TEST(FieldArith, MatchesSchoolbookExhaustively) {
  for (auto [p, n] : kSmall) {
    const Field F = Field::build(p, n);
    const oracle::SlowField S(p, n);
    if (F.size() > 81) continue;
    for (std::uint32_t x = 0; x < F.size(); ++x) {
      const Element X{x};
      EXPECT_EQ(F.neg(X).code, S.neg(x));
      for (std::uint32_t y = 0; y < F.size(); ++y) {
        const Element Y{y};
        ASSERT_EQ(F.add(X, Y).code, S.add(x, y)) << p << "^" << n;
        ASSERT_EQ(F.sub(X, Y).code, S.sub(x, y));
        ASSERT_EQ(F.mul(X, Y).code, S.mul(x, y));
        if (y) {
          ASSERT_EQ(F.div(X, Y).code, S.div(x, y));
        }
      }
    }
  }
}

TEST(FieldArith, ContractExamples) {
  const Field F = Field::build(5, 2);
  const Element u = F.from_coeffs(std::vector<std::uint32_t>{0, 2});
  EXPECT_EQ(F.mul(u, u), F.from_int(2));
  const Field f5 = Field::build(5, 1);
  EXPECT_EQ(f5.inv(Element{3}).code, 2u);
  for (std::uint32_t x = 1; x < F.size(); ++x) EXPECT_EQ(F.pow(Element{x}, F.order()), F.one());
}

TEST(FieldArith, PowAndInverse) {
  const Field F = Field::build(3, 3);
  const oracle::SlowField S(3, 3);
  for (std::uint32_t x = 1; x < F.size(); ++x) {
    EXPECT_EQ(F.mul(Element{x}, F.inv(Element{x})), F.one());
    for (std::int64_t k : {0, 1, 2, 5, 13, 26, 27, 100})
      EXPECT_EQ(F.pow(Element{x}, k).code, S.pow(x, static_cast<std::uint64_t>(k)));
    EXPECT_EQ(F.pow(Element{x}, -1), F.inv(Element{x}));
    EXPECT_EQ(F.pow(Element{x}, -5), F.inv(F.pow(Element{x}, 5)));
  }
  EXPECT_EQ(F.pow(F.zero(), 0), F.one());
  EXPECT_EQ(F.pow(F.zero(), 3), F.zero());
  EXPECT_THROW(F.pow(F.zero(), -1), DivisionByZero);
  EXPECT_THROW(F.inv(F.zero()), DivisionByZero);
  EXPECT_THROW(F.div(F.one(), F.zero()), DivisionByZero);
}

TEST(FieldArith, LargeFieldRandomised) {
  const Field F = Field::build(3, 13);
  const oracle::SlowField S(3, 13);
  ASSERT_EQ(F.modulus(), S.modulus);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint32_t> any(0, F.size() - 1);
  for (int i = 0; i < 2000; ++i) {
    const std::uint32_t x = any(rng), y = any(rng);
    ASSERT_EQ(F.mul(Element{x}, Element{y}).code, S.mul(x, y));
    ASSERT_EQ(F.add(Element{x}, Element{y}).code, S.add(x, y));
  }
}

TEST(FieldEncoding, RoundTrip) {
  const Field F = Field::build(7, 2);
  for (std::uint32_t x = 0; x < F.size(); ++x) {
    const auto c = F.coeffs(Element{x});
    ASSERT_EQ(c.size(), 2u);
    for (auto ci : c) EXPECT_LT(ci, 7u);
    EXPECT_EQ(F.from_coeffs(c).code, x);
    EXPECT_EQ(c[0] + 7 * c[1], x);
  }
  EXPECT_EQ(F.from_int(-1).code, 6u);
  EXPECT_EQ(F.from_int(15).code, 1u);
  EXPECT_THROW(F.element(49), ExponentOutOfRange);
  EXPECT_THROW(F.from_coeffs(std::vector<std::uint32_t>{7}), ExponentOutOfRange);
  EXPECT_THROW(F.from_coeffs(std::vector<std::uint32_t>{1, 1, 1}), ExponentOutOfRange);
}

TEST(FieldLog, RoundTripAndExamples) {
  for (auto [p, n] : kSmall) {
    const Field F = Field::build(p, n);
    std::vector<bool> seen(F.size(), false);
    for (std::uint32_t e = 0; e < F.order(); ++e) {
      const Element x = F.exp(e);
      ASSERT_NE(x.code, 0u);
      ASSERT_FALSE(seen[x.code]);
      seen[x.code] = true;
      ASSERT_EQ(F.log(x), e);
    }
  }
  const Field f5 = Field::build(5, 1);
  EXPECT_EQ(f5.log(Element{4}), 2u);
  EXPECT_EQ(f5.log(Element{1}), 0u);
  EXPECT_THROW(f5.log(f5.zero()), LogOfZero);
  const Field f25 = Field::build(5, 2);
  const Element u{10};
  EXPECT_EQ(f25.exp(f25.log(u)), u);
}

TEST(FieldLog, ZechTable) {
  for (auto [p, n] : kSmall) {
    const Field F = Field::build(p, n);
    for (std::uint32_t k = 0; k < F.order(); ++k) {
      const Element s = F.add(F.one(), F.exp(k));
      if (s.code == 0)
        ASSERT_EQ(F.zech(k), Field::kNone);
      else
        ASSERT_EQ(F.exp(F.zech(k)), s);
    }
  }
}

TEST(Frobenius, ContractExamples) {
  const Field F = Field::build(5, 2);
  const Element u{10}; // 2t
  EXPECT_EQ(F.frobenius(u, 1).code, 15u); // 3t = -u
  EXPECT_EQ(F.frobenius(u, 1), F.neg(u));
  for (std::uint32_t x = 0; x < F.size(); ++x) EXPECT_EQ(F.frobenius(Element{x}, 0).code, x);
  for (std::uint32_t x = 0; x < 5; ++x)
    for (std::uint32_t j = 0; j < 4; ++j) EXPECT_EQ(F.frobenius(Element{x}, j).code, x);
}

TEST(Frobenius, IsAnAutomorphism) {
  for (auto [p, n] : kSmall) {
    const Field F = Field::build(p, n);
    if (F.size() > 121) continue;
    const oracle::SlowField S(p, n);
    for (std::uint32_t j = 0; j <= n; ++j)
      for (std::uint32_t x = 0; x < F.size(); ++x) {
        const Element X{x};
        ASSERT_EQ(F.frobenius(X, j).code, S.pow(x, oracle::ipow(p, j)));
        for (std::uint32_t y = 0; y < F.size(); ++y) {
          const Element Y{y};
          ASSERT_EQ(F.frobenius(F.add(X, Y), j), F.add(F.frobenius(X, j), F.frobenius(Y, j)));
          ASSERT_EQ(F.frobenius(F.mul(X, Y), j), F.mul(F.frobenius(X, j), F.frobenius(Y, j)));
        }
      }
  }
}

TEST(Frobenius, RandomisedAboveSmallFields) {
  const Field F = Field::build(2, 20);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::uint32_t> any(0, F.size() - 1);
  for (int i = 0; i < 5000; ++i) {
    const Element x{any(rng)}, y{any(rng)};
    const std::uint32_t j = static_cast<std::uint32_t>(rng() % 20);
    ASSERT_EQ(F.frobenius(F.add(x, y), j), F.add(F.frobenius(x, j), F.frobenius(y, j)));
    ASSERT_EQ(F.frobenius(F.mul(x, y), j), F.mul(F.frobenius(x, j), F.frobenius(y, j)));
    ASSERT_EQ(F.frobenius(x, 20), x);
  }
}

TEST(Subfields, Profile) {
  const Field f25 = Field::build(5, 2);
  EXPECT_EQ(f25.subfield_profile(Element{10}), (std::vector<std::uint32_t>{2}));
  EXPECT_EQ(f25.subfield_profile(Element{3}), (std::vector<std::uint32_t>{1, 2}));

  const Field F = Field::build(3, 4);
  const Element w = F.pow(F.generator(), (F.order()) / 8); // order 8 = 3^2 - 1
  EXPECT_EQ(F.subfield_profile(w), (std::vector<std::uint32_t>{2, 4}));
  EXPECT_EQ(F.generated_degree(w), 2u);
  EXPECT_EQ(F.generated_degree(F.generator()), 4u);
  for (std::uint32_t x = 0; x < 3; ++x)
    EXPECT_EQ(F.subfield_profile(Element{x}), (std::vector<std::uint32_t>{1, 2, 4}));

  // |F_{p^d}| elements satisfy the membership test.
  for (std::uint32_t d : {1u, 2u, 4u}) {
    std::uint32_t count = 0;
    for (std::uint32_t x = 0; x < F.size(); ++x) count += F.in_subfield(Element{x}, d);
    EXPECT_EQ(count, oracle::ipow(3, d));
  }
}

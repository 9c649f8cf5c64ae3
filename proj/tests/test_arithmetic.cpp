#include <gtest/gtest.h>

#include <random>

#include "fibz/arithmetic.hpp"
#include "oracles.hpp"

using fibz::ErrorKind;
using fibz::FixedPointForm;
using fibz::Nat;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const fibz::Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected fibz::Error";
  return ErrorKind::NotFound;
}

}  // namespace

TEST(Nat, DecimalRoundTrip) {
  for (const char* s : {"0", "1", "18446744073709551615", "18446744073709551616",
                        "1000000000000000000000000"}) {
    EXPECT_EQ(Nat::parse(s).str(), s);
  }
  EXPECT_EQ(kind_of([] { Nat::parse("-3"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { Nat::parse(""); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { Nat::parse("12a"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { (void)(Nat(3) - Nat(4)); }), ErrorKind::InvalidArgument);
}

TEST(Gcd, Examples) {
  EXPECT_EQ(fibz::gcd(12, 18), Nat(6));
  EXPECT_EQ(fibz::gcd(7, 0), Nat(7));
  EXPECT_EQ(fibz::gcd(59833, 59833), Nat(59833));
  EXPECT_EQ(fibz::gcd(0, 0), Nat(0));
}

TEST(Lcm, Examples) {
  EXPECT_EQ(fibz::lcm(6, 25), Nat(150));
  EXPECT_EQ(fibz::lcm(4, 6), Nat(12));
  EXPECT_EQ(fibz::lcm_many({Nat(3), Nat(4), Nat::pow(5, 2)}), Nat(300));
  EXPECT_EQ(fibz::lcm_many(std::span<const Nat>{}), Nat(1));
  EXPECT_EQ(kind_of([] { fibz::lcm(0, 5); }), ErrorKind::InvalidArgument);
}

TEST(Lcm, GcdTimesLcmIsProduct) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20000; ++i) {
    auto a = oracle::draw(rng, 1, 10000), b = oracle::draw(rng, 1, 10000);
    EXPECT_EQ(fibz::gcd(a, b) * fibz::lcm(a, b), Nat(a * b)) << a << " " << b;
  }
}

TEST(IsPrime, Examples) {
  EXPECT_TRUE(fibz::is_prime(2));
  EXPECT_FALSE(fibz::is_prime(1));
  EXPECT_FALSE(fibz::is_prime(0));
  EXPECT_EQ(fibz::is_prime(59833), oracle::is_prime_trial(59833));
  EXPECT_TRUE(fibz::is_prime(59833));
}

TEST(IsPrime, MatchesTrialDivisionBelow200k) {
  for (std::uint64_t n = 0; n < 200000; ++n) {
    ASSERT_EQ(fibz::is_prime(n), oracle::is_prime_trial(n)) << n;
  }
}

TEST(IsPrime, WordSizeHardCases) {
  // Strong pseudoprimes to several small bases.
  EXPECT_FALSE(fibz::is_prime(Nat(3215031751ull)));
  EXPECT_FALSE(fibz::is_prime(Nat(3825123056546413051ull)));
  EXPECT_TRUE(fibz::is_prime(Nat(18446744073709551557ull)));  // largest 64-bit prime
  EXPECT_TRUE(fibz::is_prime(Nat(4294967311ull)));
  EXPECT_FALSE(fibz::is_prime(Nat(4294967297ull)));  // 641 * 6700417
}

TEST(IsPrime, BigValuesAgreeWithFactorizer) {
  const Nat m89 = Nat::pow(2, 89) - Nat(1);
  const Nat m107 = Nat::pow(2, 107) - Nat(1);
  const Nat m127 = Nat::pow(2, 127) - Nat(1);
  EXPECT_TRUE(fibz::is_prime(m89));
  EXPECT_TRUE(fibz::is_prime(m107));
  EXPECT_TRUE(fibz::is_prime(m127));
  // Smallest strong pseudoprimes to the first 12 and first 13 prime bases.
  EXPECT_FALSE(fibz::is_prime(Nat::parse("318665857834031151167461")));
  EXPECT_FALSE(fibz::is_prime(Nat::parse("3317044064679887385961981")));

  // Composite products of primes around 2^40: the verdict is false and the
  // factorizer recovers exactly the two primes.
  const Nat p = Nat(1099511627791ull), q = Nat(1099511628401ull);
  ASSERT_TRUE(fibz::is_prime(p));
  ASSERT_TRUE(fibz::is_prime(q));
  const Nat n = p * q;
  EXPECT_FALSE(fibz::is_prime(n));
  auto f = fibz::factorize(n);
  ASSERT_EQ(f.factors.size(), 2u);
  EXPECT_EQ(f.factors[0], (fibz::PrimePower{p, 1}));
  EXPECT_EQ(f.factors[1], (fibz::PrimePower{q, 1}));
}

TEST(Factorize, Examples) {
  auto f12 = fibz::factorize(12);
  ASSERT_EQ(f12.factors.size(), 2u);
  EXPECT_EQ(f12.factors[0], (fibz::PrimePower{2, 2}));
  EXPECT_EQ(f12.factors[1], (fibz::PrimePower{3, 1}));
  EXPECT_TRUE(fibz::factorize(1).factors.empty());

  auto f = fibz::factorize(59833);
  auto expected = oracle::factor_trial(59833);
  ASSERT_EQ(f.factors.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_EQ(f.factors[i].prime, Nat(expected[i].first));
    EXPECT_EQ(f.factors[i].exponent, expected[i].second);
  }
  EXPECT_EQ(f.product(), Nat(59833));
  EXPECT_EQ(kind_of([] { fibz::factorize(0); }), ErrorKind::InvalidArgument);
}

TEST(Factorize, ReconstructsEveryNUpTo100k) {
  for (std::uint64_t n = 1; n <= 100000; ++n) {
    auto f = fibz::factorize(n);
    ASSERT_EQ(f.product(), Nat(n)) << n;
    for (std::size_t i = 0; i < f.factors.size(); ++i) {
      ASSERT_TRUE(fibz::is_prime(f.factors[i].prime)) << n;
      ASSERT_GE(f.factors[i].exponent, 1u);
      if (i) {
        ASSERT_LT(f.factors[i - 1].prime, f.factors[i].prime) << n;
      }
    }
  }
}

TEST(Factorize, LargeSmoothAndMixedInputs) {
  const Nat smooth = Nat(3) * Nat::pow(5, 24) * Nat::pow(2, 20);
  auto f = fibz::factorize(smooth);
  ASSERT_EQ(f.factors.size(), 3u);
  EXPECT_EQ(f.factors[0], (fibz::PrimePower{2, 20}));
  EXPECT_EQ(f.factors[1], (fibz::PrimePower{3, 1}));
  EXPECT_EQ(f.factors[2], (fibz::PrimePower{5, 24}));

  const Nat big_prime = Nat::pow(2, 61) - Nat(1);
  const Nat mixed = Nat::pow(7, 3) * big_prime * big_prime * Nat(1000003);
  auto g = fibz::factorize(mixed);
  EXPECT_EQ(g.product(), mixed);
  ASSERT_EQ(g.factors.size(), 3u);
  EXPECT_EQ(g.factors[2], (fibz::PrimePower{big_prime, 2}));
}

TEST(Factorize, DeterministicAcrossCalls) {
  const Nat n = Nat(1000000007ull) * Nat(998244353ull) * Nat(4294967311ull);
  auto a = fibz::factorize(n);
  auto b = fibz::factorize(n);
  EXPECT_EQ(a.factors, b.factors);
  EXPECT_EQ(a.product(), n);
}

TEST(Factorize, BudgetExhaustionIsAnError) {
  const Nat n = Nat(1099511627791ull) * Nat(1099511628401ull);
  fibz::FactorOptions tiny{.max_splitter_iterations = 10};
  EXPECT_EQ(kind_of([&] { fibz::factorize(n, tiny); }), ErrorKind::ResourceExceeded);
}

TEST(PAdicValuation, Examples) {
  EXPECT_EQ(fibz::p_adic_valuation(45, 3), 2u);
  EXPECT_EQ(fibz::p_adic_valuation(7, 5), 0u);
  EXPECT_EQ(fibz::p_adic_valuation(5, 5), 1u);  // F_5 = 5
  EXPECT_EQ(fibz::p_adic_valuation(Nat::pow(10, 30), 5), 30u);
  EXPECT_EQ(kind_of([] { fibz::p_adic_valuation(0, 5); }), ErrorKind::InvalidArgument);
}

TEST(ClassifyFixedPointForm, Examples) {
  using Tag = FixedPointForm::Tag;
  EXPECT_EQ(fibz::classify_fixed_point_form(1), (FixedPointForm{Tag::PowerOfFive, 0}));
  EXPECT_EQ(fibz::classify_fixed_point_form(60),
            (FixedPointForm{Tag::TwelveTimesPowerOfFive, 1}));
  EXPECT_EQ(fibz::classify_fixed_point_form(24), FixedPointForm{});
  EXPECT_EQ(fibz::to_string(fibz::classify_fixed_point_form(3125)), "5^5");
}

TEST(ClassifyFixedPointForm, MatchesFamilyEnumeration) {
  constexpr std::uint64_t kBound = 200000;
  std::vector<bool> in_family(kBound + 1, false);
  for (std::uint64_t p = 1; p <= kBound; p *= 5) {
    in_family[p] = true;
    if (12 * p <= kBound) in_family[12 * p] = true;
  }
  for (std::uint64_t n = 1; n <= kBound; ++n) {
    ASSERT_EQ(fibz::classify_fixed_point_form(n).is_fixed_form(), in_family[n]) << n;
  }
}

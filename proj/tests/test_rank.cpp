#include <gtest/gtest.h>

#include <random>
#include <sstream>
#include <thread>

#include "fibz/cache_io.hpp"
#include "fibz/rank.hpp"
#include "oracles.hpp"

using fibz::Backend;
using fibz::ErrorKind;
using fibz::Nat;
using fibz::ZCache;

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

TEST(ZBruteforce, Examples) {
  EXPECT_EQ(fibz::z_bruteforce(10).z, Nat(15));
  EXPECT_EQ(fibz::z_bruteforce(1).z, Nat(1));
  EXPECT_EQ(fibz::z_bruteforce(11).z, Nat(10));
  EXPECT_EQ(fibz::z_bruteforce(10).backend, Backend::Oracle);
}

TEST(ZBruteforce, ScanLimit) {
  fibz::Limits limits{.scan_limit = 100};
  EXPECT_EQ(fibz::z_bruteforce(100, limits).z, Nat(150));
  EXPECT_EQ(kind_of([&] { fibz::z_bruteforce(101, limits); }),
            ErrorKind::ResourceExceeded);
  EXPECT_EQ(kind_of([] { fibz::z_bruteforce(0); }), ErrorKind::InvalidArgument);
}

TEST(ZPrime, Examples) {
  EXPECT_EQ(fibz::z_prime(7).z, Nat(8));
  EXPECT_EQ(fibz::z_prime(5).z, Nat(5));
  EXPECT_EQ(fibz::z_prime(89).z, Nat(oracle::z_scan(89)));
  EXPECT_EQ(fibz::z_prime(89).z, Nat(11));
  EXPECT_EQ(fibz::z_prime(2).z, Nat(3));
  EXPECT_EQ(fibz::z_prime(3).z, Nat(4));
  EXPECT_EQ(kind_of([] { fibz::z_prime(91); }), ErrorKind::InvalidArgument);
}

TEST(ZPrime, MatchesScanForPrimesBelow20k) {
  for (std::uint64_t p = 2; p < 20000; ++p) {
    if (!oracle::is_prime_trial(p)) continue;
    ASSERT_EQ(fibz::z_prime(p).z, Nat(oracle::z_scan(p))) << p;
  }
}

TEST(ZPrime, LargePrimeDividesTarget) {
  // 2^61 - 1 = 1 mod 5, so z(p) | p - 1; check the defining properties.
  const Nat p = Nat::pow(2, 61) - Nat(1);
  const Nat zp = fibz::z_prime(p).z;
  EXPECT_TRUE(fibz::fib_mod(zp, p).is_zero());
  EXPECT_TRUE(((p - Nat(1)) % zp).is_zero());
  for (const auto& [q, e] : fibz::factorize(zp).factors) {
    EXPECT_FALSE(fibz::fib_mod(zp / q, p).is_zero()) << q;
  }
}

TEST(ZPrimePower, Examples) {
  ZCache cache;
  EXPECT_EQ(fibz::z_prime_power(2, 10, cache).z, Nat(768));
  EXPECT_EQ(fibz::z_prime_power(3, 3, cache).z, Nat(36));
  EXPECT_EQ(fibz::z_prime_power(7, 2, cache).z, Nat(oracle::z_scan(49)));
  EXPECT_EQ(fibz::z_prime_power(7, 2, cache).z, Nat(56));
  EXPECT_EQ(fibz::z_prime_power(2, 1, cache).z, Nat(3));
  EXPECT_EQ(fibz::z_prime_power(2, 2, cache).z, Nat(6));
  EXPECT_EQ(kind_of([&] { fibz::z_prime_power(9, 1, cache); }),
            ErrorKind::InvalidArgument);
}

TEST(ZPrimePower, MatchesScan) {
  ZCache cache;
  for (std::uint64_t p = 2; p < 400; ++p) {
    if (!oracle::is_prime_trial(p)) continue;
    std::uint64_t q = p;
    for (unsigned e = 1; q <= 2'000'000; ++e, q *= p) {
      ASSERT_EQ(fibz::z_prime_power(p, e, cache).z, Nat(oracle::z_scan(q)))
          << p << "^" << e;
    }
  }
}

TEST(ZPrimePower, WallSunSunPrimeExponentIsStable) {
  // For every p below 10^4 (no Wall-Sun-Sun prime exists there), F_z(p) has
  // p-adic valuation exactly 1, so z(p^e) = p^(e-1) z(p).
  ZCache cache;
  for (std::uint64_t p = 3; p < 10000; p += 2) {
    if (!oracle::is_prime_trial(p)) continue;
    Nat zp = fibz::z_prime(p).z;
    EXPECT_EQ(fibz::z_prime_power(p, 4, cache).z, Nat::pow(p, 3) * zp) << p;
  }
}

TEST(ZFast, Examples) {
  ZCache cache;
  EXPECT_EQ(fibz::z_fast(12, cache).z, Nat(12));
  EXPECT_EQ(fibz::z_fast(100, cache).z, Nat(oracle::z_scan(100)));
  EXPECT_EQ(fibz::z_fast(100, cache).z, Nat(150));
  EXPECT_EQ(fibz::z_fast(6, cache).z, Nat(12));
  EXPECT_EQ(fibz::z_fast(1, cache).z, Nat(1));
}

TEST(ZDispatch, Examples) {
  ZCache cache;
  EXPECT_EQ(fibz::z(8, Backend::Fast, cache).z, Nat(6));
  EXPECT_EQ(fibz::z(9, Backend::CrossCheck, cache).z, Nat(12));
  EXPECT_EQ(fibz::z(2, Backend::Oracle, cache).z, Nat(3));
}

TEST(ZDispatch, CrossCheckReportsBothValues) {
  // Seed the cache with a wrong (but trusted) entry so the fast route
  // disagrees with the oracle.
  ZCache cache;
  cache.insert(7, 1, 16);
  try {
    fibz::z(7, Backend::CrossCheck, cache);
    FAIL() << "expected BackendMismatch";
  } catch (const fibz::BackendMismatch& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BackendMismatch);
    EXPECT_EQ(e.oracle(), Nat(8));
    EXPECT_EQ(e.fast(), Nat(16));
  }
}

TEST(ZFast, AgreesWithOracleUpTo5000) {
  ZCache cache;
  for (std::uint64_t n = 1; n <= 5000; ++n) {
    ASSERT_EQ(fibz::z_fast(n, cache).z, Nat(oracle::z_scan(n))) << n;
  }
}

TEST(ZProperties, BoundAndEqualitySet) {
  ZCache cache;
  std::vector<std::uint64_t> equality;
  for (std::uint64_t n = 1; n <= 100000; ++n) {
    Nat zn = fibz::z_fast(n, cache).z;
    ASSERT_LE(zn, Nat(2 * n)) << n;
    if (zn == Nat(2 * n)) equality.push_back(n);
  }
  EXPECT_EQ(equality,
            (std::vector<std::uint64_t>{6, 30, 150, 750, 3750, 18750, 93750}));
}

TEST(ZProperties, PrimeBoundAndCoprimality) {
  ZCache cache;
  for (std::uint64_t p = 2; p < 10000; ++p) {
    if (!oracle::is_prime_trial(p)) continue;
    Nat zp = fibz::z_fast(p, cache).z;
    EXPECT_LE(zp, Nat(p + 1)) << p;
    if (p != 5) {
      EXPECT_EQ(fibz::gcd(p, zp), Nat(1)) << p;
    }
  }
}

TEST(ZProperties, ZeroIndicesAreMultiplesOfZ) {
  ZCache cache;
  for (std::uint64_t n = 2; n <= 2000; ++n) {
    std::uint64_t zn = fibz::z_fast(n, cache).z.to_u64();
    std::uint64_t a = 1, b = 1;
    for (std::uint64_t j = 1; j <= 4 * n; ++j) {
      if (a == 0) {
        ASSERT_EQ(j % zn, 0u) << n << " " << j;
      }
      std::uint64_t c = (a + b) % n;
      a = b;
      b = c;
    }
  }
}

TEST(ZProperties, LcmLawOnRandomPairs) {
  ZCache cache;
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 3000; ++i) {
    std::uint64_t m1 = oracle::draw(rng, 1, 5000), m2 = oracle::draw(rng, 1, 5000);
    Nat lhs = fibz::z_fast(oracle::lcm(m1, m2), cache).z;
    Nat rhs = fibz::lcm(Nat(oracle::z_scan(m1)), Nat(oracle::z_scan(m2)));
    ASSERT_EQ(lhs, rhs) << m1 << " " << m2;
  }
}

TEST(ZCacheTest, CachingDoesNotChangeResults) {
  ZCache warm;
  for (std::uint64_t n = 1; n <= 3000; ++n) fibz::z_fast(n, warm);
  EXPECT_GT(warm.size(), 0u);
  for (std::uint64_t n = 1; n <= 3000; ++n) {
    ZCache cold;
    ASSERT_EQ(fibz::z_fast(n, warm).z, fibz::z_fast(n, cold).z) << n;
  }
  EXPECT_GT(warm.hits(), 0u);
  for (const auto& entry : warm.entries()) {
    EXPECT_TRUE(fibz::cache_entry_valid(entry)) << entry.prime << "^" << entry.exponent;
  }
}

TEST(ZCacheTest, ConcurrentFillMatchesSequential) {
  ZCache shared;
  std::vector<std::jthread> pool;
  std::vector<std::vector<Nat>> results(4);
  for (unsigned t = 0; t < 4; ++t) {
    pool.emplace_back([&, t] {
      for (std::uint64_t n = 1; n <= 4000; ++n) {
        results[t].push_back(fibz::z_fast(n, shared).z);
      }
    });
  }
  pool.clear();
  ZCache seq;
  for (std::uint64_t n = 1; n <= 4000; ++n) {
    Nat expected = fibz::z_fast(n, seq).z;
    for (unsigned t = 0; t < 4; ++t) ASSERT_EQ(results[t][n - 1], expected);
  }
  EXPECT_EQ(shared.entries(), seq.entries());
}

TEST(CacheIo, StoreFormat) {
  ZCache cache;
  cache.insert(3, 1, 4);
  cache.insert(2, 3, 6);
  std::ostringstream out;
  fibz::cache_store(cache, out);
  EXPECT_EQ(out.str(), "2,3,6\n3,1,4\n");
}

TEST(CacheIo, LoadAndValidate) {
  {
    ZCache cache;
    std::istringstream in("7,1,8\n");
    fibz::cache_load(in, cache);
    EXPECT_EQ(cache.find(7, 1), Nat(8));
  }
  {
    ZCache cache;
    std::istringstream in("7,1,9\n");
    EXPECT_EQ(kind_of([&] { fibz::cache_load(in, cache); }), ErrorKind::ValidationError);
  }
  {
    // Divisible but not minimal: F_16 = 987 = 3 * 7 * 47.
    ZCache cache;
    std::istringstream in("7,1,16\n");
    EXPECT_EQ(kind_of([&] { fibz::cache_load(in, cache); }), ErrorKind::ValidationError);
  }
  {
    ZCache cache;
    std::istringstream in("7,1,9\n");
    fibz::cache_load(in, cache, /*trust=*/true);
    EXPECT_EQ(cache.find(7, 1), Nat(9));
  }
}

TEST(CacheIo, MalformedLinesCarryLineNumbers) {
  for (const char* text : {"2,3,6\n3,1\n", "2,3,6\nx,1,4\n", "2,3,6\n3,0,4\n",
                           "2,3,6\n3,1,4,5\n", "2,3,6\n\n"}) {
    ZCache cache;
    std::istringstream in(text);
    try {
      fibz::cache_load(in, cache);
      FAIL() << "accepted: " << text;
    } catch (const fibz::Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::ParseError);
      EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
    }
  }
}

TEST(CacheIo, RoundTrip) {
  ZCache cache;
  for (std::uint64_t n = 1; n <= 2000; ++n) fibz::z_fast(n, cache);
  fibz::z_fast(Nat::pow(10, 24), cache);
  std::stringstream buf;
  fibz::cache_store(cache, buf);
  ZCache loaded;
  fibz::cache_load(buf, loaded);
  EXPECT_EQ(loaded.entries(), cache.entries());
}

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fibz/error.hpp"
#include "fibz/nat.hpp"

namespace fibz {

namespace detail {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}
inline u64 add_mod(u64 a, u64 b, u64 m) {
  return a >= m - b ? a - (m - b) : a + b;
}
inline u64 sub_mod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + (m - b); }

inline BigInt mul_mod(const BigInt& a, const BigInt& b, const BigInt& m) {
  return a * b % m;
}
inline BigInt add_mod(const BigInt& a, const BigInt& b, const BigInt& m) {
  BigInt s = a + b;
  if (s >= m) s -= m;
  return s;
}
inline BigInt sub_mod(const BigInt& a, const BigInt& b, const BigInt& m) {
  return a >= b ? BigInt(a - b) : BigInt(a + m - b);
}

inline u64 abs_diff(u64 a, u64 b) { return a > b ? a - b : b - a; }
inline BigInt abs_diff(const BigInt& a, const BigInt& b) {
  return a > b ? BigInt(a - b) : BigInt(b - a);
}

inline u64 gcd_of(u64 a, u64 b) { return std::gcd(a, b); }
inline BigInt gcd_of(const BigInt& a, const BigInt& b) {
  return boost::multiprecision::gcd(a, b);
}

inline u64 pow_mod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

/// Primes below 2^16, used for trial division.
inline const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    constexpr std::uint32_t limit = 1u << 16;
    std::vector<bool> composite(limit, false);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i < limit; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (std::uint64_t j = std::uint64_t{i} * i; j < limit; j += i) {
        composite[j] = true;
      }
    }
    return out;
  }();
  return primes;
}

// Strong probable-prime test for odd n > 2 to base a.
inline bool strong_probable_prime(u64 n, u64 a) {
  a %= n;
  if (a == 0) return true;
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  u64 x = pow_mod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < s; ++i) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

inline bool strong_probable_prime(const BigInt& n, const BigInt& a) {
  BigInt d = n - 1;
  unsigned s = 0;
  while (!boost::multiprecision::bit_test(d, 0)) {
    d >>= 1;
    ++s;
  }
  BigInt x = boost::multiprecision::powm(a, d, n);
  BigInt n_minus_one = n - 1;
  if (x == 1 || x == n_minus_one) return true;
  for (unsigned i = 1; i < s; ++i) {
    x = x * x % n;
    if (x == n_minus_one) return true;
  }
  return false;
}

/// Exact for every 64-bit input: trial division below 2^16 settles
/// n < 2^32, and the seven-base Miller-Rabin set below is a known
/// deterministic witness set for all n < 2^64.
inline bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (std::uint32_t p : small_primes()) {
    if (u64{p} * p > n) return true;
    if (n % p == 0) return n == p;
  }
  for (u64 a : {2ull, 325ull, 9375ull, 28178ull, 450775ull, 9780504ull,
                1795265022ull}) {
    if (!strong_probable_prime(n, a)) return false;
  }
  return true;
}

/// Below this bound, Miller-Rabin with the first 13 prime bases is
/// deterministic (Sorenson and Webster).
inline const BigInt& deterministic_mr_bound() {
  static const BigInt bound("3317044064679887385961981");
  return bound;
}

inline constexpr std::array<unsigned, 24> kBigWitnesses = {
    2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
    41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89};

inline bool is_prime_big(const BigInt& n) {
  if (n <= std::numeric_limits<u64>::max()) {
    return is_prime_u64(static_cast<u64>(n));
  }
  for (std::uint32_t p : small_primes()) {
    if (n % p == 0) return false;
  }
  std::size_t rounds =
      n < deterministic_mr_bound() ? std::size_t{13} : kBigWitnesses.size();
  for (std::size_t i = 0; i < rounds; ++i) {
    if (!strong_probable_prime(n, BigInt(kBigWitnesses[i]))) return false;
  }
  return true;
}

/// Splitter-iteration budget shared by one factorize call.
class Budget {
 public:
  Budget(std::uint64_t limit, const Nat& target)
      : remaining_(limit), limit_(limit), target_(target) {}

  void spend(std::uint64_t steps) {
    if (steps > remaining_) {
      fail(ErrorKind::ResourceExceeded,
           "factoring budget of " + std::to_string(limit_) +
               " splitter iterations exhausted on " + target_.str());
    }
    remaining_ -= steps;
  }

 private:
  std::uint64_t remaining_;
  std::uint64_t limit_;
  const Nat& target_;
};

inline u64 random_below(std::mt19937_64& rng, u64 n) { return rng() % n; }
inline BigInt random_below(std::mt19937_64& rng, const BigInt& n) {
  BigInt r = 0;
  for (std::size_t bits = 0; bits < boost::multiprecision::msb(n) + 64;
       bits += 64) {
    r <<= 64;
    r |= BigInt(rng());
  }
  return r % n;
}

/// Brent's variant of Pollard rho. n must be odd, composite and not a
/// perfect power. Returns a nontrivial divisor.
template <class T>
T rho_split(const T& n, Budget& budget, std::mt19937_64& rng) {
  constexpr std::uint64_t kBatch = 128;
  for (;;) {
    const T c = random_below(rng, T(n - 1)) + 1;
    T y = random_below(rng, n);
    auto step = [&](const T& v) { return add_mod(mul_mod(v, v, n), c, n); };
    T x = y, ys = y, q = 1, g = 1;
    std::uint64_t r = 1;
    do {
      x = y;
      budget.spend(r);
      for (std::uint64_t i = 0; i < r; ++i) y = step(y);
      std::uint64_t k = 0;
      while (k < r && g == 1) {
        ys = y;
        std::uint64_t batch = std::min(kBatch, r - k);
        budget.spend(batch);
        for (std::uint64_t i = 0; i < batch; ++i) {
          y = step(y);
          q = mul_mod(q, abs_diff(x, y), n);
        }
        g = gcd_of(q, n);
        k += batch;
      }
      r *= 2;
    } while (g == 1);
    if (g == n) {
      // Batch overshot; back up one step at a time.
      do {
        budget.spend(1);
        ys = step(ys);
        g = gcd_of(abs_diff(x, ys), n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

using WordFactors = std::vector<std::pair<u64, unsigned>>;

inline void add_factor(WordFactors& out, u64 p, unsigned e) {
  for (auto& [q, f] : out) {
    if (q == p) {
      f += e;
      return;
    }
  }
  out.emplace_back(p, e);
}

/// floor(n^(1/k)) for k >= 2, by Newton iteration.
inline BigInt integer_root(const BigInt& n, unsigned k) {
  if (n < 2) return n;
  const std::size_t bits = boost::multiprecision::msb(n) + 1;
  BigInt x = BigInt(1) << ((bits + k - 1) / k);  // x >= root
  for (;;) {
    BigInt y = ((k - 1) * x + n / boost::multiprecision::pow(x, k - 1)) / k;
    if (y >= x) return x;
    x = std::move(y);
  }
}

/// Largest k with n = r^k, returned as (r, k); (n, 1) if n is no perfect
/// power. n must have no prime factor below 2^16, which bounds k.
inline std::pair<BigInt, unsigned> perfect_power(const BigInt& n) {
  const std::size_t bits = boost::multiprecision::msb(n) + 1;
  for (unsigned k = static_cast<unsigned>(bits / 16); k >= 2; --k) {
    BigInt r = integer_root(n, k);
    if (boost::multiprecision::pow(r, k) == n) return {r, k};
  }
  return {n, 1};
}

// n has no prime factor below 2^16. Factors are recorded with their
// exponent multiplied by `mult`.
inline void factor_rough_u64(u64 n, unsigned mult, Budget& budget,
                             std::mt19937_64& rng, WordFactors& out) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    add_factor(out, n, mult);
    return;
  }
  if (auto [root, k] = perfect_power(BigInt(n)); k > 1) {
    factor_rough_u64(static_cast<u64>(root), mult * k, budget, rng, out);
    return;
  }
  u64 d = rho_split<u64>(n, budget, rng);
  factor_rough_u64(d, mult, budget, rng, out);
  factor_rough_u64(n / d, mult, budget, rng, out);
}

inline void factor_u64(u64 n, Budget& budget, std::mt19937_64& rng,
                       WordFactors& out) {
  for (std::uint32_t p : small_primes()) {
    if (u64{p} * p > n) break;
    if (n % p != 0) continue;
    unsigned e = 0;
    do {
      n /= p;
      ++e;
    } while (n % p == 0);
    add_factor(out, p, e);
  }
  if (n == 1) return;
  // Survivors below 2^32 have no factor under their square root.
  if (n < (u64{1} << 32)) {
    add_factor(out, n, 1);
    return;
  }
  factor_rough_u64(n, 1, budget, rng, out);
}

using BigFactors = std::vector<std::pair<BigInt, unsigned>>;

inline void add_factor(BigFactors& out, const BigInt& p, unsigned e) {
  for (auto& [q, f] : out) {
    if (q == p) {
      f += e;
      return;
    }
  }
  out.emplace_back(p, e);
}

// As factor_rough_u64, for multiprecision n.
inline void factor_rough_big(const BigInt& n, unsigned mult, Budget& budget,
                             std::mt19937_64& rng, BigFactors& out) {
  if (n == 1) return;
  if (n <= std::numeric_limits<u64>::max()) {
    WordFactors word;
    factor_rough_u64(static_cast<u64>(n), mult, budget, rng, word);
    for (auto [p, e] : word) add_factor(out, BigInt(p), e);
    return;
  }
  if (is_prime_big(n)) {
    add_factor(out, n, mult);
    return;
  }
  if (auto [root, k] = perfect_power(n); k > 1) {
    factor_rough_big(root, mult * k, budget, rng, out);
    return;
  }
  BigInt d = rho_split<BigInt>(n, budget, rng);
  factor_rough_big(d, mult, budget, rng, out);
  factor_rough_big(n / d, mult, budget, rng, out);
}

inline constexpr std::uint64_t kFactorSeed = 0x9E3779B97F4A7C15ull;

}  // namespace detail

inline Nat gcd(const Nat& a, const Nat& b) {
  if (auto x = a.as_u64(), y = b.as_u64(); x && y) return std::gcd(*x, *y);
  return Nat(boost::multiprecision::gcd(a.big(), b.big()));
}

inline Nat lcm(const Nat& a, const Nat& b) {
  require(!a.is_zero() && !b.is_zero(), "lcm: arguments must be >= 1");
  return a / gcd(a, b) * b;
}

/// lcm of an empty list is 1.
inline Nat lcm_many(std::span<const Nat> values) {
  Nat acc = 1;
  for (const Nat& v : values) acc = lcm(acc, v);
  return acc;
}

inline Nat lcm_many(std::initializer_list<Nat> values) {
  return lcm_many(std::span<const Nat>(values.begin(), values.size()));
}

/// Exact below 2^64. Larger inputs below 3.3e24 use the 13-base
/// deterministic Miller-Rabin set; beyond that, a number is reported prime
/// when it is a strong probable prime to each of the first 24 primes.
inline bool is_prime(const Nat& n) {
  if (auto w = n.as_u64()) return detail::is_prime_u64(*w);
  return detail::is_prime_big(n.big());
}

struct PrimePower {
  Nat prime;
  unsigned exponent = 0;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct Factorization {
  Nat n;
  std::vector<PrimePower> factors;  // primes strictly increasing

  Nat product() const {
    Nat acc = 1;
    for (const auto& [p, e] : factors) acc *= Nat::pow(p, e);
    return acc;
  }
};

struct FactorOptions {
  /// Maximum total rho iterations spent on one input.
  std::uint64_t max_splitter_iterations = std::uint64_t{1} << 24;
};

/// Complete prime factorization of n >= 1. Deterministic: the splitter is
/// seeded with a fixed constant on every call. Throws ResourceExceeded
/// rather than returning a partial result.
inline Factorization factorize(const Nat& n, const FactorOptions& options = {}) {
  require(!n.is_zero(), "factorize: n must be >= 1");
  detail::Budget budget(options.max_splitter_iterations, n);
  std::mt19937_64 rng(detail::kFactorSeed);
  Factorization result{n, {}};

  if (auto w = n.as_u64()) {
    detail::WordFactors word;
    detail::factor_u64(*w, budget, rng, word);
    std::sort(word.begin(), word.end());
    result.factors.reserve(word.size());
    for (auto [p, e] : word) result.factors.push_back({Nat(p), e});
    return result;
  }

  BigInt rest = n.big();
  detail::BigFactors big;
  for (std::uint32_t p : detail::small_primes()) {
    if (rest == 1) break;
    if (rest % p != 0) continue;
    unsigned e = 0;
    do {
      rest /= p;
      ++e;
    } while (rest % p == 0);
    detail::add_factor(big, BigInt(p), e);
  }
  detail::factor_rough_big(rest, 1, budget, rng, big);
  std::sort(big.begin(), big.end());
  for (auto& [p, e] : big) result.factors.push_back({Nat(std::move(p)), e});
  return result;
}

/// Largest v with p^v | n.
inline unsigned p_adic_valuation(const Nat& n, const Nat& p) {
  require(!n.is_zero(), "p_adic_valuation: valuation of 0 is infinite");
  require(p >= Nat(2), "p_adic_valuation: p must be >= 2");
  unsigned v = 0;
  if (auto w = n.as_u64(), q = p.as_u64(); w && q) {
    std::uint64_t x = *w;
    while (x % *q == 0) {
      x /= *q;
      ++v;
    }
    return v;
  }
  BigInt x = n.big();
  while (x % p.big() == 0) {
    x /= p.big();
    ++v;
  }
  return v;
}

struct FixedPointForm {
  enum class Tag { PowerOfFive, TwelveTimesPowerOfFive, Neither };
  Tag tag = Tag::Neither;
  unsigned k = 0;  // meaningful unless tag == Neither

  bool is_fixed_form() const { return tag != Tag::Neither; }
  friend bool operator==(const FixedPointForm&, const FixedPointForm&) = default;
};

inline std::string to_string(const FixedPointForm& f) {
  switch (f.tag) {
    case FixedPointForm::Tag::PowerOfFive:
      return "5^" + std::to_string(f.k);
    case FixedPointForm::Tag::TwelveTimesPowerOfFive:
      return "12*5^" + std::to_string(f.k);
    case FixedPointForm::Tag::Neither:
      break;
  }
  return "neither";
}

/// Strips factors of 5 and compares the cofactor against 1 and 12.
inline FixedPointForm classify_fixed_point_form(const Nat& n) {
  require(!n.is_zero(), "classify_fixed_point_form: n must be >= 1");
  unsigned k = p_adic_valuation(n, 5);
  Nat rest = n / Nat::pow(5, k);
  if (rest == Nat(1)) return {FixedPointForm::Tag::PowerOfFive, k};
  if (rest == Nat(12)) return {FixedPointForm::Tag::TwelveTimesPowerOfFive, k};
  return {};
}

}  // namespace fibz

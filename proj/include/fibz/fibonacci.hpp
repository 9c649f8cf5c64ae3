#pragma once

#include <cstdint>
#include <utility>

#include "fibz/arithmetic.hpp"
#include "fibz/error.hpp"
#include "fibz/nat.hpp"

namespace fibz {

/// (F_k mod m, F_{k+1} mod m).
struct FibPairMod {
  Nat index;
  Nat modulus;
  Nat current;
  Nat next;
};

namespace detail {

/// Fast doubling over the bits of k, most significant first:
///   F(2j)   = F(j) * (2 F(j+1) - F(j))
///   F(2j+1) = F(j)^2 + F(j+1)^2
template <class T>
std::pair<T, T> fib_pair(const Nat& k, const T& m) {
  T a = 0;      // F(j)
  T b = 1 % m;  // F(j+1)
  for (std::size_t i = k.bit_length(); i-- > 0;) {
    T two_b = add_mod(b, b, m);
    T c = mul_mod(a, sub_mod(two_b, a, m), m);
    T d = add_mod(mul_mod(a, a, m), mul_mod(b, b, m), m);
    if (k.bit(i)) {
      a = d;
      b = add_mod(c, d, m);
    } else {
      a = c;
      b = d;
    }
  }
  return {a, b};
}

inline std::pair<Nat, Nat> fib_pair_nat(const Nat& k, const Nat& m) {
  if (auto w = m.as_u64()) {
    auto [a, b] = fib_pair<u64>(k, *w);
    return {Nat(a), Nat(b)};
  }
  auto [a, b] = fib_pair<BigInt>(k, m.big());
  return {Nat(std::move(a)), Nat(std::move(b))};
}

}  // namespace detail

inline FibPairMod fib_pair_mod(const Nat& k, const Nat& m) {
  require(m >= Nat(2), "fib_pair_mod: modulus must be >= 2");
  auto [a, b] = detail::fib_pair_nat(k, m);
  return {k, m, std::move(a), std::move(b)};
}

inline Nat fib_mod(const Nat& k, const Nat& m) {
  require(m >= Nat(2), "fib_mod: modulus must be >= 2");
  return detail::fib_pair_nat(k, m).first;
}

inline constexpr std::uint64_t kFibExactCap = 10'000;

/// Exact F_k by iterating the recurrence. Capped at k <= 10^4.
inline Nat fib_exact(std::uint64_t k) {
  require(k <= kFibExactCap,
          "fib_exact: index above cap of " + std::to_string(kFibExactCap));
  BigInt a = 0, b = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    BigInt t = a + b;
    a = std::move(b);
    b = std::move(t);
  }
  return Nat(std::move(a));
}

/// min(v_p(F_j), cap), read off F_j mod p^cap. A zero residue reports cap.
inline unsigned fib_valuation(const Nat& j, const Nat& p, unsigned cap) {
  require(cap >= 1, "fib_valuation: cap must be >= 1");
  require(!j.is_zero(), "fib_valuation: j must be >= 1");
  require(is_prime(p), "fib_valuation: p must be prime, got " + p.str());
  Nat residue = fib_mod(j, Nat::pow(p, cap));
  if (residue.is_zero()) return cap;
  return p_adic_valuation(residue, p);
}

}  // namespace fibz

#pragma once

// Test-only reference implementations. These deliberately avoid the library
// code paths they are used to check: plain iteration, trial division and
// linear scans over 64-bit words.

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

using u64 = std::uint64_t;

inline std::pair<u64, u64> fib_pair_naive(u64 k, u64 m) {
  u64 a = 0, b = 1 % m;
  for (u64 i = 0; i < k; ++i) {
    u64 c = (a + b) % m;
    a = b;
    b = c;
  }
  return {a, b};
}

inline bool is_prime_trial(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

inline std::vector<std::pair<u64, unsigned>> factor_trial(u64 n) {
  std::vector<std::pair<u64, unsigned>> out;
  for (u64 d = 2; d * d <= n; ++d) {
    unsigned e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    if (e) out.emplace_back(d, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

/// Smallest l >= 1 with n | F_l, by walking the sequence mod n.
inline u64 z_scan(u64 n) {
  if (n == 1) return 1;
  u64 a = 1, b = 1;  // F_1, F_2
  for (u64 l = 1;; ++l) {
    if (a % n == 0) return l;
    u64 c = (a + b) % n;
    a = b;
    b = c;
  }
}

inline u64 gcd(u64 a, u64 b) {
  while (b) {
    u64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline u64 lcm(u64 a, u64 b) { return a / gcd(a, b) * b; }

/// z, z^2, ... up to and including the first fixed point, by scanning.
inline std::vector<u64> orbit_scan(u64 n) {
  std::vector<u64> out;
  u64 cur = n;
  for (;;) {
    u64 next = z_scan(cur);
    if (next == cur) {
      if (out.empty()) out.push_back(cur);
      return out;
    }
    out.push_back(next);
    cur = next;
  }
}

/// Portable uniform draw in [lo, hi]; the distribution classes in <random>
/// are implementation-defined.
inline u64 draw(std::mt19937_64& rng, u64 lo, u64 hi) {
  return lo + rng() % (hi - lo + 1);
}

}  // namespace oracle

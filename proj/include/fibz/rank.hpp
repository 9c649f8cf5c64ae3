#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fibz/arithmetic.hpp"
#include "fibz/error.hpp"
#include "fibz/fibonacci.hpp"
#include "fibz/nat.hpp"

namespace fibz {

enum class Backend { Oracle, Fast, CrossCheck };

constexpr std::string_view to_string(Backend b) {
  switch (b) {
    case Backend::Oracle: return "oracle";
    case Backend::Fast: return "fast";
    case Backend::CrossCheck: return "crosscheck";
  }
  return "unknown";
}

/// z(n) together with the backend that produced it.
struct ZValue {
  Nat n;
  Nat z;
  Backend backend = Backend::Fast;
};

struct Limits {
  /// Largest n the oracle will scan.
  std::uint64_t scan_limit = 10'000'000;
  FactorOptions factoring{};
};

/// Oracle and fast backends disagreed. Not recoverable: it means one of
/// the two routes is wrong.
class BackendMismatch : public Error {
 public:
  BackendMismatch(Nat n, Nat oracle, Nat fast)
      : Error(ErrorKind::BackendMismatch,
              "backend mismatch for n=" + n.str() + ": oracle=" +
                  oracle.str() + " fast=" + fast.str()),
        n_(std::move(n)),
        oracle_(std::move(oracle)),
        fast_(std::move(fast)) {}

  const Nat& n() const { return n_; }
  const Nat& oracle() const { return oracle_; }
  const Nat& fast() const { return fast_; }

 private:
  Nat n_, oracle_, fast_;
};

/// Memo of z(p^e) keyed by prime power.
///
/// Readers take a shared lock; writers an exclusive one. Two writers racing
/// on the same key always carry the same value, so insert order does not
/// affect contents.
class ZCache {
 public:
  struct Entry {
    Nat prime;
    unsigned exponent = 0;
    Nat z;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  ZCache() = default;
  ZCache(const ZCache&) = delete;
  ZCache& operator=(const ZCache&) = delete;

  std::optional<Nat> find(const Nat& p, unsigned e) const {
    std::shared_lock lock(mu_);
    auto it = entries_.find({p, e});
    if (it == entries_.end()) {
      misses_.fetch_add(1, std::memory_order_relaxed);
      return std::nullopt;
    }
    hits_.fetch_add(1, std::memory_order_relaxed);
    return it->second;
  }

  void insert(const Nat& p, unsigned e, const Nat& z) {
    std::unique_lock lock(mu_);
    entries_.insert_or_assign({p, e}, z);
  }

  /// Entries sorted by (prime, exponent).
  std::vector<Entry> entries() const {
    std::shared_lock lock(mu_);
    std::vector<Entry> out;
    out.reserve(entries_.size());
    for (const auto& [key, z] : entries_) out.push_back({key.first, key.second, z});
    return out;
  }

  std::size_t size() const {
    std::shared_lock lock(mu_);
    return entries_.size();
  }
  std::uint64_t hits() const { return hits_.load(std::memory_order_relaxed); }
  std::uint64_t misses() const {
    return misses_.load(std::memory_order_relaxed);
  }

 private:
  mutable std::shared_mutex mu_;
  std::map<std::pair<Nat, unsigned>, Nat> entries_;
  mutable std::atomic<std::uint64_t> hits_{0};
  mutable std::atomic<std::uint64_t> misses_{0};
};

/// Scans Fibonacci residues mod n from index 1. Guaranteed to stop within
/// 2n steps; running past that is reported as InternalBoundViolation.
inline ZValue z_bruteforce(const Nat& n, const Limits& limits = {}) {
  require(!n.is_zero(), "z: n must be >= 1");
  if (n > Nat(limits.scan_limit)) {
    fail(ErrorKind::ResourceExceeded,
         "oracle scan limit " + std::to_string(limits.scan_limit) +
             " exceeded by n=" + n.str());
  }
  const std::uint64_t m = n.to_u64();
  const std::uint64_t bound = 2 * m;
  std::uint64_t a = 1 % m;  // F_1
  std::uint64_t b = 1 % m;  // F_2
  for (std::uint64_t i = 1; i <= bound; ++i) {
    if (a == 0) return {n, Nat(i), Backend::Oracle};
    std::uint64_t c = a + b;
    if (c >= m) c -= m;
    a = b;
    b = c;
  }
  fail(ErrorKind::InternalBoundViolation,
       "no Fibonacci zero mod " + n.str() + " within 2n steps");
}

namespace detail {

// Smallest divisor d of target with F_d = 0 mod p, given F_target = 0 mod p.
// Strips prime factors while the zero persists; since the zero indices are
// exactly the multiples of z(p), this leaves z(p).
inline Nat strip_to_order(Nat target, const Nat& p, const Limits& limits) {
  for (const auto& [q, e] : factorize(target, limits.factoring).factors) {
    for (unsigned i = 0; i < e; ++i) {
      Nat candidate = target / q;
      if (!fib_mod(candidate, p).is_zero()) break;
      target = std::move(candidate);
    }
  }
  return target;
}

}  // namespace detail

/// z(p) for prime p, through the divisibility target p - (p/5).
inline ZValue z_prime(const Nat& p, const Limits& limits = {}) {
  require(is_prime(p), "z_prime: not a prime: " + p.str());
  if (p == Nat(5)) return {p, Nat(5), Backend::Fast};
  const unsigned r = static_cast<unsigned>((p % Nat(5)).to_u64());
  const Nat target = (r == 1 || r == 4) ? p - Nat(1) : p + Nat(1);
  if (!fib_mod(target, p).is_zero()) {
    return {p, z_bruteforce(p, limits).z, Backend::Oracle};
  }
  return {p, detail::strip_to_order(target, p, limits), Backend::Fast};
}

/// z(p^e). Powers of two use z(2)=3, z(4)=6 and 3 * 2^(e-2) for e >= 3;
/// odd primes lift z(p) by p^max(e - a, 0) with a = v_p(F_z(p)).
inline ZValue z_prime_power(const Nat& p, unsigned e, ZCache& cache,
                            const Limits& limits = {}) {
  require(e >= 1, "z_prime_power: exponent must be >= 1");
  const Nat n = Nat::pow(p, e);
  if (auto hit = cache.find(p, e)) return {n, *hit, Backend::Fast};
  require(is_prime(p), "z_prime_power: not a prime: " + p.str());

  Nat z;
  if (p == Nat(2)) {
    z = e == 1 ? Nat(3) : e == 2 ? Nat(6) : Nat(3) * Nat::pow(2, e - 2);
  } else {
    const Nat zp = e == 1 ? z_prime(p, limits).z
                          : z_prime_power(p, 1, cache, limits).z;
    if (e == 1) {
      z = zp;
    } else {
      const unsigned a = fib_valuation(zp, p, e);
      z = Nat::pow(p, e > a ? e - a : 0) * zp;
    }
  }
  cache.insert(p, e, z);
  return {n, std::move(z), Backend::Fast};
}

/// z(n) = lcm of z over the prime powers of n.
inline ZValue z_fast(const Nat& n, ZCache& cache, const Limits& limits = {}) {
  require(!n.is_zero(), "z: n must be >= 1");
  Nat acc = 1;
  for (const auto& [p, e] : factorize(n, limits.factoring).factors) {
    acc = lcm(acc, z_prime_power(p, e, cache, limits).z);
  }
  return {n, std::move(acc), Backend::Fast};
}

inline ZValue z(const Nat& n, Backend backend, ZCache& cache,
                const Limits& limits = {}) {
  switch (backend) {
    case Backend::Oracle:
      return z_bruteforce(n, limits);
    case Backend::Fast:
      return z_fast(n, cache, limits);
    case Backend::CrossCheck: {
      ZValue oracle = z_bruteforce(n, limits);
      ZValue fast = z_fast(n, cache, limits);
      if (oracle.z != fast.z) throw BackendMismatch(n, oracle.z, fast.z);
      return {n, std::move(fast.z), Backend::CrossCheck};
    }
  }
  fail(ErrorKind::InvalidArgument, "unknown backend");
}

}  // namespace fibz

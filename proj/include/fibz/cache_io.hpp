#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "fibz/arithmetic.hpp"
#include "fibz/error.hpp"
#include "fibz/fibonacci.hpp"
#include "fibz/rank.hpp"

namespace fibz {

// Cache file format: one `p,e,z` line per entry, decimal, sorted by (p, e).

inline void cache_store(const ZCache& cache, std::ostream& out) {
  for (const auto& entry : cache.entries()) {
    out << entry.prime << ',' << entry.exponent << ',' << entry.z << '\n';
  }
}

inline void cache_store(const ZCache& cache, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorKind::InvalidArgument, "cannot write cache file " + path);
  cache_store(cache, out);
  if (!out) fail(ErrorKind::InvalidArgument, "error writing cache file " + path);
}

/// Checks that z is the order of appearance of p^e: F_z = 0 mod p^e and
/// F_{z/q} != 0 mod p^e for every prime q | z.
inline bool cache_entry_valid(const ZCache::Entry& entry) {
  if (!is_prime(entry.prime) || entry.exponent == 0 || entry.z.is_zero()) {
    return false;
  }
  const Nat n = Nat::pow(entry.prime, entry.exponent);
  if (n == Nat(1)) return entry.z == Nat(1);
  if (!fib_mod(entry.z, n).is_zero()) return false;
  for (const auto& [q, e] : factorize(entry.z).factors) {
    if (fib_mod(entry.z / q, n).is_zero()) return false;
  }
  return true;
}

namespace detail {

inline ZCache::Entry parse_cache_line(std::string_view line, std::size_t lineno) {
  auto bad = [&](const std::string& why) {
    fail(ErrorKind::ParseError, "cache line " + std::to_string(lineno) + ": " +
                                    why + ": '" + std::string(line) + "'");
  };
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  auto c1 = line.find(',');
  auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
  if (c2 == std::string_view::npos || line.find(',', c2 + 1) != std::string_view::npos) {
    bad("expected three comma-separated fields");
  }
  try {
    Nat p = Nat::parse(line.substr(0, c1));
    Nat e = Nat::parse(line.substr(c1 + 1, c2 - c1 - 1));
    Nat z = Nat::parse(line.substr(c2 + 1));
    if (e.is_zero() || e > Nat(1u << 20)) bad("exponent out of range");
    return {std::move(p), static_cast<unsigned>(e.to_u64()), std::move(z)};
  } catch (const Error& err) {
    if (err.kind() != ErrorKind::ParseError) throw;
    if (std::string_view(err.what()).starts_with("cache line")) throw;
    bad(err.what());
  }
  return {};
}

}  // namespace detail

/// Loads entries into cache. Unless trust is set, every entry is checked
/// with cache_entry_valid and the first failure raises ValidationError.
inline void cache_load(std::istream& in, ZCache& cache, bool trust = false) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    ZCache::Entry entry = detail::parse_cache_line(line, lineno);
    if (!trust && !cache_entry_valid(entry)) {
      fail(ErrorKind::ValidationError,
           "cache line " + std::to_string(lineno) + ": entry z(" +
               entry.prime.str() + "^" + std::to_string(entry.exponent) +
               ") = " + entry.z.str() + " is not the order of appearance");
    }
    cache.insert(entry.prime, entry.exponent, entry.z);
  }
}

inline void cache_load(const std::string& path, ZCache& cache, bool trust = false) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::InvalidArgument, "cannot read cache file " + path);
  cache_load(in, cache, trust);
}

}  // namespace fibz

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fibz/arithmetic.hpp"
#include "fibz/error.hpp"
#include "fibz/nat.hpp"
#include "fibz/parallel.hpp"
#include "fibz/rank.hpp"

namespace fibz {

/// Orbit of z from `start` up to the first fixed point.
///
/// `iterates` holds z(n), z^2(n), ... and ends at the first fixed point, so
/// a fixed start has the single-element chain [start].
struct Trajectory {
  Nat start;
  std::vector<Nat> iterates;
  Nat terminal;
  unsigned order_def2 = 0;    // 0 when start is itself fixed
  unsigned order_table2 = 0;  // smallest k >= 1 with z^k(start) fixed
};

enum class OrderConvention { Def2, Table2 };

struct IterationOptions {
  Backend backend = Backend::Fast;
  std::size_t cap = 200;
  Limits limits{};
};

/// The orbit did not reach a fixed point within the iteration cap.
class CapExceeded : public Error {
 public:
  CapExceeded(Nat start, std::vector<Nat> partial, std::size_t cap)
      : Error(ErrorKind::CapExceeded,
              "no fixed point within " + std::to_string(cap) +
                  " iterations from n=" + start.str()),
        start_(std::move(start)),
        partial_(std::move(partial)) {}

  const Nat& start() const { return start_; }
  const std::vector<Nat>& partial_chain() const { return partial_; }

 private:
  Nat start_;
  std::vector<Nat> partial_;
};

inline bool is_fixed_point(const Nat& n, ZCache& cache,
                           const IterationOptions& options = {}) {
  const bool fixed = z(n, options.backend, cache, options.limits).z == n;
  if (options.backend == Backend::CrossCheck &&
      fixed != classify_fixed_point_form(n).is_fixed_form()) {
    fail(ErrorKind::BackendMismatch,
         "fixed point test and form classification disagree at n=" + n.str());
  }
  return fixed;
}

inline Trajectory trajectory(const Nat& n, ZCache& cache,
                             const IterationOptions& options = {}) {
  require(!n.is_zero(), "trajectory: n must be >= 1");
  require(options.cap >= 1, "trajectory: cap must be >= 1");
  Trajectory t;
  t.start = n;
  Nat current = n;
  Nat next = z(current, options.backend, cache, options.limits).z;
  const bool start_fixed = next == current;
  t.iterates.push_back(next);
  while (!start_fixed) {
    current = std::move(next);
    next = z(current, options.backend, cache, options.limits).z;
    if (next == current) break;
    if (t.iterates.size() >= options.cap) {
      throw CapExceeded(n, std::move(t.iterates), options.cap);
    }
    t.iterates.push_back(next);
  }
  t.terminal = t.iterates.back();
  t.order_table2 = static_cast<unsigned>(t.iterates.size());
  t.order_def2 = start_fixed ? 0 : t.order_table2;
  return t;
}

inline unsigned fixed_point_order(const Nat& n, OrderConvention convention,
                                  ZCache& cache,
                                  const IterationOptions& options = {}) {
  Trajectory t = trajectory(n, cache, options);
  return convention == OrderConvention::Def2 ? t.order_def2 : t.order_table2;
}

inline Nat terminal_fixed_point(const Nat& n, ZCache& cache,
                                const IterationOptions& options = {}) {
  return trajectory(n, cache, options).terminal;
}

/// z^k(n); z^0 is the identity. Stops early once a fixed point is hit.
inline Nat z_iterate(const Nat& n, unsigned k, ZCache& cache,
                     const IterationOptions& options = {}) {
  Nat x = n;
  for (unsigned i = 0; i < k; ++i) {
    Nat y = z(x, options.backend, cache, options.limits).z;
    if (y == x) break;
    x = std::move(y);
  }
  return x;
}

/// z^k(start) read off a computed trajectory.
inline const Nat& iterate_at(const Trajectory& t, unsigned k) {
  if (k == 0) return t.start;
  if (k <= t.iterates.size()) return t.iterates[k - 1];
  return t.terminal;
}

/// Smallest n in [1, search_limit] with order_table2 equal to k.
inline Nat smallest_n_with_order(unsigned k, const Nat& search_limit,
                                 ZCache& cache,
                                 const IterationOptions& options = {}) {
  require(k >= 1, "smallest_n_with_order: k must be >= 1");
  for (Nat n = 1; n <= search_limit; n += Nat(1)) {
    if (trajectory(n, cache, options).order_table2 == k) return n;
  }
  fail(ErrorKind::NotFound, "no n <= " + search_limit.str() +
                                " with fixed point order " + std::to_string(k));
}

/// For each k in [1, kmax], the smallest n <= limit with order_table2 = k
/// (index 0 unused). Scans in blocks so workers can share the range; the
/// answer does not depend on `jobs`.
inline std::vector<std::optional<Nat>> first_n_by_order(
    unsigned kmax, std::uint64_t limit, ZCache& cache,
    const IterationOptions& options = {}, unsigned jobs = 1) {
  std::vector<std::optional<Nat>> found(kmax + 1);
  unsigned remaining = kmax;
  constexpr std::uint64_t kBlock = 4096;
  for (std::uint64_t start = 1; start <= limit && remaining > 0; start += kBlock) {
    const std::uint64_t end = std::min(limit, start + kBlock - 1);
    std::vector<unsigned> orders(end - start + 1);
    parallel_for(orders.size(), jobs, [&](std::size_t i) {
      orders[i] = trajectory(start + i, cache, options).order_table2;
    });
    for (std::size_t i = 0; i < orders.size(); ++i) {
      const unsigned k = orders[i];
      if (k <= kmax && !found[k]) {
        found[k] = Nat(start + i);
        --remaining;
      }
    }
  }
  return found;
}

struct SweepRecord {
  Nat n;
  Nat z;
  unsigned order_table2 = 0;
  Nat terminal;
};

/// One record per n in [from, to], in ascending n regardless of `jobs`.
inline std::vector<SweepRecord> sweep(std::uint64_t from, std::uint64_t to,
                                      ZCache& cache,
                                      const IterationOptions& options = {},
                                      unsigned jobs = 1) {
  require(from >= 1, "sweep: range must start at 1 or above");
  require(from <= to, "sweep: empty range");
  std::vector<SweepRecord> out(to - from + 1);
  parallel_for(out.size(), jobs, [&](std::size_t i) {
    const Nat n = from + i;
    Trajectory t = trajectory(n, cache, options);
    out[i] = {n, t.iterates.front(), t.order_table2, t.terminal};
  });
  return out;
}

}  // namespace fibz

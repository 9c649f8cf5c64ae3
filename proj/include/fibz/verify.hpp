#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "fibz/arithmetic.hpp"
#include "fibz/dynamics.hpp"
#include "fibz/error.hpp"
#include "fibz/fibonacci.hpp"
#include "fibz/golden.hpp"
#include "fibz/nat.hpp"
#include "fibz/parallel.hpp"
#include "fibz/rank.hpp"

namespace fibz {

struct Counterexample {
  std::string input;
  std::string expected;
  std::string actual;
  friend bool operator==(const Counterexample&, const Counterexample&) = default;
};

inline constexpr std::size_t kCounterexampleCap = 20;

struct VerificationReport {
  std::string suite;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<std::string> covers;
  std::uint64_t checked = 0;
  bool passed = false;
  std::uint64_t failures = 0;  // total, including those past the cap
  std::vector<Counterexample> counterexamples;
  std::vector<std::pair<std::string, std::string>> findings;
  std::vector<std::string> notes;
};

struct VerifyContext {
  ZCache& cache;
  unsigned jobs = 1;
  Limits limits{};
  std::size_t iteration_cap = 200;

  IterationOptions fast() const { return {Backend::Fast, iteration_cap, limits}; }
};

namespace detail {

inline std::string join(const std::vector<Nat>& values) {
  std::string out;
  for (const Nat& v : values) {
    if (!out.empty()) out += ',';
    out += v.str();
  }
  return out;
}

/// Accumulates checks from any number of threads. Failures are ordered by
/// their key when the report is built, so the retained counterexamples do
/// not depend on scheduling.
class ReportBuilder {
 public:
  using Key = std::array<std::uint64_t, 3>;

  ReportBuilder(std::string suite, std::vector<std::string> covers) {
    report_.suite = std::move(suite);
    report_.covers = std::move(covers);
  }

  void param(std::string name, const auto& value) {
    std::string text;
    if constexpr (std::is_convertible_v<decltype(value), std::string>) {
      text = value;
    } else if constexpr (std::is_same_v<std::decay_t<decltype(value)>, Nat>) {
      text = value.str();
    } else {
      text = std::to_string(value);
    }
    report_.parameters.emplace_back(std::move(name), std::move(text));
  }

  /// Records one check; `describe` is only invoked on failure.
  template <class Describe>
  void expect(bool ok, Key key, Describe&& describe) {
    checked_.fetch_add(1, std::memory_order_relaxed);
    if (ok) return;
    Counterexample ce = describe();
    std::lock_guard lock(mu_);
    failures_.emplace_back(key, std::move(ce));
  }

  void expect_eq(const Nat& expected, const Nat& actual, Key key,
                 const std::string& input) {
    expect(expected == actual, key, [&] {
      return Counterexample{input, expected.str(), actual.str()};
    });
  }

  void finding(std::string name, std::string value) {
    report_.findings.emplace_back(std::move(name), std::move(value));
  }
  void note(std::string text) { report_.notes.push_back(std::move(text)); }

  VerificationReport build() {
    std::lock_guard lock(mu_);
    report_.checked = checked_.load();
    if (report_.checked == 0) {
      fail(ErrorKind::InvalidArgument,
           "suite " + report_.suite + " checked nothing: empty range");
    }
    std::sort(failures_.begin(), failures_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    report_.failures = failures_.size();
    report_.passed = failures_.empty();
    for (std::size_t i = 0; i < failures_.size() && i < kCounterexampleCap; ++i) {
      report_.counterexamples.push_back(failures_[i].second);
    }
    return report_;
  }

 private:
  VerificationReport report_;
  std::atomic<std::uint64_t> checked_{0};
  std::mutex mu_;
  std::vector<std::pair<Key, Counterexample>> failures_;
};

inline std::vector<Nat> powers_of_five_family(const Nat& bound, const Nat& factor) {
  std::vector<Nat> out;
  for (Nat v = factor; v <= bound; v *= Nat(5)) out.push_back(v);
  return out;
}

/// Trajectories for every n in [1, n_max], computed in parallel.
inline std::vector<Trajectory> trajectories_upto(std::uint64_t n_max,
                                                 const VerifyContext& ctx) {
  std::vector<Trajectory> out(n_max);
  parallel_for(n_max, ctx.jobs, [&](std::size_t i) {
    out[i] = trajectory(Nat(i + 1), ctx.cache, ctx.fast());
  });
  return out;
}

}  // namespace detail

/// z(n) = n exactly on {5^k} and {12 * 5^k}: both directions on [1, N].
inline VerificationReport verify_fixed_point_characterization(
    std::uint64_t n_max, const VerifyContext& ctx) {
  require(n_max >= 12, "fixed-points: N must be >= 12");
  detail::ReportBuilder rb("fixed-points",
                           {"z(n) = n iff n = 5^k or n = 12*5^k"});
  rb.param("N", n_max);

  std::vector<char> fixed(n_max, 0);
  parallel_for(n_max, ctx.jobs, [&](std::size_t i) {
    const Nat n = i + 1;
    const bool is_fixed = z_fast(n, ctx.cache, ctx.limits).z == n;
    const bool in_family = classify_fixed_point_form(n).is_fixed_form();
    fixed[i] = is_fixed;
    rb.expect(is_fixed == in_family, {0, i, 0}, [&] {
      return Counterexample{"n=" + n.str(),
                            in_family ? "fixed point" : "not a fixed point",
                            is_fixed ? "fixed point" : "not a fixed point"};
    });
  });

  std::vector<Nat> family = detail::powers_of_five_family(n_max, 1);
  for (Nat& v : detail::powers_of_five_family(n_max, 12)) family.push_back(v);
  std::sort(family.begin(), family.end());
  for (std::size_t i = 0; i < family.size(); ++i) {
    rb.expect_eq(family[i], z_fast(family[i], ctx.cache, ctx.limits).z,
                 {1, i, 0}, "z(" + family[i].str() + ")");
  }

  std::vector<Nat> found;
  for (std::uint64_t i = 0; i < n_max; ++i) {
    if (fixed[i]) found.emplace_back(i + 1);
  }
  rb.finding("fixed_points", detail::join(found));
  rb.finding("count", std::to_string(found.size()));
  return rb.build();
}

/// z(n) <= 2n on [1, N], with equality exactly on {6 * 5^k}.
inline VerificationReport verify_z_upper_bound(std::uint64_t n_max,
                                               const VerifyContext& ctx) {
  require(n_max >= 1, "upper-bound: N must be >= 1");
  detail::ReportBuilder rb("upper-bound",
                           {"z(n) <= 2n, with equality iff n = 6*5^k"});
  rb.param("N", n_max);

  std::vector<char> equal(n_max, 0);
  parallel_for(n_max, ctx.jobs, [&](std::size_t i) {
    const std::uint64_t n = i + 1;
    const Nat zn = z_fast(n, ctx.cache, ctx.limits).z;
    const Nat twice = Nat(2 * n);
    rb.expect(zn <= twice, {0, i, 0}, [&] {
      return Counterexample{"n=" + std::to_string(n), "z(n) <= " + twice.str(),
                            "z(n) = " + zn.str()};
    });
    const bool is_equal = zn == twice;
    equal[i] = is_equal;
    const bool six_family = n % 6 == 0 &&
                            classify_fixed_point_form(n / 6).tag ==
                                FixedPointForm::Tag::PowerOfFive;
    rb.expect(is_equal == six_family, {1, i, 0}, [&] {
      return Counterexample{"n=" + std::to_string(n),
                            six_family ? "z(n) = 2n" : "z(n) < 2n",
                            "z(n) = " + zn.str()};
    });
  });

  std::vector<Nat> eq;
  for (std::uint64_t i = 0; i < n_max; ++i) {
    if (equal[i]) eq.emplace_back(i + 1);
  }
  rb.finding("equality_set", detail::join(eq));
  return rb.build();
}

/// Factorization backend against the scanning oracle on [1, N].
inline VerificationReport verify_oracle_equivalence(std::uint64_t n_max,
                                                    const VerifyContext& ctx) {
  require(n_max >= 1, "oracle-equivalence: N must be >= 1");
  detail::ReportBuilder rb("oracle-equivalence",
                           {"z(n) = lcm of z(p^e) over the prime powers of n"});
  rb.param("N", n_max);
  parallel_for(n_max, ctx.jobs, [&](std::size_t i) {
    const Nat n = i + 1;
    rb.expect_eq(z_bruteforce(n, ctx.limits).z, z_fast(n, ctx.cache, ctx.limits).z,
                 {0, i, 0}, "n=" + n.str());
  });
  return rb.build();
}

namespace detail {

inline std::vector<std::uint64_t> primes_below(std::uint64_t bound) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p < bound; ++p) {
    if (is_prime(p)) out.push_back(p);
  }
  return out;
}

}  // namespace detail

/// z(p) <= p + 1 for primes p < P.
inline VerificationReport verify_prime_bound(std::uint64_t p_max,
                                             const VerifyContext& ctx) {
  detail::ReportBuilder rb("prime-bound", {"z(p) <= p + 1 for every prime p"});
  rb.param("P", p_max);
  const auto primes = detail::primes_below(p_max);
  parallel_for(primes.size(), ctx.jobs, [&](std::size_t i) {
    const std::uint64_t p = primes[i];
    const Nat zp = z_fast(p, ctx.cache, ctx.limits).z;
    rb.expect(zp <= Nat(p + 1), {0, i, 0}, [&] {
      return Counterexample{"p=" + std::to_string(p),
                            "z(p) <= " + std::to_string(p + 1), zp.str()};
    });
  });
  return rb.build();
}

/// gcd(p, z(p)) = 1 for primes p < P other than 5.
inline VerificationReport verify_prime_coprimality(std::uint64_t p_max,
                                                   const VerifyContext& ctx) {
  detail::ReportBuilder rb("prime-coprime", {"gcd(p, z(p)) = 1 for primes p != 5"});
  rb.param("P", p_max);
  const auto primes = detail::primes_below(p_max);
  parallel_for(primes.size(), ctx.jobs, [&](std::size_t i) {
    const std::uint64_t p = primes[i];
    if (p == 5) return;
    const Nat zp = z_fast(p, ctx.cache, ctx.limits).z;
    rb.expect_eq(Nat(1), gcd(p, zp), {0, i, 0},
                 "gcd(" + std::to_string(p) + ", z(p)=" + zp.str() + ")");
  });
  return rb.build();
}

/// Every index j <= 4n with n | F_j is a multiple of z(n), for n in [2, N].
inline VerificationReport verify_divisibility(std::uint64_t n_max,
                                              const VerifyContext& ctx) {
  require(n_max >= 2, "divisibility: N must be >= 2");
  detail::ReportBuilder rb("divisibility", {"n | F_m implies z(n) | m"});
  rb.param("N", n_max);
  parallel_for(n_max - 1, ctx.jobs, [&](std::size_t i) {
    const std::uint64_t n = i + 2;
    const std::uint64_t zn = z_fast(n, ctx.cache, ctx.limits).z.to_u64();
    std::uint64_t a = 1 % n, b = 1 % n;  // F_1, F_2
    for (std::uint64_t j = 1; j <= 4 * n; ++j) {
      if (a == 0) {
        rb.expect(j % zn == 0, {0, i, j}, [&] {
          return Counterexample{"n=" + std::to_string(n) + " j=" + std::to_string(j),
                                "z(n) | j", "z(n) = " + std::to_string(zn)};
        });
      }
      std::uint64_t c = a + b;
      if (c >= n) c -= n;
      a = b;
      b = c;
    }
  });
  return rb.build();
}

/// Prime-power lifting against the scanning oracle for p^e <= L, p < P;
/// the exponent a is read from exact Fibonacci numbers where feasible. Also
/// checks the closed form z(3^b) = 4 * 3^(b-1) for b <= B.
inline VerificationReport verify_prime_power_lifting(std::uint64_t p_max,
                                                     std::uint64_t power_limit,
                                                     unsigned b_max,
                                                     const VerifyContext& ctx) {
  require(power_limit <= ctx.limits.scan_limit,
          "prime-power-lifting: L exceeds the oracle scan limit");
  detail::ReportBuilder rb("prime-power-lifting",
                           {"z(p^e) = p^max(e-a,0) z(p), a = v_p(F_z(p)) >= 1",
                            "z(3^b) = 4*3^(b-1)"});
  rb.param("P", p_max);
  rb.param("L", power_limit);
  rb.param("B", b_max);

  const auto primes = detail::primes_below(p_max);
  parallel_for(primes.size(), ctx.jobs, [&](std::size_t i) {
    const std::uint64_t p = primes[i];
    const Nat zp = z_bruteforce(p, ctx.limits).z;
    std::optional<unsigned> a;
    if (p != 2 && zp <= Nat(kFibExactCap)) {
      a = p_adic_valuation(fib_exact(zp.to_u64()), p);
      rb.expect(*a >= 1, {0, i, 0}, [&] {
        return Counterexample{"p=" + std::to_string(p), "v_p(F_z(p)) >= 1",
                              std::to_string(*a)};
      });
    }
    std::uint64_t q = p;
    for (unsigned e = 1; q <= power_limit; ++e) {
      const Nat truth = z_bruteforce(q, ctx.limits).z;
      const std::string input = "z(" + std::to_string(p) + "^" + std::to_string(e) + ")";
      rb.expect_eq(truth, z_prime_power(p, e, ctx.cache, ctx.limits).z, {1, i, e}, input);
      if (a) {
        const Nat lifted = Nat::pow(p, e > *a ? e - *a : 0) * zp;
        rb.expect_eq(truth, lifted, {2, i, e}, input + " via lifting");
      }
      if (q > power_limit / p) break;
      q *= p;
    }
  });

  for (unsigned b = 1; b <= b_max; ++b) {
    rb.expect_eq(Nat(4) * Nat::pow(3, b - 1),
                 z_fast(Nat::pow(3, b), ctx.cache, ctx.limits).z, {3, b, 0},
                 "z(3^" + std::to_string(b) + ")");
  }
  return rb.build();
}

/// Powers of two: closed form of z(2^a) for a in [3, A], iterate formula
/// and exact step count to 12 for a in [4, A_iter].
inline VerificationReport verify_power2_formulas(unsigned a_max, unsigned a_iter_max,
                                                 const VerifyContext& ctx) {
  require(a_max >= 4 && a_iter_max >= 4, "power-of-two: A must be >= 4");
  detail::ReportBuilder rb(
      "power-of-two",
      {"z(2^a) = 3*2^(a-2) for a >= 3",
       "z^k(2^a) = lcm(3*2^(a-2k), 4) for k >= 2, a >= 4",
       "2^a reaches 12, in exactly ceil(a/2) - 1 steps for a >= 4"});
  rb.param("A", a_max);
  rb.param("A_iter", a_iter_max);
  const auto opts = ctx.fast();

  for (unsigned a = 3; a <= a_max; ++a) {
    rb.expect_eq(Nat(3) * Nat::pow(2, a - 2),
                 z_fast(Nat::pow(2, a), ctx.cache, ctx.limits).z, {0, a, 0},
                 "z(2^" + std::to_string(a) + ")");
  }

  const std::array<std::pair<unsigned, unsigned>, 4> base = {
      {{1, 4}, {2, 2}, {3, 2}, {4, 1}}};
  for (auto [a, k] : base) {
    rb.expect_eq(Nat(12), z_iterate(Nat::pow(2, a), k, ctx.cache, opts), {1, a, k},
                 "z^" + std::to_string(k) + "(2^" + std::to_string(a) + ")");
  }

  for (unsigned a = 1; a <= a_iter_max; ++a) {
    const Trajectory t = trajectory(Nat::pow(2, a), ctx.cache, opts);
    const std::string label = "2^" + std::to_string(a);
    rb.expect_eq(Nat(12), t.terminal, {2, a, 0}, "terminal of " + label);
    if (a < 4) continue;
    const unsigned steps = (a + 1) / 2 - 1;
    rb.expect_eq(Nat(steps), Nat(t.order_table2), {3, a, 0}, "order of " + label);
    for (unsigned k = 2; k <= a; ++k) {
      const unsigned e = a >= 2 * k ? a - 2 * k : 0;
      const Nat closed = lcm(Nat(3) * Nat::pow(2, e), 4);
      rb.expect_eq(closed, iterate_at(t, k), {4, a, k},
                   "z^" + std::to_string(k) + "(" + label + ")");
    }
  }
  rb.note("z^k(2^a) with a - 2k < 0 is compared against 12, the value the "
          "closed form takes for every a - 2k <= 2");
  return rb.build();
}

/// z^k(10^m) = 3 * 5^m * 2^(m-2k) for m in [4, M], 1 <= k <= K, 2k+2 <= m.
inline VerificationReport verify_power10_lemma(unsigned k_max, unsigned m_max,
                                               const VerifyContext& ctx) {
  require(m_max >= 4, "power-of-ten: M must be >= 4");
  detail::ReportBuilder rb("power-of-ten",
                           {"z^k(10^m) = 3*5^m*2^(m-2k) for m >= 4, 2k+2 <= m"});
  rb.param("K", k_max);
  rb.param("M", m_max);
  for (unsigned m = 4; m <= m_max; ++m) {
    const Nat start = Nat::pow(10, m);
    const Trajectory t = trajectory(start, ctx.cache, ctx.fast());
    const std::string label = "10^" + std::to_string(m);
    rb.expect_eq(start, iterate_at(t, 0), {m, 0, 0}, "z^0(" + label + ")");
    for (unsigned k = 1; k <= k_max && 2 * k + 2 <= m; ++k) {
      const Nat closed = Nat(3) * Nat::pow(5, m) * Nat::pow(2, m - 2 * k);
      rb.expect_eq(closed, iterate_at(t, k), {m, k, 0},
                   "z^" + std::to_string(k) + "(" + label + ")");
    }
  }
  rb.note("k = 0 is checked as the identity z^0(10^m) = 10^m; the closed "
          "form would give 3*10^m there and only holds from k = 1");
  return rb.build();
}

/// 5^r * 10^(2k+2) takes exactly k steps, for k in [1, K], r in [0, R].
inline VerificationReport verify_theorem1_family(unsigned k_max, unsigned r_max,
                                                 const VerifyContext& ctx) {
  require(k_max >= 1, "order-k-family: K must be >= 1");
  detail::ReportBuilder rb(
      "order-k-family",
      {"infinitely many n have fixed point order k (witness family 5^r*10^(2k+2))"});
  rb.param("K", k_max);
  rb.param("R", r_max);
  for (unsigned k = 1; k <= k_max; ++k) {
    for (unsigned r = 0; r <= r_max; ++r) {
      const Nat n = Nat::pow(5, r) * Nat::pow(10, 2 * k + 2);
      const Trajectory t = trajectory(n, ctx.cache, ctx.fast());
      rb.expect_eq(Nat(k), Nat(t.order_table2), {k, r, 0},
                   "order(5^" + std::to_string(r) + "*10^" +
                       std::to_string(2 * k + 2) + ")");
    }
  }
  return rb.build();
}

/// The 5-free part of z^i(5^a * n) does not depend on a.
inline VerificationReport verify_coefficient_stability(
    const std::vector<Nat>& samples, unsigned a_max, unsigned i_max,
    const VerifyContext& ctx) {
  require(!samples.empty(), "five-free-part: no sample values");
  require(i_max >= 1, "five-free-part: I must be >= 1");
  detail::ReportBuilder rb("five-free-part",
                           {"5-free part of z^i(5^a n) is independent of a"});
  rb.param("samples", std::to_string(samples.size()));
  rb.param("A", a_max);
  rb.param("I", i_max);

  auto five_free = [](Nat x) {
    return x / Nat::pow(5, p_adic_valuation(x, 5));
  };
  parallel_for(samples.size(), ctx.jobs, [&](std::size_t s) {
    const Nat& n = samples[s];
    require(!n.is_zero(), "five-free-part: samples must be >= 1");
    std::vector<Trajectory> by_a;
    for (unsigned a = 0; a <= a_max; ++a) {
      by_a.push_back(trajectory(Nat::pow(5, a) * n, ctx.cache, ctx.fast()));
    }
    for (unsigned i = 1; i <= i_max; ++i) {
      const Nat reference = five_free(iterate_at(by_a[0], i));
      for (unsigned a = 1; a <= a_max; ++a) {
        rb.expect_eq(reference, five_free(iterate_at(by_a[a], i)), {s, i, a},
                     "5-free part of z^" + std::to_string(i) + "(5^" +
                         std::to_string(a) + "*" + n.str() + ")");
      }
    }
  });
  rb.note("checks the stated stability of the 5-free part, not the final "
          "displayed line of its derivation (which uses an unbound exponent)");
  return rb.build();
}

/// 2^a * 5^b terminates at 12 * 5^b; z^2(4*5^b) and z^4(2*5^b) equal 12*5^b.
inline VerificationReport verify_theorem2_family(unsigned a_max, unsigned b_max,
                                                 const VerifyContext& ctx) {
  require(a_max >= 1, "twelve-family: A must be >= 1");
  detail::ReportBuilder rb("twelve-family",
                           {"2^a*5^b iterates to 12*5^b",
                            "z^2(4*5^b) = 12*5^b", "z^4(2*5^b) = 12*5^b"});
  rb.param("A", a_max);
  rb.param("B", b_max);
  const auto opts = ctx.fast();
  for (unsigned b = 0; b <= b_max; ++b) {
    const Nat target = Nat(12) * Nat::pow(5, b);
    const Nat five_b = Nat::pow(5, b);
    for (unsigned a = 1; a <= a_max; ++a) {
      rb.expect_eq(target,
                   terminal_fixed_point(Nat::pow(2, a) * five_b, ctx.cache, opts),
                   {0, a, b},
                   "terminal(2^" + std::to_string(a) + "*5^" + std::to_string(b) + ")");
    }
    rb.expect_eq(target, z_iterate(Nat(4) * five_b, 2, ctx.cache, opts), {1, b, 0},
                 "z^2(4*5^" + std::to_string(b) + ")");
    rb.expect_eq(target, z_iterate(Nat(2) * five_b, 4, ctx.cache, opts), {2, b, 0},
                 "z^4(2*5^" + std::to_string(b) + ")");
  }
  rb.note("z^4(2*5^b) is checked against 12*5^b; a bare 12 holds only at b = 0");
  return rb.build();
}

inline constexpr std::uint64_t kLcmPairSeed = 20240521;

/// z^k(ab) = lcm(z^k(a), z^k(b)) for coprime a, b > 1 with ab <= N and
/// k <= K, plus z(lcm(m1, m2, m3)) = lcm(z(m1), z(m2), z(m3)) on random
/// triples drawn from [1, N] with a fixed seed.
inline VerificationReport verify_lcm_multiplicativity(std::uint64_t n_max,
                                                      unsigned k_max,
                                                      std::uint64_t samples,
                                                      const VerifyContext& ctx) {
  require(n_max >= 6, "coprime-split: N must be >= 6");
  detail::ReportBuilder rb(
      "coprime-split",
      {"z^k(ab) = lcm(z^k(a), z^k(b)) for coprime a, b",
       "z(lcm(m_1, ..., m_r)) = lcm(z(m_1), ..., z(m_r))"});
  rb.param("N", n_max);
  rb.param("K", k_max);
  rb.param("samples", samples);
  rb.param("seed", kLcmPairSeed);

  const auto traj = detail::trajectories_upto(n_max, ctx);
  auto zk = [&](std::uint64_t n, unsigned k) -> const Nat& {
    return iterate_at(traj[n - 1], k);
  };

  parallel_for(n_max, ctx.jobs, [&](std::size_t i) {
    const std::uint64_t n = i + 1;
    for (std::uint64_t a = 2; a * a < n; ++a) {
      if (n % a != 0) continue;
      const std::uint64_t b = n / a;
      if (std::gcd(a, b) != 1) continue;
      for (unsigned k = 1; k <= k_max; ++k) {
        rb.expect_eq(lcm(zk(a, k), zk(b, k)), zk(n, k), {n, a, k},
                     "z^" + std::to_string(k) + "(" + std::to_string(a) + "*" +
                         std::to_string(b) + ")");
      }
    }
  });

  std::mt19937_64 rng(kLcmPairSeed);
  for (std::uint64_t s = 0; s < samples; ++s) {
    std::array<std::uint64_t, 3> m{};
    for (auto& v : m) v = 1 + rng() % n_max;
    const Nat l = lcm_many({Nat(m[0]), Nat(m[1]), Nat(m[2])});
    const Nat lhs = z_fast(l, ctx.cache, ctx.limits).z;
    const Nat rhs = lcm_many({zk(m[0], 1), zk(m[1], 1), zk(m[2], 1)});
    rb.expect_eq(rhs, lhs, {n_max + 1, s, 0},
                 "z(lcm(" + std::to_string(m[0]) + "," + std::to_string(m[1]) +
                     "," + std::to_string(m[2]) + "))");
  }
  return rb.build();
}

/// Every n <= N reaches a fixed point within the iteration cap. Alongside,
/// the terminal must have fixed-point form, and the step-count bounds used
/// to argue termination (coprime split, primes, prime powers) must hold.
inline VerificationReport verify_termination(std::uint64_t n_max,
                                             const VerifyContext& ctx) {
  require(n_max >= 1, "termination: N must be >= 1");
  detail::ReportBuilder rb(
      "termination",
      {"every positive integer has finite fixed point order",
       "terminal fixed points have the form 5^k or 12*5^k"});
  rb.param("N", n_max);
  rb.param("cap", ctx.iteration_cap);

  std::vector<std::optional<Trajectory>> traj(n_max);
  parallel_for(n_max, ctx.jobs, [&](std::size_t i) {
    const Nat n = i + 1;
    try {
      traj[i] = trajectory(n, ctx.cache, ctx.fast());
      rb.expect(true, {0, i, 0}, [] { return Counterexample{}; });
    } catch (const CapExceeded& e) {
      rb.expect(false, {0, i, 0}, [&] {
        return Counterexample{"n=" + n.str(),
                              "fixed point within " + std::to_string(ctx.iteration_cap),
                              "partial chain " + detail::join(e.partial_chain())};
      });
    }
  });

  auto order = [&](std::uint64_t n) -> std::optional<unsigned> {
    if (n == 0 || n > n_max || !traj[n - 1]) return std::nullopt;
    return traj[n - 1]->order_def2;
  };

  unsigned max_order = 0;
  std::uint64_t argmax = 1;
  for (std::uint64_t i = 0; i < n_max; ++i) {
    if (!traj[i]) continue;
    const Trajectory& t = *traj[i];
    if (t.order_table2 > max_order) {
      max_order = t.order_table2;
      argmax = i + 1;
    }
    rb.expect(classify_fixed_point_form(t.terminal).is_fixed_form(), {1, i, 0}, [&] {
      return Counterexample{"n=" + std::to_string(i + 1), "terminal 5^k or 12*5^k",
                            t.terminal.str()};
    });
  }

  parallel_for(n_max, ctx.jobs, [&](std::size_t i) {
    const std::uint64_t n = i + 1;
    const auto on = order(n);
    if (!on || n == 1) return;
    const Factorization f = factorize(n);
    if (f.factors.size() >= 2) {
      // Coprime split: order(ab) <= max(order(a), order(b)).
      const std::uint64_t a = Nat::pow(f.factors[0].prime, f.factors[0].exponent).to_u64();
      const auto oa = order(a), ob = order(n / a);
      if (oa && ob) {
        rb.expect(*on <= std::max(*oa, *ob), {2, i, 0}, [&] {
          return Counterexample{"n=" + std::to_string(n),
                                "order <= " + std::to_string(std::max(*oa, *ob)),
                                std::to_string(*on)};
        });
      }
      return;
    }
    const std::uint64_t p = f.factors[0].prime.to_u64();
    const unsigned e = f.factors[0].exponent;
    if (!traj[p - 1]) return;
    const Nat zp = traj[p - 1]->iterates.front();
    if (e == 1) {
      // z(p) is either below p, equal to p (p = 5) or p + 1.
      rb.expect(zp < Nat(p) || zp == Nat(p + 1) || (p == 5 && zp == Nat(5)),
                {3, i, 0}, [&] {
                  return Counterexample{"p=" + std::to_string(p),
                                        "z(p) < p or z(p) = p + 1", zp.str()};
                });
      return;
    }
    // Prime power: z(p^e) = p^r z(p) with r < e, and the order is at most
    // one more than the larger of order(z(p)) and order(p^r).
    const Nat zpe = traj[i]->iterates.front();
    const Nat ratio = zpe / zp;
    const unsigned r = p_adic_valuation(ratio, p);
    const bool shape = (zpe % zp).is_zero() && ratio == Nat::pow(p, r) && r < e;
    rb.expect(shape, {4, i, 0}, [&] {
      return Counterexample{"n=" + std::to_string(n), "z(p^e) = p^r z(p), r < e",
                            zpe.str()};
    });
    if (!shape || !zp.fits_u64()) return;
    const auto ozp = order(zp.to_u64());
    const auto opr = order(Nat::pow(p, r).to_u64());
    if (ozp && opr) {
      rb.expect(*on <= std::max(*ozp, *opr) + 1, {5, i, 0}, [&] {
        return Counterexample{"n=" + std::to_string(n),
                              "order <= " + std::to_string(std::max(*ozp, *opr) + 1),
                              std::to_string(*on)};
      });
    }
  });

  rb.finding("max_order", std::to_string(max_order));
  rb.finding("max_order_n", std::to_string(argmax));
  return rb.build();
}

/// Orbits of n = 1..12 against the embedded published table, cell by cell.
inline VerificationReport reproduce_table1(const VerifyContext& ctx) {
  detail::ReportBuilder rb("table1", {"published orbit table for n <= 12"});
  for (const auto& row : golden::orbit_table()) {
    const Trajectory t = trajectory(row.n, ctx.cache, ctx.fast());
    const std::string label = "row " + std::to_string(row.n);
    std::vector<Nat> expected(row.chain.begin(), row.chain.end());
    rb.expect(t.iterates == expected, {row.n, 0, 0}, [&] {
      return Counterexample{label, detail::join(expected), detail::join(t.iterates)};
    });
    for (std::size_t c = 0; c < t.iterates.size() && c < row.bold.size(); ++c) {
      const Nat& cell = t.iterates[c];
      const bool fixed = z_fast(cell, ctx.cache, ctx.limits).z == cell;
      rb.expect(fixed == row.bold[c], {row.n, c + 1, 0}, [&] {
        return Counterexample{label + " column " + std::to_string(c + 1),
                              row.bold[c] ? "bold" : "plain",
                              fixed ? "fixed point" : "not fixed"};
      });
    }
  }
  rb.note("row 5 is printed without bold markup in the published table; its "
          "entry 5 is a fixed point and is compared as bold");
  return rb.build();
}

/// First n of each order k <= kmax against the embedded published table.
inline VerificationReport reproduce_table2(unsigned k_max, std::uint64_t search_limit,
                                           const VerifyContext& ctx) {
  require(k_max >= 1 && k_max <= golden::kFirstOrderTable.size(),
          "table2: kmax must be in [1, 10]");
  detail::ReportBuilder rb("table2",
                           {"first n taking k iterations, k <= 10, and its fixed point"});
  rb.param("kmax", k_max);
  rb.param("limit", search_limit);
  const auto found = first_n_by_order(k_max, search_limit, ctx.cache, ctx.fast(), ctx.jobs);
  std::string rows;
  for (unsigned k = 1; k <= k_max; ++k) {
    const auto& golden_row = golden::kFirstOrderTable[k - 1];
    if (!found[k]) {
      fail(ErrorKind::NotFound, "table2: no n <= " + std::to_string(search_limit) +
                                    " with order " + std::to_string(k));
    }
    const Nat& n = *found[k];
    const Nat fp = terminal_fixed_point(n, ctx.cache, ctx.fast());
    rb.expect_eq(Nat(golden_row.n), n, {k, 0, 0}, "first n with k=" + std::to_string(k));
    rb.expect_eq(Nat(golden_row.fixed_point), fp, {k, 1, 0},
                 "fixed point for k=" + std::to_string(k));
    if (!rows.empty()) rows += ' ';
    rows += "(" + n.str() + "," + fp.str() + ")";
  }
  rb.finding("rows", rows);
  return rb.build();
}

// ---------------------------------------------------------------------------
// Suite registry: named suites with string parameters, as used by the CLI.

using SuiteParams = std::map<std::string, std::string>;

namespace detail {

/// Typed reads of suite parameters; unknown names are a usage error.
class ParamReader {
 public:
  explicit ParamReader(const SuiteParams& params) : params_(params) {}

  std::uint64_t u64(const std::string& name, std::uint64_t fallback) {
    used_.push_back(name);
    auto it = params_.find(name);
    if (it == params_.end()) return fallback;
    Nat v = Nat::parse(it->second);
    require(v.fits_u64(), "parameter " + name + " out of range");
    return v.to_u64();
  }
  unsigned u32(const std::string& name, unsigned fallback) {
    std::uint64_t v = u64(name, fallback);
    require(v <= 1'000'000, "parameter " + name + " out of range");
    return static_cast<unsigned>(v);
  }

  void finish(const std::string& suite) const {
    for (const auto& [name, value] : params_) {
      if (std::find(used_.begin(), used_.end(), name) == used_.end()) {
        fail(ErrorKind::InvalidArgument,
             "suite " + suite + " has no parameter '" + name + "'");
      }
    }
  }

 private:
  const SuiteParams& params_;
  std::vector<std::string> used_;
};

}  // namespace detail

struct SuiteInfo {
  std::string name;
  std::string summary;
  std::function<VerificationReport(const SuiteParams&, const VerifyContext&)> run;
};

inline const std::vector<SuiteInfo>& suites() {
  using detail::ParamReader;
  static const std::vector<SuiteInfo> all = {
      {"table1", "orbit table for n <= 12",
       [](const SuiteParams& p, const VerifyContext& ctx) {
         ParamReader r(p);
         r.finish("table1");
         return reproduce_table1(ctx);
       }},
      {"table2", "first n of each fixed point order (kmax, limit)",
       [](const SuiteParams& p, const VerifyContext& ctx) {
         ParamReader r(p);
         auto kmax = r.u32("kmax", 10);
         auto limit = r.u64("limit", 100000);
         r.finish("table2");
         return reproduce_table2(kmax, limit, ctx);
       }},
      {"fixed-points", "fixed points are 5^k and 12*5^k (N)",
       [](const SuiteParams& p, const VerifyContext& ctx) {
         ParamReader r(p);
         auto n = r.u64("N", 1000000);
         r.finish("fixed-points");
         return verify_fixed_point_characterization(n, ctx);
       }},
      {"upper-bound", "z(n) <= 2n and its equality set (N)",
       [](const SuiteParams& p, const VerifyContext& ctx) {
         ParamReader r(p);
         auto n = r.u64("N", 100000);
         r.finish("upper-bound");
         return verify_z_upper_bound(n, ctx);
       }},
      {"oracle-equivalence", "fast backend equals the scanning oracle (N)",
       [](const SuiteParams& p, const VerifyContext& ctx) {
         ParamReader r(p);
         auto n = r.u64("N", 20000);
         r.finish("oracle-equivalence");
         return verify_oracle_equivalence(n, ctx);
       }},
      {"prime-bound", "z(p) <= p + 1 (P)",
       [](const SuiteParams& p, const VerifyContext& ctx) {
         ParamReader r(p);
         auto bound = r.u64("P", 10000);
         r.finish("prime-bound");
         return verify_prime_bound(bound, ctx);
       }},
      {"prime-coprime", "gcd(p, z(p)) = 1 for p != 5 (P)",
       [](const SuiteParams& p, const VerifyContext& ctx) {
         ParamReader r(p);
         auto bound = r.u64("P", 10000);
         r.finish("prime-coprime");
         return verify_prime_coprimality(bound, ctx);
       }},
      {"divisibility", "n | F_m implies z(n) | m (N)",
       [](const SuiteParams& p, const VerifyContext& ctx) {
         ParamReader r(p);
         auto n = r.u64("N", 2000);
         r.finish("divisibility");
         return verify_divisibility(n, ctx);
       }},
      {"prime-power-lifting", "z(p^e) from z(p) (P, L, B)",
       [](const SuiteParams& p, const VerifyContext& ctx) {
         ParamReader r(p);
         auto bound = r.u64("P", 1000);
         auto limit = r.u64("L", 1000000);
         auto b = r.u32("B", 40);
         r.finish("prime-power-lifting");
         return verify_prime_power_lifting(bound, limit, b, ctx);
       }},
      {"power-of-two", "z on powers of two (A, A_iter)",
       [](const SuiteParams& p, const VerifyContext& ctx) {
         ParamReader r(p);
         auto a = r.u32("A", 60);
         auto a_iter = r.u32("A_iter", 40);
         r.finish("power-of-two");
         return verify_power2_formulas(a, a_iter, ctx);
       }},
      {"power-of-ten", "z^k on powers of ten (K, M)",
       [](const SuiteParams& p, const VerifyContext& ctx) {
         ParamReader r(p);
         auto k = r.u32("K", 11);
         auto m = r.u32("M", 24);
         r.finish("power-of-ten");
         return verify_power10_lemma(k, m, ctx);
       }},
      {"order-k-family", "5^r*10^(2k+2) has order k (K, R)",
       [](const SuiteParams& p, const VerifyContext& ctx) {
         ParamReader r(p);
         auto k = r.u32("K", 6);
         auto rr = r.u32("R", 4);
         r.finish("order-k-family");
         return verify_theorem1_family(k, rr, ctx);
       }},
      {"five-free-part", "5-free part of z^i(5^a n) ignores a (nmax, A, I)",
       [](const SuiteParams& p, const VerifyContext& ctx) {
         ParamReader r(p);
         auto nmax = r.u64("nmax", 300);
         auto a = r.u32("A", 5);
         auto i = r.u32("I", 8);
         r.finish("five-free-part");
         std::vector<Nat> samples;
         for (std::uint64_t n = 1; n <= nmax; ++n) samples.emplace_back(n);
         return verify_coefficient_stability(samples, a, i, ctx);
       }},
      {"twelve-family", "2^a*5^b ends at 12*5^b (A, B)",
       [](const SuiteParams& p, const VerifyContext& ctx) {
         ParamReader r(p);
         auto a = r.u32("A", 20);
         auto b = r.u32("B", 6);
         r.finish("twelve-family");
         return verify_theorem2_family(a, b, ctx);
       }},
      {"coprime-split", "z^k over coprime splits and lcm law (N, K, samples)",
       [](const SuiteParams& p, const VerifyContext& ctx) {
         ParamReader r(p);
         auto n = r.u64("N", 5000);
         auto k = r.u32("K", 10);
         auto samples = r.u64("samples", 10000);
         r.finish("coprime-split");
         return verify_lcm_multiplicativity(n, k, samples, ctx);
       }},
      {"termination", "every n reaches a fixed point within the cap (N)",
       [](const SuiteParams& p, const VerifyContext& ctx) {
         ParamReader r(p);
         auto n = r.u64("N", 100000);
         r.finish("termination");
         return verify_termination(n, ctx);
       }},
  };
  return all;
}

inline const SuiteInfo* find_suite(const std::string& name) {
  for (const auto& s : suites()) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

}  // namespace fibz

#pragma once

#include <compare>
#include <concepts>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>

#include <boost/multiprecision/cpp_int.hpp>

#include "fibz/error.hpp"

namespace fibz {

using BigInt = boost::multiprecision::cpp_int;

/// Arbitrary-precision non-negative integer.
///
/// Thin value wrapper over cpp_int that keeps the sign invariant: any
/// operation whose exact result would be negative throws InvalidArgument.
/// Decimal strings are the only serialized form.
class Nat {
 public:
  Nat() = default;
  template <std::integral T>
  Nat(T v) : v_(v) {  // NOLINT(google-explicit-constructor)
    if constexpr (std::is_signed_v<T>) require(v >= 0, "Nat: negative value");
  }
  explicit Nat(BigInt v) : v_(std::move(v)) {
    require(v_ >= 0, "Nat: negative value");
  }

  /// Parses a plain decimal string: digits only, no sign, no whitespace.
  static Nat parse(std::string_view text) {
    if (text.empty()) fail(ErrorKind::ParseError, "empty number");
    for (char c : text) {
      if (c < '0' || c > '9') {
        fail(ErrorKind::ParseError,
             "not a decimal natural number: '" + std::string(text) + "'");
      }
    }
    BigInt v;
    for (char c : text) {
      v *= 10;
      v += static_cast<unsigned>(c - '0');
    }
    return Nat(std::move(v));
  }

  static Nat pow(const Nat& base, unsigned exponent) {
    return Nat(boost::multiprecision::pow(base.v_, exponent));
  }

  std::string str() const { return v_.str(); }

  const BigInt& big() const { return v_; }

  bool is_zero() const { return v_.is_zero(); }
  bool fits_u64() const {
    return v_ <= std::numeric_limits<std::uint64_t>::max();
  }
  std::uint64_t to_u64() const {
    require(fits_u64(), "Nat does not fit in 64 bits: " + str());
    return static_cast<std::uint64_t>(v_);
  }
  std::optional<std::uint64_t> as_u64() const {
    if (!fits_u64()) return std::nullopt;
    return static_cast<std::uint64_t>(v_);
  }

  /// Number of significant bits; 0 for zero.
  std::size_t bit_length() const {
    return v_.is_zero() ? 0 : boost::multiprecision::msb(v_) + 1;
  }
  bool bit(std::size_t i) const { return boost::multiprecision::bit_test(v_, i); }

  bool is_even() const { return !bit(0); }

  Nat& operator+=(const Nat& o) { v_ += o.v_; return *this; }
  Nat& operator-=(const Nat& o) {
    require(v_ >= o.v_, "Nat subtraction underflow");
    v_ -= o.v_;
    return *this;
  }
  Nat& operator*=(const Nat& o) { v_ *= o.v_; return *this; }
  Nat& operator/=(const Nat& o) {
    require(!o.is_zero(), "division by zero");
    v_ /= o.v_;
    return *this;
  }
  Nat& operator%=(const Nat& o) {
    require(!o.is_zero(), "modulo by zero");
    v_ %= o.v_;
    return *this;
  }

  friend Nat operator+(Nat a, const Nat& b) { return a += b; }
  friend Nat operator-(Nat a, const Nat& b) { return a -= b; }
  friend Nat operator*(Nat a, const Nat& b) { return a *= b; }
  friend Nat operator/(Nat a, const Nat& b) { return a /= b; }
  friend Nat operator%(Nat a, const Nat& b) { return a %= b; }

  friend bool operator==(const Nat& a, const Nat& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Nat& a, const Nat& b) {
    int c = a.v_.compare(b.v_);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Nat& n) {
    return os << n.v_;
  }

 private:
  BigInt v_;
};

}  // namespace fibz

template <>
struct std::hash<fibz::Nat> {
  std::size_t operator()(const fibz::Nat& n) const noexcept {
    return boost::multiprecision::hash_value(n.big());
  }
};

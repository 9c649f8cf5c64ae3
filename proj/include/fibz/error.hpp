#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fibz {

/// Failure categories. Each maps onto one CLI exit code.
enum class ErrorKind {
  InvalidArgument,         // precondition violated by the caller
  ParseError,              // malformed decimal string or cache line
  ValidationError,         // a loaded cache entry fails its z-value check
  ResourceExceeded,        // factoring budget or oracle scan limit
  InternalBoundViolation,  // oracle scan found no zero within 2n steps
  BackendMismatch,         // oracle and fast backends disagree
  CapExceeded,             // trajectory did not reach a fixed point
  NotFound,                // search exhausted its range
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid_argument";
    case ErrorKind::ParseError: return "parse_error";
    case ErrorKind::ValidationError: return "validation_error";
    case ErrorKind::ResourceExceeded: return "resource_exceeded";
    case ErrorKind::InternalBoundViolation: return "internal_bound_violation";
    case ErrorKind::BackendMismatch: return "backend_mismatch";
    case ErrorKind::CapExceeded: return "cap_exceeded";
    case ErrorKind::NotFound: return "not_found";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool condition, const std::string& what) {
  if (!condition) fail(ErrorKind::InvalidArgument, what);
}

}  // namespace fibz

#pragma once

#include <stdexcept>
#include <string>

namespace shorcert {

enum class ErrorKind {
  invalid_argument,
  not_coprime,
  invalid_order,
  capacity,
  invalid_circuit,
  degenerate_model,
  precondition,
  config,
  io,
};

// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::not_coprime: return "not-coprime";
    case ErrorKind::invalid_order: return "invalid-order";
    case ErrorKind::capacity: return "capacity";
    case ErrorKind::invalid_circuit: return "invalid-circuit";
    case ErrorKind::degenerate_model: return "degenerate-model";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

// CLI exit codes: 1 config/validation, 2 capacity, 3 I/O.
inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::capacity: return 2;
    case ErrorKind::io: return 3;
    default: return 1;
  }
}

namespace detail {

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace detail
}  // namespace shorcert

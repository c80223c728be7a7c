#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hartree {

enum class ErrorKind {
  GridMismatch,
  NonFinite,
  RangeError,
  ComplexDensity,
  DegenerateDenominator,
  QuadratureBudgetExceeded,
  NoConvergence,
  CollapseToZero,
  GridTooSmall,
  InsufficientSamples,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every module failure is reported as an Error carrying its kind, so callers
/// (the CLI in particular) can map failures to exit codes without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace hartree

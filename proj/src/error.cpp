#include "hartree/error.hpp"

namespace hartree {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::RangeError: return "RangeError";
    case ErrorKind::ComplexDensity: return "ComplexDensity";
    case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorKind::QuadratureBudgetExceeded: return "QuadratureBudgetExceeded";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::CollapseToZero: return "CollapseToZero";
    case ErrorKind::GridTooSmall: return "GridTooSmall";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace hartree

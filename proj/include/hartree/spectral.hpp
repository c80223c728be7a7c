#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hartree/radial_field.hpp"

namespace hartree {

/// A field whose physical tail is not negligible; truncation at r_max then
/// dominates the transform error. Reported, never thrown.
struct TailWarning {
  std::string operation;
  double tail_ratio;  // max |f| over the last 5% of nodes divided by max |f|
};

struct DiagnosticLog {
  std::vector<TailWarning> warnings;
};

inline constexpr double kTailWarningLevel = 1e-8;

/// max |f| on the outermost 5% of nodes relative to the peak (0 for the zero field).
double tail_ratio(const RadialField& f);

/// Unitary radial Fourier transform on R^5 (its own inverse on radial
/// functions). Flips the side tag. When `log` is given, a TailWarning is
/// appended for physical inputs whose tail exceeds kTailWarningLevel.
RadialField hankel_transform(const RadialField& f, DiagnosticLog* log = nullptr);

/// Returns f on the requested side, transforming only if needed.
RadialField to_side(const RadialField& f, Side side);

/// Multiplies the spectral representation by m(rho); the result keeps f's side.
RadialField apply_multiplier(const RadialField& f, const std::function<Complex(double)>& m);

/// |nabla|^s, s in [-2, 2]. s = -2 on a physical field is the Riesz potential
/// hartree_convolution(f) / (8 pi^2), applied to real and imaginary parts.
RadialField fractional_derivative(const RadialField& f, double s);

/// |x|^-3 * g for a real density g on the physical side. Equivalent to the
/// multiplier 8 pi^2 rho^-2, but evaluated through Newton's theorem so the
/// r^-3 tail of the potential is not folded back by the truncated lattice.
/// `imag_tolerance` bounds max |Im g| relative to max |g|.
RadialField hartree_convolution(const RadialField& g, double imag_tolerance = 1e-12);

enum class BandKind { Band, Low, High };

/// Littlewood-Paley projection at frequency N: P_N, P_{<=N} or P_{>N}.
RadialField lp_project(const RadialField& f, double N, BandKind kind);

/// Multiplier of lp_project at frequency rho.
double lp_symbol(double rho, double N, BandKind kind) noexcept;

/// Free Schroedinger propagator e^{it Delta}, symbol exp(-i t rho^2).
RadialField free_propagate(const RadialField& f, double t);

/// Value of the opposite-side representation of f at an arbitrary coordinate
/// x >= 0 (a radius if f is spectral, a frequency if f is physical), by direct
/// quadrature of the transform integral. x = 0 uses the analytic limit.
Complex evaluate_opposite(const RadialField& f, double x);

}  // namespace hartree

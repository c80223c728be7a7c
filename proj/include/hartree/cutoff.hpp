#pragma once

#include <array>

namespace hartree {

/// Smooth radial cutoff: 1 for x <= plateau, 0 for x >= support, and the
/// exp(-1/t) partition-of-unity transition in between. C-infinity everywhere.
double smooth_cutoff(double x, double plateau, double support) noexcept;

/// Value and first three derivatives of smooth_cutoff at x.
std::array<double, 4> smooth_cutoff_jet(double x, double plateau, double support) noexcept;

/// Littlewood-Paley bump: 1 on |x| <= 1, supported in |x| <= 11/10.
inline double lp_bump(double x) noexcept { return smooth_cutoff(x < 0 ? -x : x, 1.0, 1.1); }

/// Spatial cutoff used by the localized mass and the virial weight: 1 on r <= 1, 0 on r >= 2.
inline double unit_cutoff(double r) noexcept { return smooth_cutoff(r, 1.0, 2.0); }
inline std::array<double, 4> unit_cutoff_jet(double r) noexcept { return smooth_cutoff_jet(r, 1.0, 2.0); }

}  // namespace hartree

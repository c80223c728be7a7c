#pragma once

#include <numbers>

namespace hartree {

/// Surface area of the unit sphere S^4, so that dx = kSphere4 r^4 dr for radial integrands on R^5.
inline constexpr double kSphere4 = 8.0 * std::numbers::pi * std::numbers::pi / 3.0;
/// Surface area of S^3; the angular measure of R^5 relative to a fixed axis is kSphere3 sin^3(theta).
inline constexpr double kSphere3 = 2.0 * std::numbers::pi * std::numbers::pi;
/// |x|^-3 * g has Fourier symbol kRieszConstant |xi|^-2 under the unitary transform on R^5.
inline constexpr double kRieszConstant = 8.0 * std::numbers::pi * std::numbers::pi;
/// Ratio between the scattering threshold and the global-existence threshold.
inline constexpr double kScatteringFactor = 0.81649658092772603273;  // sqrt(6)/3

}  // namespace hartree

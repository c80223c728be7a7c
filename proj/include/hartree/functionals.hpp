#pragma once

#include "hartree/radial_field.hpp"

namespace hartree {

/// ||f||_p on R^5, p in [1, inf]. Physical side; a spectral field is transformed first.
double lp_norm(const RadialField& f, double p);

/// ||f||_{H^s dot} = || |nabla|^s f ||_2, summed on the spectral side (s in [-2, 2]).
double sobolev_norm(const RadialField& f, double s);

/// P(f) = <|x|^-3 * |f|^2, |f|^2>.
double hartree_energy(const RadialField& f);

/// E(f) = ||nabla f||^2 / 2 - P(f) / 4.
double energy(const RadialField& f);

/// J(f) = ||f||_{H^1/2}^2 ||f||_{H^1}^2 / P(f). Throws DegenerateDenominator when P vanishes.
double weinstein(const RadialField& f);

/// 1 / J(f). Throws DegenerateDenominator when f has no kinetic content.
double hls_ratio(const RadialField& f);

/// d/dr of a physical profile: centred 4th-order differences, f even through
/// the origin and zero from r_max on.
RadialField radial_derivative(const RadialField& f);

/// a f(b x) on f's own side, resampled by local quintic interpolation (even
/// through the origin, zero beyond the last node).
RadialField dilate(const RadialField& f, double a, double b);

/// M_a = 2 Im int conj(u) psi(r/R) r d_r u dx.
double virial_m_a(const RadialField& f, double R);

struct VirialBreakdown {
  double main = 0.0;      // 12 E - 2 ||nabla u||^2
  double err_mass = 0.0;  // -int [24 psi'/(R r) + 11 psi''/R^2 + r psi'''/R^3] |u|^2
  double err_grad = 0.0;  // 4 int (psi - 1 + (r/R) psi') |d_r u|^2
  double err_conv = 0.0;  // -3 iint [x psi_x - y psi_y - (x - y)].(x - y) / |x - y|^5 |u(x)|^2 |u(y)|^2
  double total = 0.0;
};

struct VirialOptions {
  int angular_order = 64;
  double consistency_tol = 1e-4;  // doubling the angular order may change err_conv by at most this (relative)
};

/// d/dt M_a for a solution of the focusing Hartree equation passing through f.
/// err_conv is a radius x radius x polar-angle sum; QuadratureBudgetExceeded if
/// it fails the doubling check.
VirialBreakdown virial_rate(const RadialField& f, double R, const VirialOptions& opts = {});

/// M_R = int phi(r/R) |u|^2 dx.
double localized_mass(const RadialField& f, double R);

/// max_r r^{7/4} |f| / (||f||_{H^1/2}^{1/2} ||f||_{H^1}^{1/2}); the maximum is
/// refined between nodes with a local quartic.
double radial_decay_ratio(const RadialField& f);

/// ||f||_{15/4}^3, the per-time integrand of ||u||_{L^3 L^{15/4}}^3.
double strichartz_density(const RadialField& f);

}  // namespace hartree

#pragma once

// Direct-quadrature reference values for radial integrals on R^5. These never
// touch the lattice transform, so they serve as independent oracles for the
// spectral code paths.

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "hartree/constants.hpp"

namespace oracle {

using Fn = std::function<double(double)>;

/// Composite 30-point Gauss-Legendre over the breakpoints `cuts` (ascending).
inline double gauss_legendre(const Fn& f, const std::vector<double>& cuts) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += boost::math::quadrature::gauss<double, 30>::integrate(f, cuts[i], cuts[i + 1]);
  return total;
}

inline std::vector<double> uniform_cuts(double a, double b, int pieces) {
  std::vector<double> c;
  for (int i = 0; i <= pieces; ++i) c.push_back(a + (b - a) * i / pieces);
  return c;
}

/// Breakpoints on [0, pi] refined geometrically towards theta = 0.
inline std::vector<double> angle_cuts() {
  std::vector<double> c{0.0};
  for (double t = 1e-9; t < 0.1; t *= 10.0) c.push_back(t);
  for (double t = 0.1; t < std::numbers::pi; t += 0.25) c.push_back(t);
  c.push_back(std::numbers::pi);
  return c;
}

/// Unitary radial Fourier transform on R^5 at frequency rho of a profile
/// supported (numerically) in [0, r_cut], by 1-D quadrature of the Bessel-3/2 kernel.
inline double radial_fourier(const Fn& f, double rho, double r_cut) {
  auto integrand = [&](double r) {
    const double x = r * rho;
    const double k = x < 1e-3 ? x * x / 3.0 - x * x * x * x / 30.0 : std::sin(x) / x - std::cos(x);
    return f(r) * r * r * k;
  };
  const int pieces = std::max(40, static_cast<int>(r_cut * rho));
  return std::sqrt(2.0 / std::numbers::pi) / (rho * rho) * gauss_legendre(integrand, uniform_cuts(0.0, r_cut, pieces));
}

/// (|y|^-3 * g)(x) at |x| = r for a radial density g supported in [0, s_cut]:
/// Gauss-Legendre in the source radius s and the polar angle between x and y,
/// with breakpoints at s = r and a geometric angle grading for the near-singular
/// region s ~ r, theta ~ 0.
inline double riesz_potential(const Fn& g, double r, double s_cut) {
  const auto theta_cuts = angle_cuts();
  auto angular = [&](double s) {
    auto integrand = [&](double th) {
      // |x - y|^2 without the cancellation of r^2 + s^2 - 2 r s cos(theta)
      const double h = std::sin(0.5 * th);
      const double d2 = (r - s) * (r - s) + 4.0 * r * s * h * h;
      const double st = std::sin(th);
      return st * st * st / (d2 * std::sqrt(d2));
    };
    return gauss_legendre(integrand, theta_cuts);
  };
  auto radial = [&](double s) { return s * s * s * s * g(s) * angular(s); };
  std::vector<double> cuts;
  if (r > 0.0 && r < s_cut) {
    for (double c : uniform_cuts(0.0, r, 8)) cuts.push_back(c);
    // grade towards s = r from above
    const auto above = uniform_cuts(r, s_cut, 24);
    cuts.insert(cuts.end(), above.begin() + 1, above.end());
  } else {
    cuts = uniform_cuts(0.0, s_cut, 24);
  }
  return hartree::kSphere3 * gauss_legendre(radial, cuts);
}

/// Newton's theorem for the 5-D kernel: the spherical mean of |x - y|^-3 over
/// |y| = s equals max(r, s)^-3, so the potential is a 1-D integral.
inline double riesz_potential_newton(const Fn& g, double r, double s_cut) {
  auto inner = [&](double s) { return s * s * s * s * g(s) * std::pow(std::max(r, s), -3.0); };
  std::vector<double> cuts;
  if (r > 0.0 && r < s_cut) {
    cuts = uniform_cuts(0.0, r, 8);
    const auto above = uniform_cuts(r, s_cut, 24);
    cuts.insert(cuts.end(), above.begin() + 1, above.end());
  } else {
    cuts = uniform_cuts(0.0, s_cut, 24);
  }
  return hartree::kSphere4 * gauss_legendre(inner, cuts);
}

/// Closed form of |y|^-3 * exp(-|y|^2 / 2) at radius r > 0.
inline double riesz_potential_unit_gaussian(double r) {
  const double e = std::exp(-0.5 * r * r);
  const double inner = 3.0 * std::sqrt(std::numbers::pi / 2.0) * std::erf(r / std::numbers::sqrt2) - e * (r * r * r + 3.0 * r);
  return hartree::kSphere4 * (inner / (r * r * r) + e);
}

/// P(f) = iint |f(x)|^2 |f(y)|^2 / |x - y|^3 for a real radial profile f:
/// radius x radius x angle Gauss-Legendre.
inline double hartree_energy(const Fn& f, double r_cut) {
  auto density = [&](double s) { return f(s) * f(s); };
  auto outer = [&](double r) { return r * r * r * r * density(r) * riesz_potential(density, r, r_cut); };
  return hartree::kSphere4 * gauss_legendre(outer, uniform_cuts(0.0, r_cut, 16));
}

}  // namespace oracle

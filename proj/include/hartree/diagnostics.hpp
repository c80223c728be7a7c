#pragma once

#include <vector>

#include "hartree/radial_field.hpp"

namespace hartree {

/// N(f): the median of the H^1/2 spectral density, i.e. the rho* with
/// int_{rho <= rho*} rho |f^|^2 dxi = ||f||_{H^1/2}^2 / 2 (linear interpolation
/// of the cumulative lattice sum). DegenerateDenominator for the zero field.
double frequency_scale(const RadialField& f);

struct CompactnessReport {
  double eta = 0.0;
  double c_outer = 0.0;  // C(eta): int_{r >= C/N} ||nabla|^1/2 f|^2 dx <= eta ||f||^2
  double c_freq = 0.0;   // C(eta): int_{rho >= C N} rho |f^|^2 dxi <= eta ||f||^2
  double c_inner = 0.0;  // c(eta): both inner integrals (r <= c/N, rho <= c N) <= eta ||f||^2
  double n_scale = 0.0;
};

/// RangeError unless 0 < eta < 1.
CompactnessReport compactness_report(const RadialField& f, double eta);

struct DispersiveFit {
  double exponent = 0.0;
  double r2 = 0.0;
  std::vector<double> times, sup_norms;
};

/// Least-squares slope of log ||e^{it Delta} f0||_inf against log t over
/// `samples` log-spaced times in [t_lo, t_hi]. RangeError unless t_lo >= 1,
/// t_hi > t_lo and samples >= 8.
DispersiveFit dispersive_fit(const RadialField& f0, double t_lo, double t_hi, int samples);

struct BernsteinExponents {
  double p, q, s;
};

struct BernsteinRow {
  double N;
  double p, q, s;
  double s_ratio;      // || |nabla|^s P_N f ||_q / (N^s || P_N f ||_q)
  double pq_ratio;     // || P_N f ||_q / (N^{5/p - 5/q} || P_N f ||_p)
  double low_pq_ratio; // the same for P_{<=N}
};

/// Dyadic frequencies N = 2^k in [8 rho_1, rho_max / 8].
std::vector<double> dyadic_range(const RadialGrid& grid);

/// One row per (exponent triple, dyadic N). RangeError unless 1 <= p <= q <= inf.
std::vector<BernsteinRow> bernstein_suite(const RadialField& f, const std::vector<BernsteinExponents>& exps);

}  // namespace hartree

#include "hartree/functionals.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "hartree/constants.hpp"
#include "hartree/cutoff.hpp"
#include "hartree/error.hpp"
#include "hartree/spectral.hpp"

namespace hartree {
namespace {

RadialField physical(const RadialField& f) { return to_side(f, Side::Physical); }

std::vector<double> density(const RadialField& u) {
  std::vector<double> rho(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) rho[i] = std::norm(u[i]);
  return rho;
}

// f at x_m = m dr for m = -pad .. n + pad: even through 0, the origin value by
// even extrapolation, zero at and beyond r_max.
std::vector<Complex> extended(const RadialField& f, std::size_t pad) {
  const std::size_t n = f.size();
  std::vector<Complex> ext(n + 2 * pad + 1, Complex(0.0));
  for (std::size_t j = 1; j <= n; ++j) ext[pad + j] = f[j - 1];
  ext[pad] = n >= 4 ? (56.0 * f[0] - 28.0 * f[1] + 8.0 * f[2] - f[3]) / 35.0 : f[0];
  for (std::size_t m = 1; m <= pad && m <= n; ++m) ext[pad - m] = f[m - 1];
  return ext;
}

// Gauss-Legendre nodes on [0, pi] with sin^3 folded into the weights.
struct AngularRule {
  std::vector<double> cos_t, weight;
};

AngularRule angular_rule(int order) {
  require(order >= 2, ErrorKind::RangeError, "angular order must be at least 2");
  AngularRule rule;
  // Newton on the Legendre polynomial P_order.
  const int n = order;
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const double theta = 0.5 * std::numbers::pi * (x + 1.0);
    const double s = std::sin(theta);
    rule.cos_t.push_back(std::cos(theta));
    rule.weight.push_back(0.5 * std::numbers::pi * w * s * s * s);
  }
  return rule;
}

double convolution_error(const RadialGrid& grid, const std::vector<double>& rho, const std::vector<double>& A,
                         int order) {
  const auto rule = angular_rule(order);
  const std::size_t n = grid.size();
  const double peak = *std::max_element(rho.begin(), rho.end());
  if (peak == 0.0) return 0.0;
  std::vector<std::size_t> active;
  for (std::size_t j = 0; j < n; ++j)
    if (rho[j] > 1e-14 * peak) active.push_back(j);

  const double dr = grid.dr();
  double total = 0.0;
  for (std::size_t a = 0; a < active.size(); ++a) {
    const std::size_t j = active[a];
    const double r = grid.r(j), Aj = A[j], wj = std::pow(r, 4) * dr * rho[j];
    double row = 0.0;
    for (std::size_t b = a; b < active.size(); ++b) {
      const std::size_t k = active[b];
      const double Ak = A[k];
      if (Aj == 0.0 && Ak == 0.0) continue;
      const double s = grid.r(k);
      const double sum2 = r * r + s * s, rs = r * s;
      double inner = 0.0;
      for (std::size_t q = 0; q < rule.cos_t.size(); ++q) {
        const double c = rule.cos_t[q];
        const double D = sum2 - 2.0 * rs * c;
        const double bracket = Aj * (r * r - rs * c) - Ak * (rs * c - s * s);
        inner += rule.weight[q] * bracket / (D * D * std::sqrt(D));
      }
      const double wk = std::pow(s, 4) * dr * rho[k];
      row += (b == a ? 1.0 : 2.0) * wk * inner;
    }
    total += wj * row;
  }
  return -3.0 * kSphere4 * kSphere3 * total;
}

}  // namespace

double lp_norm(const RadialField& f, double p) {
  require(p >= 1.0, ErrorKind::RangeError, "lp_norm: p must be >= 1");
  const auto u = physical(f);
  require_finite(u, "lp_norm");
  if (std::isinf(p)) return u.max_abs();
  const auto w = u.grid().physical_weights();
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += w[i] * std::pow(std::abs(u[i]), p);
  return std::pow(s, 1.0 / p);
}

double sobolev_norm(const RadialField& f, double s) {
  require(std::abs(s) <= 2.0, ErrorKind::RangeError, "sobolev_norm: |s| must be at most 2");
  const auto g = to_side(f, Side::Spectral);
  require_finite(g, "sobolev_norm");
  const auto w = g.grid().spectral_weights();
  const auto rho = g.grid().frequencies();
  double sum = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) sum += w[k] * std::pow(rho[k], 2.0 * s) * std::norm(g[k]);
  // The integrand is rho^a G(rho^2) with a = 4 + 2s. Unless a is a positive even
  // integer the lattice sum is only accurate to O(drho^(a+1)); subtract the
  // zeta-function endpoint terms sum_j zeta(-a-2j) drho^(a+2j+1) G_j, with G_j
  // from a cubic fit in rho^2 (zeta vanishes at the negative even integers).
  const double a = 4.0 + 2.0 * s, h = g.grid().drho();
  if (g.size() >= 4) {
    std::array<std::array<double, 5>, 4> m{};
    for (std::size_t k = 0; k < 4; ++k) {
      const double t = rho[k] * rho[k];
      for (std::size_t c = 0; c < 4; ++c) m[k][c] = std::pow(t, static_cast<double>(c));
      m[k][4] = std::norm(g[k]);
    }
    for (std::size_t c = 0; c < 4; ++c)
      for (std::size_t r = c + 1; r < 4; ++r) {
        const double q = m[r][c] / m[c][c];
        for (std::size_t cc = c; cc < 5; ++cc) m[r][cc] -= q * m[c][cc];
      }
    std::array<double, 4> G{};
    for (std::size_t c = 4; c-- > 0;) {
      double v = m[c][4];
      for (std::size_t cc = c + 1; cc < 4; ++cc) v -= m[c][cc] * G[cc];
      G[c] = v / m[c][c];
    }
    for (std::size_t j = 0; j < 3; ++j) {
      const double e = a + 2.0 * static_cast<double>(j);
      sum -= kSphere4 * std::riemann_zeta(-e) * std::pow(h, e + 1.0) * G[j];
    }
  }
  return std::sqrt(std::max(sum, 0.0));
}

double hartree_energy(const RadialField& f) {
  const auto u = physical(f);
  require_finite(u, "hartree_energy");
  const auto rho = density(u);
  RadialField g(u.grid(), Side::Physical);
  for (std::size_t i = 0; i < u.size(); ++i) g[i] = rho[i];
  const auto V = hartree_convolution(g);
  const auto w = u.grid().physical_weights();
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += w[i] * V[i].real() * rho[i];
  return s;
}

double energy(const RadialField& f) {
  const double h1 = sobolev_norm(f, 1.0);
  return 0.5 * h1 * h1 - 0.25 * hartree_energy(f);
}

double weinstein(const RadialField& f) {
  const double P = hartree_energy(f);
  require(P > std::numeric_limits<double>::min(), ErrorKind::DegenerateDenominator,
          "weinstein: Hartree energy vanishes");
  const double k = sobolev_norm(f, 0.5), h = sobolev_norm(f, 1.0);
  return k * k * h * h / P;
}

double hls_ratio(const RadialField& f) {
  const double k = sobolev_norm(f, 0.5), h = sobolev_norm(f, 1.0);
  const double denom = k * k * h * h;
  require(denom > std::numeric_limits<double>::min(), ErrorKind::DegenerateDenominator,
          "hls_ratio: field has no kinetic content");
  return hartree_energy(f) / denom;
}

RadialField radial_derivative(const RadialField& f) {
  const auto u = physical(f);
  require_finite(u, "radial_derivative");
  constexpr std::size_t pad = 2;
  const auto e = extended(u, pad);
  const double h = u.grid().dr();
  RadialField du(u.grid(), Side::Physical);
  for (std::size_t j = 1; j <= u.size(); ++j) {
    const std::size_t m = pad + j;
    du[j - 1] = (-e[m + 2] + 8.0 * e[m + 1] - 8.0 * e[m - 1] + e[m - 2]) / (12.0 * h);
  }
  return du;
}

RadialField dilate(const RadialField& f, double a, double b) {
  require(std::isfinite(a) && std::isfinite(b) && b > 0.0, ErrorKind::RangeError, "dilate: need finite a and b > 0");
  const auto& u = f;
  require_finite(u, "dilate");
  const std::size_t n = u.size();
  constexpr std::size_t pad = 3;
  const auto e = extended(u, pad);
  const double h = u.side() == Side::Physical ? u.grid().dr() : u.grid().drho();
  RadialField out(u.grid(), u.side());
  for (std::size_t j = 0; j < n; ++j) {
    const double x = b * u.nodes()[j] / h;  // position in node units
    if (x >= static_cast<double>(n + 1)) continue;
    const auto i = static_cast<long>(std::floor(x));
    const double t = x - static_cast<double>(i);
    Complex v(0.0);
    for (int m = -2; m <= 3; ++m) {
      double l = 1.0;
      for (int k = -2; k <= 3; ++k)
        if (k != m) l *= (t - k) / double(m - k);
      const long idx = i + m + static_cast<long>(pad);
      if (idx >= 0 && idx < static_cast<long>(e.size())) v += l * e[static_cast<std::size_t>(idx)];
    }
    out[j] = a * v;
  }
  return out;
}

double virial_m_a(const RadialField& f, double R) {
  require(R > 0.0, ErrorKind::RangeError, "virial_m_a: R must be positive");
  const auto u = physical(f);
  const auto du = radial_derivative(u);
  const auto w = u.grid().physical_weights();
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double r = u.grid().r(i);
    s += w[i] * unit_cutoff(r / R) * r * std::imag(std::conj(u[i]) * du[i]);
  }
  return 2.0 * s;
}

VirialBreakdown virial_rate(const RadialField& f, double R, const VirialOptions& opts) {
  require(R > 0.0, ErrorKind::RangeError, "virial_rate: R must be positive");
  const auto u = physical(f);
  require_finite(u, "virial_rate");
  const auto& grid = u.grid();
  const auto w = grid.physical_weights();
  const auto du = radial_derivative(u);
  const auto rho = density(u);

  VirialBreakdown out;
  const double h1 = sobolev_norm(u, 1.0);
  const double E = 0.5 * h1 * h1 - 0.25 * hartree_energy(u);
  out.main = 12.0 * E - 2.0 * h1 * h1;

  std::vector<double> A(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double r = grid.r(i);
    const auto jet = unit_cutoff_jet(r / R);
    A[i] = jet[0] - 1.0;
    out.err_mass -= w[i] * (24.0 * jet[1] / (R * r) + 11.0 * jet[2] / (R * R) + r * jet[3] / (R * R * R)) * rho[i];
    out.err_grad += 4.0 * w[i] * (jet[0] - 1.0 + r / R * jet[1]) * std::norm(du[i]);
  }

  const double coarse = convolution_error(grid, rho, A, opts.angular_order);
  const double fine = convolution_error(grid, rho, A, 2 * opts.angular_order);
  const double scale = std::max(std::abs(fine), 1e-12 * std::abs(out.main));
  if (std::abs(fine - coarse) > opts.consistency_tol * scale)
    fail(ErrorKind::QuadratureBudgetExceeded, "virial_rate: angular order " + std::to_string(opts.angular_order) +
                                                  " gives " + std::to_string(coarse) + ", doubled gives " +
                                                  std::to_string(fine));
  out.err_conv = coarse;
  out.total = out.main + out.err_mass + out.err_grad + out.err_conv;
  return out;
}

double localized_mass(const RadialField& f, double R) {
  require(R > 0.0, ErrorKind::RangeError, "localized_mass: R must be positive");
  const auto u = physical(f);
  require_finite(u, "localized_mass");
  const auto w = u.grid().physical_weights();
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += w[i] * unit_cutoff(u.grid().r(i) / R) * std::norm(u[i]);
  return s;
}

double radial_decay_ratio(const RadialField& f) {
  const auto u = physical(f);
  require_finite(u, "radial_decay_ratio");
  const std::size_t n = u.size();
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = std::pow(u.grid().r(i), 1.75) * std::abs(u[i]);
  const std::size_t j = static_cast<std::size_t>(std::max_element(g.begin(), g.end()) - g.begin());
  double best = g[j];
  if (j >= 2 && j + 2 < n) {
    // quartic through g_{j-2..j+2}; Newton for its stationary point near t = 0
    auto poly = [&](double t, int d) {
      double v = 0.0;
      for (int m = -2; m <= 2; ++m) {
        // Lagrange basis and its derivatives by finite expansion
        double l = 1.0, dl = 0.0, d2l = 0.0;
        for (int k = -2; k <= 2; ++k) {
          if (k == m) continue;
          const double a = 1.0 / double(m - k), b = -k / double(m - k);  // (t - k)/(m - k) = a t + b
          d2l = d2l * (a * t + b) + 2.0 * dl * a;
          dl = dl * (a * t + b) + l * a;
          l = l * (a * t + b);
        }
        v += (d == 0 ? l : d == 1 ? dl : d2l) * g[static_cast<std::size_t>(static_cast<long>(j) + m)];
      }
      return v;
    };
    double t = 0.0;
    for (int it = 0; it < 20; ++it) {
      const double d2 = poly(t, 2);
      if (d2 >= 0.0) break;
      t -= poly(t, 1) / d2;
      t = std::clamp(t, -1.0, 1.0);
    }
    best = std::max(best, poly(t, 0));
  }
  const double k = sobolev_norm(u, 0.5), h = sobolev_norm(u, 1.0);
  require(k > 0.0 && h > 0.0, ErrorKind::DegenerateDenominator, "radial_decay_ratio: zero field");
  return best / std::sqrt(k * h);
}

double strichartz_density(const RadialField& f) {
  const double v = lp_norm(f, 3.75);
  return v * v * v;
}

}  // namespace hartree

#include "hartree/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "hartree/constants.hpp"
#include "hartree/cutoff.hpp"
#include "hartree/error.hpp"

namespace hartree {
namespace {

// (sin x / x - cos x) / x^2, with its Taylor series near 0 where the
// difference cancels.
double kernel_over_square(double x) {
  if (std::abs(x) < 0.05) {
    const double x2 = x * x;
    return 1.0 / 3.0 - x2 / 30.0 + x2 * x2 / 840.0 - x2 * x2 * x2 / 45360.0;
  }
  return (std::sin(x) / x - std::cos(x)) / (x * x);
}

void transform_values(const RadialGrid& grid, Side from, std::span<const Complex> in, std::span<Complex> out) {
  const std::size_t n = grid.size();
  const auto src = from == Side::Physical ? grid.radii() : grid.frequencies();
  const auto dst = from == Side::Physical ? grid.frequencies() : grid.radii();
  const double src_step = from == Side::Physical ? grid.dr() : grid.drho();
  const double dst_step = from == Side::Physical ? grid.drho() : grid.dr();
  const double sq_src = std::sqrt(src_step), sq_dst = std::sqrt(dst_step);

  std::vector<double> re(n), im(n), re_out(n), im_out(n);
  bool has_imag = false;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = src[i] * src[i] * sq_src;
    re[i] = in[i].real() * w;
    im[i] = in[i].imag() * w;
    has_imag = has_imag || in[i].imag() != 0.0;
  }
  grid.apply_kernel(re, re_out);
  if (has_imag) grid.apply_kernel(im, im_out);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 1.0 / (dst[i] * dst[i] * sq_dst);
    out[i] = Complex(re_out[i] * w, has_imag ? im_out[i] * w : 0.0);
  }
}

std::vector<double> newton_potential(const RadialGrid& grid, std::span<const double> g) {
  // Newton's theorem in R^5: the mean of |x - y|^-3 over |y| = s is max(r, s)^-3, so
  //   V(r) = sigma_4 [ r^-3 int_0^r g s^4 ds + int_r^inf g s ds ].
  // Each cell [x_i, x_i+1] is integrated exactly against the quintic through
  // g_{i-2..i+3}: g even at 0, g(r_max) = 0 and zero beyond.
  const std::size_t n = grid.size();
  const double h = grid.dr();
  std::vector<double> ext(n + 6, 0.0);  // ext[m + 2] = g(x_m), x_m = m h, m = -2..n+3
  for (std::size_t j = 0; j < n; ++j) ext[j + 3] = g[j];
  ext[2] = (56.0 * g[0] - 28.0 * g[1] + 8.0 * g[2] - g[3]) / 35.0;
  ext[1] = g[0];
  ext[0] = g[1];

  // 5-point Gauss-Legendre on [0, 1]: exact for quintic * s^4.
  static constexpr std::array<double, 5> t{0.046910077030668, 0.2307653449471585, 0.5, 0.7692346550528415,
                                           0.953089922969332};
  static constexpr std::array<double, 5> w{0.1184634425280945, 0.2393143352496832, 0.2844444444444444,
                                           0.2393143352496832, 0.1184634425280945};
  std::array<std::array<double, 6>, 5> lag{};  // lag[q][m]: Lagrange basis on offsets -2..3 at t[q]
  for (int q = 0; q < 5; ++q)
    for (int m = 0; m < 6; ++m) {
      double v = 1.0;
      for (int k = 0; k < 6; ++k)
        if (k != m) v *= (t[q] - (k - 2)) / double(m - k);
      lag[q][m] = v;
    }

  std::vector<double> inner(n + 1), outer(n + 1);  // per cell: int g s^4, int g s
  for (std::size_t i = 0; i <= n; ++i) {
    double a = 0.0, b = 0.0;
    for (int q = 0; q < 5; ++q) {
      double gq = 0.0;
      for (int m = 0; m < 6; ++m) gq += lag[q][m] * ext[i + m];
      const double s = (double(i) + t[q]) * h;
      a += w[q] * gq * s * s * s * s;
      b += w[q] * gq * s;
    }
    inner[i] = a * h;
    outer[i] = b * h;
  }
  std::vector<double> V(n);
  double tail = 0.0;
  for (std::size_t i = n + 1; i-- > 1;) {
    tail += outer[i];
    if (i <= n) V[i - 1] = tail;
  }
  double head = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    head += inner[j];
    const double r = grid.r(j);
    V[j] = kSphere4 * (head / (r * r * r) + V[j]);
  }
  return V;
}

}  // namespace

double tail_ratio(const RadialField& f) {
  const double peak = f.max_abs();
  if (peak == 0.0) return 0.0;
  const std::size_t n = f.size();
  const std::size_t start = n - std::max<std::size_t>(1, n / 20);
  double tail = 0.0;
  for (std::size_t i = start; i < n; ++i) tail = std::max(tail, std::abs(f[i]));
  return tail / peak;
}

RadialField hankel_transform(const RadialField& f, DiagnosticLog* log) {
  require_finite(f, "hankel_transform");
  if (log != nullptr && f.side() == Side::Physical) {
    const double ratio = tail_ratio(f);
    if (ratio > kTailWarningLevel) log->warnings.push_back({"hankel_transform", ratio});
  }
  RadialField out(f.grid(), opposite(f.side()));
  transform_values(f.grid(), f.side(), f.values(), out.values());
  require_finite(out, "hankel_transform result");
  return out;
}

RadialField to_side(const RadialField& f, Side side) {
  return f.side() == side ? f : hankel_transform(f);
}

RadialField apply_multiplier(const RadialField& f, const std::function<Complex(double)>& m) {
  require_finite(f, "apply_multiplier");
  RadialField spec = to_side(f, Side::Spectral);
  const auto rho = spec.grid().frequencies();
  for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= m(rho[k]);
  return f.side() == Side::Spectral ? spec : hankel_transform(spec);
}

RadialField fractional_derivative(const RadialField& f, double s) {
  require(std::abs(s) <= 2.0, ErrorKind::RangeError,
          "fractional_derivative: |s| must be at most 2, got " + std::to_string(s));
  if (s == 0.0) {
    require_finite(f, "fractional_derivative");
    return f;
  }
  if (s == -2.0 && f.side() == Side::Physical) {
    // rho^-2 is the Riesz potential; the physical-side integral keeps the r^-3 tail
    // that the truncated lattice cannot hold.
    require_finite(f, "fractional_derivative");
    std::vector<double> re(f.size()), im(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      re[i] = f[i].real() / kRieszConstant;
      im[i] = f[i].imag() / kRieszConstant;
    }
    const auto vr = newton_potential(f.grid(), re), vi = newton_potential(f.grid(), im);
    RadialField out(f.grid(), Side::Physical);
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = Complex(vr[i], vi[i]);
    return out;
  }
  return apply_multiplier(f, [s](double rho) { return Complex(std::pow(rho, s)); });
}

RadialField hartree_convolution(const RadialField& g, double imag_tolerance) {
  require(g.side() == Side::Physical, ErrorKind::RangeError, "hartree_convolution expects a physical-side density");
  require_finite(g, "hartree_convolution");
  require(g.imag_fraction() <= imag_tolerance, ErrorKind::ComplexDensity,
          "density imaginary part " + std::to_string(g.imag_fraction()) + " exceeds tolerance");
  std::vector<double> re(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) re[i] = g[i].real();
  const auto V = newton_potential(g.grid(), re);
  RadialField out(g.grid(), Side::Physical);
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = V[i];
  return out;
}

double lp_symbol(double rho, double N, BandKind kind) noexcept {
  switch (kind) {
    case BandKind::Band: return lp_bump(rho / N) - lp_bump(2.0 * rho / N);
    case BandKind::Low: return lp_bump(rho / N);
    case BandKind::High: return 1.0 - lp_bump(rho / N);
  }
  return 0.0;
}

RadialField lp_project(const RadialField& f, double N, BandKind kind) {
  require(std::isfinite(N) && N > 0.0, ErrorKind::RangeError, "lp_project: N must be positive");
  return apply_multiplier(f, [N, kind](double rho) { return Complex(lp_symbol(rho, N, kind)); });
}

RadialField free_propagate(const RadialField& f, double t) {
  require(std::isfinite(t), ErrorKind::NonFinite, "free_propagate: non-finite time");
  if (t == 0.0) {
    require_finite(f, "free_propagate");
    return f;
  }
  return apply_multiplier(f, [t](double rho) { return std::polar(1.0, -t * rho * rho); });
}

Complex evaluate_opposite(const RadialField& f, double x) {
  require(x >= 0.0 && std::isfinite(x), ErrorKind::RangeError, "evaluate_opposite: coordinate must be >= 0");
  const auto nodes = f.nodes();
  const double step = f.side() == Side::Physical ? f.grid().dr() : f.grid().drho();
  Complex sum(0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double v = nodes[i];
    sum += f[i] * (v * v * v * v * kernel_over_square(x * v));
  }
  return std::sqrt(2.0 / std::numbers::pi) * step * sum;
}

}  // namespace hartree

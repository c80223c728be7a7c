#include "hartree/diagnostics.hpp"

#include <cmath>

#include "hartree/error.hpp"
#include "hartree/functionals.hpp"
#include "hartree/spectral.hpp"

namespace hartree {

namespace {

// Inverse of the piecewise-linear cumulative of the cell masses m_k, the cell
// of x_k being [x_k - h/2, x_k + h/2]: the smallest x with F(x) = level.
double inverse_cumulative(std::span<const double> x, const std::vector<double>& m, double level) {
  const double h = x[1] - x[0];
  double prev_x = x[0] - 0.5 * h, prev_F = 0.0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    const double F = prev_F + m[k];
    if (F >= level && m[k] > 0.0) return prev_x + (level - prev_F) / m[k] * h;
    prev_x = x[k] + 0.5 * h;
    prev_F = F;
  }
  return x.back();
}

double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

// rho |f^|^2 per spectral node.
std::vector<double> spectral_hhalf_density(const RadialField& spec) {
  const auto w = spec.grid().spectral_weights();
  const auto rho = spec.grid().frequencies();
  std::vector<double> m(spec.size());
  for (std::size_t k = 0; k < m.size(); ++k) m[k] = w[k] * rho[k] * std::norm(spec[k]);
  return m;
}

}  // namespace

double frequency_scale(const RadialField& f) {
  const auto spec = to_side(f, Side::Spectral);
  require_finite(spec, "frequency_scale");
  const auto m = spectral_hhalf_density(spec);
  const double total = sum(m);
  require(total > 0.0, ErrorKind::DegenerateDenominator, "frequency_scale of the zero field");
  return inverse_cumulative(spec.grid().frequencies(), m, 0.5 * total);
}

CompactnessReport compactness_report(const RadialField& f, double eta) {
  require(eta > 0.0 && eta < 1.0, ErrorKind::RangeError, "compactness_report: eta must lie in (0, 1)");
  const auto spec = to_side(f, Side::Spectral);
  const double N = frequency_scale(spec);

  const auto ms = spectral_hhalf_density(spec);
  const double total_s = sum(ms);
  const auto rho = spec.grid().frequencies();

  // physical profile of |nabla|^1/2 f
  auto g = spec;
  for (std::size_t k = 0; k < g.size(); ++k) g[k] *= std::sqrt(rho[k]);
  g = hankel_transform(g);
  const auto w = g.grid().physical_weights();
  std::vector<double> mp(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) mp[i] = w[i] * std::norm(g[i]);
  const double total_p = sum(mp);
  const auto r = g.grid().radii();

  // each side is measured against its own total, so discretization does not leak between them
  CompactnessReport rep;
  rep.eta = eta;
  rep.n_scale = N;
  rep.c_outer = inverse_cumulative(r, mp, (1.0 - eta) * total_p) * N;
  rep.c_freq = inverse_cumulative(rho, ms, (1.0 - eta) * total_s) / N;
  rep.c_inner = std::min(inverse_cumulative(r, mp, eta * total_p) * N, inverse_cumulative(rho, ms, eta * total_s) / N);
  return rep;
}

DispersiveFit dispersive_fit(const RadialField& f0, double t_lo, double t_hi, int samples) {
  require(t_lo >= 1.0 && t_hi > t_lo && std::isfinite(t_hi), ErrorKind::RangeError,
          "dispersive_fit: need 1 <= t_lo < t_hi");
  require(samples >= 8, ErrorKind::RangeError, "dispersive_fit: need at least 8 samples");
  const auto spec = to_side(f0, Side::Spectral);
  require_finite(spec, "dispersive_fit");
  DispersiveFit fit;
  const double a = std::log(t_lo), b = std::log(t_hi);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < samples; ++i) {
    const double t = std::exp(a + (b - a) * i / (samples - 1));
    const double sup = to_side(free_propagate(spec, t), Side::Physical).max_abs();
    require(sup > 0.0, ErrorKind::DegenerateDenominator, "dispersive_fit of the zero field");
    fit.times.push_back(t);
    fit.sup_norms.push_back(sup);
    const double x = std::log(t), y = std::log(sup);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = samples;
  fit.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double icpt = (sy - fit.exponent * sx) / n;
  double ss_res = 0.0, ss_tot = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double x = std::log(fit.times[i]), y = std::log(fit.sup_norms[i]);
    ss_res += std::pow(y - icpt - fit.exponent * x, 2);
    ss_tot += std::pow(y - sy / n, 2);
  }
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

std::vector<double> dyadic_range(const RadialGrid& grid) {
  std::vector<double> out;
  const double lo = 8.0 * grid.rho(0), hi = grid.rho_max() / 8.0;
  for (double N = std::exp2(std::ceil(std::log2(lo))); N <= hi; N *= 2.0) out.push_back(N);
  return out;
}

std::vector<BernsteinRow> bernstein_suite(const RadialField& f, const std::vector<BernsteinExponents>& exps) {
  for (const auto& e : exps)
    require(e.p >= 1.0 && e.p <= e.q && std::isfinite(e.s), ErrorKind::RangeError,
            "bernstein_suite: need 1 <= p <= q <= inf");
  const auto spec = to_side(f, Side::Spectral);
  require_finite(spec, "bernstein_suite");
  const auto rho = spec.grid().frequencies();
  auto project = [&](double N, BandKind kind, double s) {
    auto g = spec;
    for (std::size_t k = 0; k < g.size(); ++k) g[k] *= lp_symbol(rho[k], N, kind) * (s == 0.0 ? 1.0 : std::pow(rho[k], s));
    return hankel_transform(g);
  };
  auto dim_gap = [](double p, double q) { return 5.0 / p - 5.0 / q; };  // 5/inf = 0

  std::vector<BernsteinRow> rows;
  for (double N : dyadic_range(spec.grid())) {
    const auto band = project(N, BandKind::Band, 0.0);
    const auto low = project(N, BandKind::Low, 0.0);
    for (const auto& e : exps) {
      BernsteinRow row{N, e.p, e.q, e.s, 1.0, 0.0, 0.0};
      const double band_q = lp_norm(band, e.q);
      if (e.s != 0.0) row.s_ratio = lp_norm(project(N, BandKind::Band, e.s), e.q) / (std::pow(N, e.s) * band_q);
      row.pq_ratio = band_q / (std::pow(N, dim_gap(e.p, e.q)) * lp_norm(band, e.p));
      row.low_pq_ratio = lp_norm(low, e.q) / (std::pow(N, dim_gap(e.p, e.q)) * lp_norm(low, e.p));
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace hartree

#include "hartree/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "hartree/diagnostics.hpp"
#include "hartree/error.hpp"
#include "hartree/spectral.hpp"

namespace hartree {

namespace {

void free_phase(RadialField& spec, double t) {
  const auto rho = spec.grid().frequencies();
  for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= std::polar(1.0, -t * rho[k] * rho[k]);
}

RadialField potential(const RadialField& u) {
  RadialField dens(u.grid(), Side::Physical);
  for (std::size_t i = 0; i < u.size(); ++i) dens[i] = std::norm(u[i]);
  return hartree_convolution(dens);
}

// Strang step on the spectral representation; returns the midpoint |u|-only
// Strichartz density through `s_mid`.
RadialField step_spectral(const RadialField& spec, double dt, double coupling, double* s_mid) {
  RadialField v = spec;
  free_phase(v, 0.5 * dt);
  auto u = hankel_transform(v);
  if (coupling != 0.0) {
    const auto V = potential(u);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] *= std::polar(1.0, dt * coupling * V[i].real());
  }
  if (s_mid) *s_mid = strichartz_density(u);
  v = hankel_transform(u);
  free_phase(v, 0.5 * dt);
  return v;
}

MonitorRecord measure(const RadialField& spec, double t, double s_cumulative, double dt_used, const SolverConfig& cfg) {
  MonitorRecord m;
  const auto u = hankel_transform(spec);
  m.t = t;
  m.mass = std::pow(sobolev_norm(spec, 0.0), 2);
  m.hhalf = sobolev_norm(spec, 0.5);
  m.h1 = sobolev_norm(spec, 1.0);
  const double P = cfg.coupling != 0.0 ? hartree_energy(u) : 0.0;
  m.energy = 0.5 * m.h1 * m.h1 - 0.25 * cfg.coupling * P;
  m.m_a = virial_m_a(u, cfg.virial_R);
  if (cfg.monitor_virial) {
    // the breakdown is written for coupling 1; main and the convolution term are linear in it
    m.virial = virial_rate(u, cfg.virial_R, cfg.virial);
    m.virial.main += 3.0 * (1.0 - cfg.coupling) * P;
    m.virial.err_conv *= cfg.coupling;
    m.virial.total = m.virial.main + m.virial.err_mass + m.virial.err_grad + m.virial.err_conv;
  }
  m.m_r = localized_mass(u, cfg.mass_R);
  m.s_density = strichartz_density(u);
  m.s_cumulative = s_cumulative;
  m.n_of_t = m.hhalf > 0.0 ? frequency_scale(spec) : 0.0;
  m.dt_used = dt_used;
  return m;
}

}  // namespace

void validate(const SolverConfig& cfg) {
  auto check = [](bool ok, const char* key, const std::string& why) {
    if (!ok) fail(ErrorKind::RangeError, std::string("solver config ") + key + ": " + why);
  };
  check(std::isfinite(cfg.dt) && cfg.dt > 0.0, "dt", "must be positive");
  check(std::isfinite(cfg.t_end) && cfg.t_end > 0.0, "t_end", "must be positive");
  check(std::isfinite(cfg.dt_min) && cfg.dt_min > 0.0 && cfg.dt_min <= cfg.dt, "dt_min", "need 0 < dt_min <= dt");
  check(std::isfinite(cfg.dt_max) && cfg.dt <= cfg.dt_max, "dt_max", "need dt <= dt_max");
  check(cfg.c_cfl > 0.0, "c_cfl", "must be positive");
  check(cfg.monitor_stride >= 1, "monitor_stride", "must be at least 1");
  check(!cfg.record_fields_every || *cfg.record_fields_every >= 1, "record_fields_every", "must be at least 1");
  check(cfg.virial_R > 0.0, "virial_R", "must be positive");
  check(cfg.mass_R > 0.0, "mass_R", "must be positive");
  check(std::isfinite(cfg.coupling), "coupling", "must be finite");
  check(cfg.blowup_growth > 1.0, "blowup_growth", "must exceed 1");
  check(cfg.frequency_cutoff > 0.0 && cfg.frequency_cutoff <= 1.0, "frequency_cutoff", "must lie in (0, 1]");
  check(cfg.mass_tolerance > 0.0, "mass_tolerance", "must be positive");
}

void write_monitor_row(std::ostream& os, const MonitorRecord& m) {
  const auto old = os.precision(17);
  os << m.t << ',' << m.mass << ',' << m.energy << ',' << m.hhalf << ',' << m.h1 << ',' << m.m_a << ','
     << m.virial.main << ',' << m.virial.err_mass << ',' << m.virial.err_grad << ',' << m.virial.err_conv << ','
     << m.m_r << ',' << m.s_density << ',' << m.s_cumulative << ',' << m.n_of_t << ',' << m.dt_used << '\n';
  os.precision(old);
}

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Completed: return "Completed";
    case Verdict::SuspectedBlowup: return "SuspectedBlowup";
    case Verdict::AccuracyLost: return "AccuracyLost";
  }
  return "?";
}

RadialField strang_step(const RadialField& u, double dt, double coupling) {
  require(std::isfinite(dt) && dt > 0.0, ErrorKind::RangeError, "strang_step: dt must be positive");
  require_finite(u, "strang_step");
  const auto spec = step_spectral(to_side(u, Side::Spectral), dt, coupling, nullptr);
  return u.side() == Side::Spectral ? spec : hankel_transform(spec);
}

RadialField discrete_soliton(const RadialField& profile, double dt, double tol, int max_iter) {
  require(std::isfinite(dt) && dt > 0.0, ErrorKind::RangeError, "discrete_soliton: dt must be positive");
  require_finite(profile, "discrete_soliton");
  auto q = to_side(profile, Side::Spectral);
  const auto& g = q.grid();
  const auto rho = g.frequencies();
  const auto w = g.spectral_weights();
  const std::size_t n = q.size();
  // F(q) = Re[(e^{-i dt} S(q) - q) / (i dt)] has linear symbol -sin(theta) / dt,
  // theta = dt (rho^2 + 1); write F = -l q + G(q) and iterate q = M^{3/2} G / l
  // with the Petviashvili factor M = <q, l q> / <q, G>. Modes with theta >= pi/2
  // (where l loses its sign) are dropped; the profile has no content there.
  std::vector<double> l(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double theta = dt * (rho[k] * rho[k] + 1.0);
    l[k] = theta < 0.5 * std::numbers::pi ? std::sin(theta) / dt : 0.0;
    q[k] = l[k] > 0.0 ? q[k].real() : 0.0;
  }
  const Complex rot = std::polar(1.0, -dt);
  double change = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const auto S = step_spectral(q, dt, 1.0, nullptr);
    std::vector<double> G(n);
    double num = 0.0, den = 0.0, qq = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (l[k] == 0.0) continue;
      const double F = ((rot * S[k] - q[k]) / Complex(0.0, dt)).real();
      G[k] = F + l[k] * q[k].real();
      num += w[k] * l[k] * std::norm(q[k]);
      den += w[k] * q[k].real() * G[k];
      qq += w[k] * std::norm(q[k]);
    }
    require(den > 0.0, ErrorKind::CollapseToZero, "discrete_soliton: profile collapsed");
    const double m = std::pow(num / den, 1.5);
    double diff = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (l[k] == 0.0) continue;
      const double next = m * G[k] / l[k];
      diff += w[k] * std::pow(next - q[k].real(), 2);
      q[k] = next;
    }
    change = std::sqrt(diff / qq);
    if (change < tol) return hankel_transform(q);
  }
  std::ostringstream os;
  os << "discrete_soliton: no convergence after " << max_iter << " iterations (last change " << change << ")";
  fail(ErrorKind::NoConvergence, os.str());
}

double adaptive_dt(const RadialField& u, const SolverConfig& cfg) {
  const auto V = potential(to_side(u, Side::Physical));
  const double vmax = std::abs(cfg.coupling) * V.max_abs();
  const double dt = vmax > 0.0 ? cfg.c_cfl / vmax : cfg.dt_max;
  return std::clamp(dt, cfg.dt_min, cfg.dt_max);
}

EvolutionResult evolve(const RadialField& u0, const SolverConfig& cfg, const MonitorSink& sink) {
  validate(cfg);
  require_finite(u0, "evolve");
  auto spec = to_side(u0, Side::Spectral);
  const double rho_max = spec.grid().rho_max();
  const double mass0 = std::pow(sobolev_norm(spec, 0.0), 2);
  const double hh0 = sobolev_norm(spec, 0.5);

  EvolutionResult res(hankel_transform(spec));
  auto emit = [&](double t, double s_cum, double dt_used) {
    res.monitors.push_back(measure(spec, t, s_cum, dt_used, cfg));
    if (sink) sink(res.monitors.back());
  };
  auto store = [&](double t) { res.snapshots.push_back({t, hankel_transform(spec)}); };

  double t = 0.0, s_cum = 0.0, dt_used = cfg.dt;
  emit(0.0, 0.0, cfg.dt);
  if (cfg.record_fields_every) store(0.0);
  const double t_tol = 1e-12 * cfg.t_end;
  bool stopped = false;
  auto stop = [&](Verdict v, const std::string& why) {
    res.verdict = v;
    res.trigger = why;
    stopped = true;
  };

  while (t < cfg.t_end - t_tol) {
    double dt = cfg.dt;
    try {
      if (cfg.adapt) {
        dt = adaptive_dt(hankel_transform(spec), cfg);
        if (dt <= cfg.dt_min) {
          std::ostringstream os;
          os << "adaptive dt reached dt_min at t = " << t;
          stop(Verdict::SuspectedBlowup, os.str());
          break;
        }
      }
      dt = std::min(dt, cfg.t_end - t);
      double s_mid = 0.0;
      auto next = step_spectral(spec, dt, cfg.coupling, &s_mid);
      spec = std::move(next);
      s_cum += dt * s_mid;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NonFinite) throw;
      res.nonfinite = true;
      stop(Verdict::SuspectedBlowup, std::string("field became non-finite: ") + e.what());
      break;
    }
    t += dt;
    dt_used = dt;
    ++res.steps;

    const bool last = t >= cfg.t_end - t_tol;
    if (cfg.record_fields_every && res.steps % *cfg.record_fields_every == 0) store(t);
    if (res.steps % cfg.monitor_stride == 0 || last) emit(t, s_cum, dt_used);

    const double hh = sobolev_norm(spec, 0.5);
    std::ostringstream os;
    if (hh0 > 0.0 && hh > cfg.blowup_growth * hh0) {
      os << "hhalf grew by more than " << cfg.blowup_growth << " at t = " << t;
      stop(Verdict::SuspectedBlowup, os.str());
    } else if (hh > 0.0 && frequency_scale(spec) > cfg.frequency_cutoff * rho_max) {
      os << "frequency scale passed " << cfg.frequency_cutoff << " rho_max at t = " << t;
      stop(Verdict::SuspectedBlowup, os.str());
    } else if (mass0 > 0.0 && std::abs(std::pow(sobolev_norm(spec, 0.0), 2) - mass0) > cfg.mass_tolerance * mass0) {
      os << "relative mass drift above " << cfg.mass_tolerance << " at t = " << t;
      stop(Verdict::AccuracyLost, os.str());
    }
    if (stopped) {
      if (res.monitors.back().t != t) emit(t, s_cum, dt_used);
      break;
    }
  }
  res.t_final = t;
  res.final_field = hankel_transform(spec);
  return res;
}

double scattering_diagnostic(const std::vector<Snapshot>& trajectory) {
  require(trajectory.size() >= 3, ErrorKind::InsufficientSamples,
          "scattering_diagnostic needs at least 3 stored fields, got " + std::to_string(trajectory.size()));
  std::vector<RadialField> w;
  w.reserve(trajectory.size());
  for (const auto& s : trajectory) {
    auto spec = to_side(s.field, Side::Spectral);
    free_phase(spec, -s.t);
    w.push_back(std::move(spec));
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = i + 1; j < w.size(); ++j) worst = std::max(worst, sobolev_norm(w[i] - w[j], 0.5));
  return worst;
}

}  // namespace hartree

// acceptance: runs the twelve acceptance criteria and prints one PASS/FAIL line
// per criterion. Exit status 0 when all pass, 4 otherwise. Optional arguments
// select criteria by number.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

#include "hartree/constants.hpp"
#include "hartree/diagnostics.hpp"
#include "hartree/evolution.hpp"
#include "hartree/functionals.hpp"
#include "hartree/ground_state.hpp"
#include "hartree/spectral.hpp"
#include "oracles/quadrature.hpp"
#include "scenarios.hpp"

using namespace hartree;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string sci(double x) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << x;
  return os.str();
}

std::string fix(double x, int digits = 4) {
  std::ostringstream os;
  os << std::setprecision(digits) << std::fixed << x;
  return os.str();
}

double max_diff(const RadialField& a, const RadialField& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

RadialField gaussian(const RadialGrid& g, double sigma, double amp = 1.0, double chirp = 0.0) {
  return RadialField::sample(g, [=](double r) { return amp * std::exp(Complex(-r * r / (2 * sigma * sigma), chirp * r * r)); });
}

const RadialGrid kDefault(4096, 40.0);

// Shared expensive results, computed on first use.
const GroundStateResult& ground_state() {
  static const auto Q = solve_ground_state(RadialGrid(kGroundStateNodes, kGroundStateRadius));
  return Q;
}

const GroundStateResult& soliton() {
  static const auto S = solve_soliton_profile(kDefault);
  return S;
}

const EvolutionResult& soliton_run() {
  static const auto run = [] {
    SolverConfig c;
    c.dt = 1e-3;
    c.t_end = 5.0;
    c.monitor_stride = 50;
    c.monitor_virial = false;
    c.record_fields_every = 50;
    return evolve(discrete_soliton(soliton().profile, c.dt), c);
  }();
  return run;
}

// hhalf0 at 0.45 of the scattering threshold
const EvolutionResult& small_data_run() {
  static const auto run = [] {
    const auto base = gaussian(kDefault, 1.0);
    const double c = 0.45 * *ground_state().threshold_scattering / sobolev_norm(base, 0.5);
    SolverConfig s;
    s.dt = 1e-3;
    s.t_end = 3.0;
    s.monitor_stride = 100;
    s.monitor_virial = false;
    s.record_fields_every = 20;
    return evolve(Complex(c) * base, s);
  }();
  return run;
}

Outcome transform_fidelity() {
  double trip = 0.0, self = 0.0, parseval = 0.0;
  for (double sigma : {0.5, 1.0, 2.0}) {
    const auto f = gaussian(kDefault, sigma);
    const auto spec = hankel_transform(f);
    trip = std::max(trip, max_diff(hankel_transform(spec), f) / f.max_abs());
    const double s5 = std::pow(sigma, 5);
    const auto exact = RadialField::sample(kDefault, [=](double rho) { return s5 * std::exp(-sigma * sigma * rho * rho / 2); }, Side::Spectral);
    self = std::max(self, max_diff(spec, exact) / exact.max_abs());
    parseval = std::max(parseval, std::abs(sobolev_norm(spec, 0.0) / lp_norm(f, 2.0) - 1.0));
  }
  return {trip < 1e-9 && self < 1e-8 && parseval < 1e-10,
          "round trip " + sci(trip) + " (< 1e-9), self-map " + sci(self) + " (< 1e-8), Parseval " + sci(parseval) + " (< 1e-10)"};
}

Outcome riesz_pin() {
  // dr = 0.01 puts r = 1, 2, 4 on nodes; 0+ is the first node
  const RadialGrid fine(4096, 40.97);
  const auto V = hartree_convolution(gaussian(fine, 1.0));
  auto g = [](double s) { return std::exp(-s * s / 2); };
  double worst = 0.0;
  for (std::size_t j : {1u, 100u, 200u, 400u}) {
    const double q = oracle::riesz_potential(g, fine.r(j - 1), 14.0);
    worst = std::max(worst, std::abs(V[j - 1].real() / q - 1.0));
  }
  return {worst < 1e-6, "max relative deviation from 2-D quadrature at r = 0+, 1, 2, 4: " + sci(worst) + " (< 1e-6)"};
}

Outcome ground_state_identities() {
  const auto& Q = ground_state();
  bool pass = true;
  std::string failed;
  for (const auto& c : check_invariants(Q))
    if (!c.pass) {
      pass = false;
      failed += std::string(" ") + c.name;
    }
  const double h1sq = Q.h1_norm * Q.h1_norm, hhsq = Q.hhalf_norm * Q.hhalf_norm;
  const double el = Q.el_residual / Q.hhalf_norm;
  const double kin = std::abs(h1sq - hhsq) / hhsq;
  const double poh = std::abs(Q.potential - 2 * h1sq) / (2 * h1sq);
  const double en = std::abs(energy(Q.spectrum)) / h1sq;
  const double jc = std::abs(weinstein(Q.spectrum) * Q.sharp_constant - 1.0);
  const auto Q2 = solve_ground_state(RadialGrid(2 * kGroundStateNodes, 2 * kGroundStateRadius));
  const double dbl = std::abs(Q2.hhalf_norm / Q.hhalf_norm - 1.0);
  pass = pass && el < 1e-9 && kin < 1e-6 && poh < 1e-6 && en < 1e-6 && jc < 1e-8 && dbl < 1e-4;
  return {pass, "el " + sci(el) + ", kinetic " + sci(kin) + ", Pohozaev " + sci(poh) + ", E " + sci(en) + ", |J C5 - 1| " + sci(jc) +
                    ", grid doubling " + sci(dbl) + (failed.empty() ? "" : "; failed invariants:" + failed)};
}

Outcome sharpness() {
  const auto& Q = ground_state();
  double worst = 0.0;
  for (const auto& f : cli::random_corpus(kDefault, 50, 2024)) worst = std::max(worst, hls_ratio(f) / Q.sharp_constant);
  const double at_q = std::abs(hls_ratio(Q.spectrum) / Q.sharp_constant - 1.0);
  return {worst <= 1 + 1e-4 && at_q < 1e-8,
          "max ratio / C5 over 50 fields " + fix(worst, 6) + " (<= 1 + 1e-4), |ratio(Q) / C5 - 1| " + sci(at_q) + " (< 1e-8)"};
}

Outcome soliton_stationarity() {
  const auto& S = soliton();
  const auto& run = soliton_run();
  const double peak = S.profile.max_abs();
  double sup = 0.0;
  // unwrapped phase at the origin node, fitted against t
  double prev = 0.0, turns = 0.0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < run.snapshots.size(); ++k) {
    const auto& s = run.snapshots[k];
    for (std::size_t i = 0; i < s.field.size(); ++i) sup = std::max(sup, std::abs(std::abs(s.field[i]) - S.profile[i].real()));
    double ph = std::arg(s.field[0]);
    if (k > 0) {
      while (ph + turns - prev > std::numbers::pi) turns -= 2 * std::numbers::pi;
      while (ph + turns - prev < -std::numbers::pi) turns += 2 * std::numbers::pi;
    }
    ph += turns;
    prev = ph;
    sx += s.t;
    sy += ph;
    sxx += s.t * s.t;
    sxy += s.t * ph;
  }
  const double n = static_cast<double>(run.snapshots.size());
  const double rate = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const auto& m = run.monitors;
  const double mass = std::abs(m.back().mass / m.front().mass - 1.0);
  const double en = std::abs(m.back().energy / m.front().energy - 1.0);
  const bool pass = run.verdict == Verdict::Completed && run.t_final >= 5.0 - 1e-9 && sup / peak < 1e-4 &&
                    std::abs(rate - 1.0) < 1e-3 && mass < 1e-10 && en < 1e-6;
  return {pass, "sup | |u| - Qbar | / |Qbar| " + sci(sup / peak) + " (< 1e-4), phase rate " + fix(rate, 7) + " (1 +- 1e-3), mass drift " +
                    sci(mass) + " (< 1e-10), energy drift " + sci(en) + " (< 1e-6)"};
}

Outcome virial_identity() {
  SolverConfig c;
  c.dt = 1e-3;
  c.t_end = 1.0;
  c.monitor_stride = 5;
  c.virial_R = 20.0;
  const auto run = evolve(gaussian(kDefault, 1.0, 0.6, 0.25), c);
  const auto samples = cli::virial_samples(run.monitors);
  double worst = 0.0, err = 0.0;
  for (const auto& s : samples) {
    worst = std::max(worst, s.rel_diff);
    err = std::max(err, s.err_ratio);
  }
  return {samples.size() >= 20 && worst < 1e-3 && err < 1e-10,
          std::to_string(samples.size()) + " samples (>= 20), max |dM_a/dt - total| / |total| " + sci(worst) +
              " (< 1e-3), max error term / |main| " + sci(err) + " (< 1e-10)"};
}

Outcome localized_mass_law() {
  const auto& run = small_data_run();
  double rate_R = 0.0, rate_2R = 0.0;
  for (std::size_t i = 1; i < run.snapshots.size(); ++i) {
    const auto& a = run.snapshots[i - 1];
    const auto& b = run.snapshots[i];
    const double h = b.t - a.t;
    rate_R = std::max(rate_R, std::abs(localized_mass(b.field, 4.0) - localized_mass(a.field, 4.0)) / h);
    rate_2R = std::max(rate_2R, std::abs(localized_mass(b.field, 8.0) - localized_mass(a.field, 8.0)) / h);
  }
  const double ratio = rate_R / rate_2R;
  return {run.verdict == Verdict::Completed && ratio >= 1.5 && ratio <= 3.0,
          "max |dM_R/dt| at R = 4 over R = 8: " + fix(ratio) + " (in [1.5, 3])"};
}

Outcome dispersive_decay() {
  const RadialGrid g(8192, 1000.0);
  const auto fit = dispersive_fit(gaussian(g, 0.5), 1.0, 30.0, 16);
  return {std::abs(fit.exponent + 2.5) <= 0.05 && fit.r2 > 0.999,
          "exponent " + fix(fit.exponent) + " (-2.5 +- 0.05), r2 " + fix(fit.r2, 7) + " (> 0.999); width-1/2 Gaussian, t in [1, 30]"};
}

Outcome bernstein_uniformity() {
  const RadialGrid g(65536, 40.0);
  const auto rows = bernstein_suite(gaussian(g, 0.002), {{2, 2, 0.5}, {2, 4, 1.0}, {2, 4, 0.0}});
  const auto scales = dyadic_range(g);
  bool s_ok = true;
  double lo = INFINITY, hi = 0.0, s_min = INFINITY, s_max = 0.0;
  for (const auto& r : rows) {
    if (r.s != 0.0) {
      const double x = std::pow(r.s_ratio, 1.0 / r.s);
      s_min = std::min(s_min, x);
      s_max = std::max(s_max, x);
      s_ok = s_ok && r.s_ratio >= std::pow(0.5, r.s) * (1 - 1e-12) && r.s_ratio <= std::pow(1.1, r.s) * (1 + 1e-12);
    }
    if (r.p == 2 && r.q == 4) {
      lo = std::min(lo, r.pq_ratio);
      hi = std::max(hi, r.pq_ratio);
    }
  }
  return {s_ok && scales.size() >= 10 && hi / lo < 10.0,
          "s-ratio^(1/s) in [" + fix(s_min) + ", " + fix(s_max) + "] (within [0.5, 1.1]), (2,4) max/min " + fix(hi / lo) +
              " (< 10) over " + std::to_string(scales.size()) + " scales (>= 10)"};
}

Outcome splitting_order() {
  const auto u = gaussian(kDefault, 1.0, 0.5);
  auto run = [&](double dt) {
    SolverConfig c;
    c.dt = c.dt_min = c.dt_max = dt;
    c.t_end = 1.0;
    c.monitor_stride = 1 << 30;
    c.monitor_virial = false;
    return evolve(u, c).final_field;
  };
  const auto a = run(0.02), b = run(0.01), c = run(0.005);
  const double ratio = max_diff(a, b) / max_diff(b, c);
  return {std::abs(ratio - 4.0) <= 0.5, "error ratio per halving at t = 1: " + fix(ratio, 3) + " (4 +- 0.5)"};
}

Outcome threshold_probe() {
  const auto& small = small_data_run();
  const auto& m = small.monitors;
  double max_hh = 0.0;
  bool late_decreasing = true;
  for (std::size_t i = 0; i < m.size(); ++i) {
    max_hh = std::max(max_hh, m[i].hhalf);
    if (i > 0 && m[i].t >= 1.0) late_decreasing = late_decreasing && m[i].s_density < m[i - 1].s_density;
  }
  bool windows_decreasing = true;
  double prev = INFINITY;
  int windows = 0;
  for (std::size_t start = 0; start + 10 <= small.snapshots.size(); start += 10, ++windows) {
    const std::vector<Snapshot> w(small.snapshots.begin() + static_cast<long>(start), small.snapshots.begin() + static_cast<long>(start) + 10);
    const double d = scattering_diagnostic(w);
    windows_decreasing = windows_decreasing && d < prev;
    prev = d;
  }
  const double ratio0 = m.front().hhalf / *ground_state().threshold_scattering;
  const bool bounded = max_hh <= 1.2 * m.front().hhalf;
  const bool sub_ok = small.verdict == Verdict::Completed && ratio0 <= 0.5 && bounded && late_decreasing && windows_decreasing;

  SolverConfig c;
  c.dt = 1e-3;
  c.t_end = 1.0;
  c.adapt = true;
  c.dt_min = 1e-6;
  c.monitor_stride = 20;
  c.monitor_virial = false;
  const auto focus = evolve(gaussian(kDefault, 1.0, 3.0 * soliton().profile[0].real()), c);
  bool monotone = true;
  for (std::size_t i = 1; i < focus.monitors.size(); ++i) monotone = monotone && focus.monitors[i].n_of_t > focus.monitors[i - 1].n_of_t;
  const bool focus_ok = focus.verdict == Verdict::SuspectedBlowup && monotone;

  return {sub_ok && focus_ok,
          "sub-threshold (hhalf0 = " + fix(ratio0, 2) + " threshold): " + to_string(small.verdict) + ", max hhalf / initial " +
              fix(max_hh / m.front().hhalf) + ", late s_density decreasing " + (late_decreasing ? "yes" : "no") +
              ", scattering diagnostic decreasing over " + std::to_string(windows) + " windows " + (windows_decreasing ? "yes" : "no") +
              "; focusing: " + to_string(focus.verdict) + " (" + focus.trigger + "), N(t) " + fix(focus.monitors.front().n_of_t, 2) +
              " -> " + fix(focus.monitors.back().n_of_t, 2) + (monotone ? " monotone" : " NOT monotone")};
}

Outcome scenario_three() {
  const auto& m = soliton_run().monitors;
  double lo = INFINITY, hi = 0.0;
  for (const auto& r : m) {
    lo = std::min(lo, r.n_of_t);
    hi = std::max(hi, r.n_of_t);
  }
  const double n0 = m.front().n_of_t;
  const double dev = std::max(hi / n0 - 1.0, 1.0 - lo / n0);
  return {dev <= 0.02 && m.back().t >= 5.0 - 1e-9,
          "frequency scale " + fix(n0, 6) + ", max relative deviation over t in [0, 5] " + sci(dev) + " (<= 2%)"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria: one PASS/FAIL line each"};
  std::vector<int> only;
  app.add_option("criteria", only, "criterion numbers to run (default: all)")->check(CLI::Range(1, 12));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"transform fidelity", transform_fidelity},
      {"Riesz constant pin", riesz_pin},
      {"ground-state identity suite", ground_state_identities},
      {"sharpness of the Hartree inequality", sharpness},
      {"soliton stationarity", soliton_stationarity},
      {"virial identity", virial_identity},
      {"localized-mass 1/R law", localized_mass_law},
      {"dispersive decay", dispersive_decay},
      {"Bernstein uniformity", bernstein_uniformity},
      {"splitting order", splitting_order},
      {"behavioral threshold probe", threshold_probe},
      {"frequency scale along the soliton", scenario_three},
  };
  const std::set<int> selected(only.begin(), only.end());
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!selected.empty() && !selected.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    all = all && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << std::setw(2) << id << "] " << criteria[i].first << ": " << o.detail << "  ("
              << fix(secs, 1) << " s)" << std::endl;
  }
  return all ? cli::kExitSuccess : cli::kExitCheckFailed;
}

#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hartree/functionals.hpp"
#include "hartree/radial_field.hpp"

namespace hartree {

struct SolverConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  bool adapt = false;
  double dt_min = 1e-7;
  double dt_max = 1e-2;
  double c_cfl = 0.1;               // nonlinear phase rotation per adaptive step, radians
  int monitor_stride = 10;
  double virial_R = 10.0;
  double mass_R = 5.0;
  std::optional<int> record_fields_every;
  double coupling = 1.0;            // 0 gives the free flow
  bool monitor_virial = true;       // the convolution error term dominates monitor cost
  VirialOptions virial;
  double blowup_growth = 1e3;       // hhalf / hhalf(0) that signals blowup
  double frequency_cutoff = 0.5;    // N(t) / rho_max that signals blowup
  double mass_tolerance = 1e-6;     // relative mass drift beyond which accuracy is declared lost
};

/// RangeError naming the first offending field.
void validate(const SolverConfig& cfg);

struct MonitorRecord {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double hhalf = 0.0;
  double h1 = 0.0;
  double m_a = 0.0;
  VirialBreakdown virial;
  double m_r = 0.0;
  double s_density = 0.0;
  double s_cumulative = 0.0;
  double n_of_t = 0.0;
  double dt_used = 0.0;
};

inline constexpr const char* kMonitorHeader =
    "t,mass,energy,hhalf,h1,m_a,virial_main,virial_err_mass,virial_err_grad,virial_err_conv,m_r,s_density,"
    "s_cumulative,n_of_t,dt_used";

void write_monitor_row(std::ostream& os, const MonitorRecord& m);

enum class Verdict { Completed, SuspectedBlowup, AccuracyLost };
const char* to_string(Verdict v) noexcept;

struct Snapshot {
  double t;
  RadialField field;  // physical side
};

struct EvolutionResult {
  explicit EvolutionResult(RadialField f) : final_field(std::move(f)) {}

  RadialField final_field;  // physical side
  double t_final = 0.0;
  long steps = 0;
  std::vector<MonitorRecord> monitors;
  std::vector<Snapshot> snapshots;
  Verdict verdict = Verdict::Completed;
  std::string trigger;      // why the run stopped early; empty when completed
  bool nonfinite = false;
};

/// One Strang step for i u_t + Delta u = -coupling (|x|^-3 * |u|^2) u: half free
/// step, exact nonlinear phase exp(i dt coupling V), half free step.
RadialField strang_step(const RadialField& u, double dt, double coupling = 1.0);

/// Relative equilibrium of the Strang map at step dt: the real q near the
/// soliton profile with strang_step(q, dt) = e^{i dt} q. The profile solves the
/// continuous equation, whose e^{it} orbit is linearly unstable; the splitting
/// defect of O(dt^2) would seed that instability, the discrete equilibrium does
/// not. Returns a physical field; throws NoConvergence.
RadialField discrete_soliton(const RadialField& profile, double dt, double tol = 1e-13, int max_iter = 300);

/// clamp(c_cfl / ||coupling V||_inf, dt_min, dt_max).
double adaptive_dt(const RadialField& u, const SolverConfig& cfg);

using MonitorSink = std::function<void(const MonitorRecord&)>;

/// Integrates to t_end or an early stop; a record is emitted at t = 0, every
/// monitor_stride steps and at the final time. The verdicts are numerical
/// proxies: SuspectedBlowup when hhalf grows by blowup_growth, when the
/// frequency scale passes frequency_cutoff * rho_max, when adaptive dt reaches dt_min or when
/// the field stops being finite; AccuracyLost when mass drifts beyond mass_tolerance.
EvolutionResult evolve(const RadialField& u0, const SolverConfig& cfg, const MonitorSink& sink = {});

/// max over stored pairs of || e^{-i t_i Delta} u(t_i) - e^{-i t_j Delta} u(t_j) ||_{H^1/2}.
/// InsufficientSamples below 3 snapshots.
double scattering_diagnostic(const std::vector<Snapshot>& trajectory);

}  // namespace hartree

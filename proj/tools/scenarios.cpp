#include "scenarios.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "hartree/constants.hpp"
#include "hartree/diagnostics.hpp"
#include "hartree/functionals.hpp"
#include "hartree/spectral.hpp"

namespace hartree::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kManifest = "manifest.json";

std::ofstream open_out(const fs::path& path) {
  fs::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) fail(ErrorKind::IoError, "cannot write '" + path.string() + "'");
  return os;
}

void write_json(const fs::path& path, const json& j) {
  auto os = open_out(path);
  os << j.dump(2) << '\n';
}

// JSON has no inf/nan; they become null.
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json grid_json(const RadialGrid& g) { return {{"n", g.size()}, {"r_max", g.r_max()}}; }

json header(const ScenarioConfig& cfg) {
  return {{"command", to_string(*cfg.command)}, {"seed", cfg.seed}, {"constants", constants_json()}};
}

json invariants_json(const std::vector<InvariantCheck>& checks, bool& all_pass) {
  json arr = json::array();
  all_pass = true;
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name}, {"value", num(c.value)}, {"bound", num(c.bound)}, {"pass", c.pass}});
    all_pass = all_pass && c.pass;
  }
  return arr;
}

json profile_json(const GroundStateResult& r) {
  json j = {{"grid", grid_json(r.profile.grid())},
            {"hhalf_norm", r.hhalf_norm},
            {"h1_norm", r.h1_norm},
            {"potential", r.potential},
            {"el_residual", r.el_residual},
            {"tolerance", r.tolerance},
            {"stabilizer", r.stabilizer},
            {"iterations", r.iterations},
            {"used_fallback", r.used_fallback},
            {"rescale", {{"a", r.rescale_a}, {"b", r.rescale_b}}},
            {"peak", r.profile[0].real()}};
  if (r.kind == ProfileKind::NewGroundState) j["sharp_constant"] = r.sharp_constant;
  if (r.threshold_scattering) j["threshold_scattering"] = *r.threshold_scattering;
  if (r.threshold_global) j["threshold_global"] = *r.threshold_global;
  return j;
}

void write_history(const fs::path& path, const std::vector<double>& history) {
  auto os = open_out(path);
  os << "iteration,increment\n" << std::setprecision(17);
  for (std::size_t i = 0; i < history.size(); ++i) os << i + 1 << ',' << history[i] << '\n';
}

int run_profile(const ScenarioConfig& cfg, ProfileKind kind, std::ostream& log) {
  const fs::path out = cfg.out;
  const bool gs = kind == ProfileKind::NewGroundState;
  const RadialGrid grid = gs ? RadialGrid(cfg.gs_grid.n, cfg.gs_grid.r_max) : RadialGrid(cfg.grid.n, cfg.grid.r_max);
  log << (gs ? "ground state" : "soliton profile") << " on n = " << grid.size() << ", r_max = " << grid.r_max() << '\n';
  const auto res = gs ? solve_ground_state(grid, cfg.gs) : solve_soliton_profile(grid, cfg.gs);
  log << "converged in " << res.iterations << " iterations, ||Q||_H1/2 = " << res.hhalf_norm << '\n';

  auto checks = check_invariants(res);
  std::vector<InvariantCheck> extra;
  json probe;
  if (gs && cfg.corpus_size > 0) {
    // sharpness of the Hartree inequality: no field beats C5, Q attains it
    const RadialGrid cg(cfg.grid.n, cfg.grid.r_max);
    double worst = 0.0;
    for (const auto& f : random_corpus(cg, cfg.corpus_size, cfg.seed)) worst = std::max(worst, hls_ratio(f) / res.sharp_constant);
    const double at_q = std::abs(hls_ratio(res.spectrum) / res.sharp_constant - 1.0);
    checks.push_back({"sharpness_corpus", worst, 1.0 + 1e-4, worst <= 1.0 + 1e-4});
    checks.push_back({"sharpness_at_Q", at_q, 1e-8, at_q <= 1e-8});
    probe = {{"fields", cfg.corpus_size}, {"grid", grid_json(cg)}, {"max_ratio_over_C5", worst}};
  }
  bool all_pass = true;
  json summary = header(cfg);
  summary["profile"] = profile_json(res);
  summary["invariants"] = invariants_json(checks, all_pass);
  summary["all_pass"] = all_pass;
  if (!probe.is_null()) summary["sharpness_probe"] = probe;

  const std::string stem = gs ? "Q" : "Qbar";
  write_field((out / (stem + ".field")).string(), res.profile);
  write_history(out / (stem + "_history.csv"), res.history);
  write_json(out / (gs ? "gs_summary.json" : "soliton_summary.json"), summary);
  for (const auto& c : checks)
    if (!c.pass) log << "invariant " << c.name << " failed: " << c.value << " > " << c.bound << '\n';
  return all_pass ? kExitSuccess : kExitCheckFailed;
}

double max_of(const std::vector<MonitorRecord>& m, double MonitorRecord::*field) {
  double x = 0.0;
  for (const auto& r : m) x = std::max(x, r.*field);
  return x;
}

json evolution_json(const EvolutionResult& r) {
  double lo = INFINITY, hi = 0.0;
  for (const auto& m : r.monitors) {
    lo = std::min(lo, m.hhalf);
    hi = std::max(hi, m.hhalf);
  }
  const auto& first = r.monitors.front();
  const auto& last = r.monitors.back();
  return {{"verdict", to_string(r.verdict)},
          {"trigger", r.trigger},
          {"t_final", r.t_final},
          {"steps", r.steps},
          {"nonfinite", r.nonfinite},
          {"records", r.monitors.size()},
          {"hhalf_initial", first.hhalf},
          {"hhalf_max", hi},
          {"hhalf_relative_variation", hi > 0.0 ? (hi - lo) / hi : 0.0},
          {"mass_drift", first.mass > 0.0 ? std::abs(last.mass / first.mass - 1.0) : 0.0},
          {"energy_drift", first.energy != 0.0 ? std::abs(last.energy / first.energy - 1.0) : 0.0},
          {"s_cumulative", last.s_cumulative},
          {"n_of_t_max", max_of(r.monitors, &MonitorRecord::n_of_t)}};
}

EvolutionResult evolve_to_csv(const RadialField& u0, const SolverConfig& solver, const fs::path& csv) {
  auto os = open_out(csv);
  os << kMonitorHeader << '\n';
  auto r = evolve(u0, solver, [&](const MonitorRecord& m) { write_monitor_row(os, m); });
  if (!os) fail(ErrorKind::IoError, "write to '" + csv.string() + "' failed");
  return r;
}

// Ground state needed by the initial data or by threshold comparisons.
std::optional<GroundStateResult> ground_state_if(const ScenarioConfig& cfg, bool needed, std::ostream& log) {
  if (!needed) return std::nullopt;
  log << "ground state on n = " << cfg.gs_grid.n << ", r_max = " << cfg.gs_grid.r_max << '\n';
  return solve_ground_state(RadialGrid(cfg.gs_grid.n, cfg.gs_grid.r_max), cfg.gs);
}

int run_evolve(const ScenarioConfig& cfg, std::ostream& log) {
  const fs::path out = cfg.out;
  const RadialGrid grid(cfg.grid.n, cfg.grid.r_max);
  const auto Q = ground_state_if(cfg, cfg.initial.kind == InitialData::Kind::GroundStateQ, log);
  const auto u0 = make_initial(cfg, grid, Q ? &*Q : nullptr);
  log << "evolving to t = " << cfg.solver.t_end << '\n';
  const auto r = evolve_to_csv(u0, cfg.solver, out / "monitors.csv");
  write_field((out / "final.field").string(), r.final_field);

  json summary = header(cfg);
  summary["grid"] = grid_json(grid);
  summary["run"] = evolution_json(r);
  if (Q) summary["run"]["hhalf_ratio"] = r.monitors.front().hhalf / *Q->threshold_scattering;
  if (!r.snapshots.empty()) {
    fs::create_directories(out / "fields");
    auto idx = open_out(out / "snapshots.csv");
    idx << "index,t,file\n" << std::setprecision(17);
    for (std::size_t i = 0; i < r.snapshots.size(); ++i) {
      std::ostringstream name;
      name << "fields/snapshot_" << std::setw(5) << std::setfill('0') << i << ".field";
      write_field((out / name.str()).string(), r.snapshots[i].field);
      idx << i << ',' << r.snapshots[i].t << ',' << name.str() << '\n';
    }
    if (r.snapshots.size() >= 3) summary["run"]["scattering_diagnostic"] = scattering_diagnostic(r.snapshots);
  }
  write_json(out / "evolve_summary.json", summary);
  log << "verdict " << to_string(r.verdict) << (r.trigger.empty() ? "" : " (" + r.trigger + ")") << '\n';
  return kExitSuccess;
}

int run_scan(const ScenarioConfig& cfg, std::ostream& log) {
  const fs::path out = cfg.out;
  const RadialGrid grid(cfg.grid.n, cfg.grid.r_max);
  const auto Q = ground_state_if(cfg, true, log);
  const auto u0 = make_initial(cfg, grid, &*Q);
  log << "scanning " << cfg.scan.scales.size() << " scales on " << cfg.threads << " threads\n";
  const auto rows = threshold_scan(u0, cfg.scan.scales, cfg.solver, *Q->threshold_scattering, cfg.threads, out / "scan");

  auto os = open_out(out / "scan.csv");
  os << "c,hhalf_ratio,verdict,t_final,s_cumulative,max_hhalf,max_n_of_t,trigger\n" << std::setprecision(17);
  json table = json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    os << r.c << ',' << r.hhalf_ratio << ',' << to_string(r.verdict) << ',' << r.t_final << ',' << r.s_cumulative << ','
       << r.max_hhalf << ',' << r.max_n_of_t << ",\"" << r.trigger << "\"\n";
    table.push_back({{"c", r.c}, {"hhalf_ratio", r.hhalf_ratio}, {"verdict", to_string(r.verdict)}, {"run", "scan/run_" + std::to_string(i)}});
  }
  const auto anomalies = scan_anomalies(rows);
  for (auto i : anomalies) log << "anomaly: verdict returns to Completed at c = " << rows[i].c << '\n';
  json summary = header(cfg);
  summary["grid"] = grid_json(grid);
  summary["thresholds"] = {{"scattering", *Q->threshold_scattering}, {"global", *Q->threshold_global}};
  summary["rows"] = table;
  summary["anomalies"] = anomalies;
  write_json(out / "scan_summary.json", summary);
  return kExitSuccess;
}

int run_virial(const ScenarioConfig& cfg, std::ostream& log) {
  const fs::path out = cfg.out;
  const RadialGrid grid(cfg.grid.n, cfg.grid.r_max);
  const auto Q = ground_state_if(cfg, cfg.initial.kind == InitialData::Kind::GroundStateQ, log);
  auto solver = cfg.solver;
  solver.monitor_virial = true;
  const auto r = evolve_to_csv(make_initial(cfg, grid, Q ? &*Q : nullptr), solver, out / "monitors.csv");
  const auto samples = virial_samples(r.monitors);

  auto os = open_out(out / "virial.csv");
  os << "t,m_a,fd,total,main,err_mass,err_grad,err_conv,rel_diff,err_ratio\n" << std::setprecision(17);
  double worst = 0.0, worst_err = 0.0;
  for (const auto& s : samples) {
    os << s.t << ',' << s.m_a << ',' << s.fd << ',' << s.total << ',' << s.main << ',' << s.err_mass << ',' << s.err_grad
       << ',' << s.err_conv << ',' << s.rel_diff << ',' << s.err_ratio << '\n';
    worst = std::max(worst, s.rel_diff);
    worst_err = std::max(worst_err, s.err_ratio);
  }
  const bool enough = static_cast<int>(samples.size()) >= cfg.virial.min_samples;
  const bool match = worst <= cfg.virial.tolerance;
  const bool plateau = !cfg.virial.expect_plateau || worst_err < 1e-10;
  const bool pass = enough && match && plateau && r.verdict == Verdict::Completed;

  json summary = header(cfg);
  summary["grid"] = grid_json(grid);
  summary["run"] = evolution_json(r);
  summary["virial_R"] = solver.virial_R;
  summary["samples"] = samples.size();
  summary["max_rel_diff"] = worst;
  summary["max_error_term_ratio"] = worst_err;
  summary["checks"] = {{"samples", enough}, {"fd_matches_total", match}, {"plateau", plateau}};
  summary["pass"] = pass;
  write_json(out / "virial_summary.json", summary);
  log << samples.size() << " samples, max relative difference " << worst << ", max error-term ratio " << worst_err << '\n';
  return pass ? kExitSuccess : kExitCheckFailed;
}

int run_dispersive(const ScenarioConfig& cfg, std::ostream& log) {
  const auto& d = cfg.dispersive;
  const RadialGrid grid(d.grid.n, d.grid.r_max);
  const double w = d.width;
  const auto f = RadialField::sample(grid, [w](double r) { return std::exp(-r * r / (2 * w * w)); });
  const auto fit = dispersive_fit(f, d.t_lo, d.t_hi, d.samples);
  auto os = open_out(fs::path(cfg.out) / "dispersive.csv");
  os << "t,sup\n" << std::setprecision(17);
  for (std::size_t i = 0; i < fit.times.size(); ++i) os << fit.times[i] << ',' << fit.sup_norms[i] << '\n';
  const bool pass = std::abs(fit.exponent - d.exponent) <= d.tolerance && fit.r2 > d.min_r2;
  json summary = header(cfg);
  summary["grid"] = grid_json(grid);
  summary["width"] = w;
  summary["window"] = {d.t_lo, d.t_hi};
  summary["exponent"] = fit.exponent;
  summary["r2"] = fit.r2;
  summary["expected"] = {{"exponent", d.exponent}, {"tolerance", d.tolerance}, {"min_r2", d.min_r2}};
  summary["pass"] = pass;
  write_json(fs::path(cfg.out) / "dispersive_summary.json", summary);
  log << "decay exponent " << fit.exponent << ", r2 " << fit.r2 << '\n';
  return pass ? kExitSuccess : kExitCheckFailed;
}

int run_bernstein(const ScenarioConfig& cfg, std::ostream& log) {
  const auto& b = cfg.bernstein;
  const RadialGrid grid(b.grid.n, b.grid.r_max);
  const double w = b.width;
  const auto f = RadialField::sample(grid, [w](double r) { return std::exp(-r * r / (2 * w * w)); });
  const auto rows = bernstein_suite(f, b.exponents);
  const auto scales = dyadic_range(grid);

  auto os = open_out(fs::path(cfg.out) / "bernstein.csv");
  os << "N,p,q,s,s_ratio,pq_ratio,low_pq_ratio\n" << std::setprecision(17);
  for (const auto& r : rows)
    os << r.N << ',' << r.p << ',' << r.q << ',' << r.s << ',' << r.s_ratio << ',' << r.pq_ratio << ',' << r.low_pq_ratio << '\n';

  json per = json::array();
  bool pass = static_cast<int>(scales.size()) >= b.min_scales;
  for (const auto& e : b.exponents) {
    double lo = INFINITY, hi = 0.0;
    bool s_ok = true, finite = true;
    const double s_lo = std::pow(e.s >= 0 ? 0.5 : 1.1, e.s), s_hi = std::pow(e.s >= 0 ? 1.1 : 0.5, e.s);
    for (const auto& r : rows) {
      if (r.p != e.p || r.q != e.q || r.s != e.s) continue;
      lo = std::min(lo, r.pq_ratio);
      hi = std::max(hi, r.pq_ratio);
      s_ok = s_ok && r.s_ratio >= s_lo * (1 - 1e-12) && r.s_ratio <= s_hi * (1 + 1e-12);
      finite = finite && std::isfinite(r.pq_ratio) && std::isfinite(r.low_pq_ratio) && r.low_pq_ratio > 0.0;
    }
    const bool band_ok = lo > 0.0 && hi / lo <= b.band;
    pass = pass && s_ok && finite && band_ok;
    per.push_back({{"p", num(e.p)}, {"q", num(e.q)}, {"s", e.s}, {"pq_min", num(lo)}, {"pq_max", num(hi)},
                   {"s_ratio_in_support_bounds", s_ok}, {"finite", finite}, {"band_ok", band_ok}});
  }
  json summary = header(cfg);
  summary["grid"] = grid_json(grid);
  summary["width"] = w;
  summary["scales"] = scales;
  summary["exponents"] = per;
  summary["pass"] = pass;
  write_json(fs::path(cfg.out) / "bernstein_summary.json", summary);
  log << rows.size() << " rows over " << scales.size() << " dyadic scales\n";
  return pass ? kExitSuccess : kExitCheckFailed;
}

}  // namespace

json constants_json() {
  return {{"sigma4", kSphere4}, {"riesz", kRieszConstant}, {"scattering_factor", kScatteringFactor}};
}

int exit_code(const Error& e) noexcept { return e.kind() == ErrorKind::ConfigError ? kExitConfig : kExitNumerical; }

RadialField resample(const RadialField& f, const RadialGrid& target) {
  const auto spec = to_side(f, Side::Spectral);
  const double r_max = f.grid().r_max();
  return RadialField::sample(target, [&](double r) { return r < r_max ? evaluate_opposite(spec, r) : Complex(0.0); });
}

RadialField make_initial(const ScenarioConfig& cfg, const RadialGrid& grid, const GroundStateResult* ground_state) {
  const auto& in = cfg.initial;
  RadialField u(grid, Side::Physical);
  switch (in.kind) {
    case InitialData::Kind::Gaussian: {
      const double w = in.width, a = in.amplitude, c = in.chirp;
      u = RadialField::sample(grid, [=](double r) { return a * std::exp(Complex(-r * r / (2 * w * w), c * r * r)); });
      break;
    }
    case InitialData::Kind::GroundStateQ:
      require(ground_state != nullptr, ErrorKind::RangeError, "make_initial: ground_state data needs a solved Q");
      u = ground_state->profile.grid() == grid ? ground_state->profile : resample(ground_state->spectrum, grid);
      break;
    case InitialData::Kind::Soliton: {
      // the equilibrium of the splitting at the configured step, not the continuous profile
      const auto S = solve_soliton_profile(grid, cfg.gs);
      u = discrete_soliton(S.profile, cfg.solver.dt);
      break;
    }
    case InitialData::Kind::FromFile: {
      u = to_side(read_field(in.path), Side::Physical);
      if (!(u.grid() == grid))
        fail(ErrorKind::ConfigError, "key 'initial.path': field grid (n = " + std::to_string(u.grid().size()) +
                                         ") does not match [grid]");
      break;
    }
  }
  return in.scale == 1.0 ? u : Complex(in.scale) * u;
}

std::vector<RadialField> random_corpus(const RadialGrid& g, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  // generate_canonical is specified exactly, unlike the distributions
  auto u = [&] { return std::generate_canonical<double, 53>(rng); };
  std::vector<RadialField> out;
  for (int k = 0; k < count; ++k) {
    RadialField f(g, Side::Physical);
    const int bumps = 1 + static_cast<int>(3 * u());
    for (int b = 0; b < bumps; ++b) {
      const double w = 0.5 + 2.0 * u(), a = 2.0 * u() - 0.5, c = u() - 0.5;
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double r2 = g.r(i) * g.r(i);
        f[i] += a * std::exp(-r2 / (w * w)) * std::polar(1.0, c * r2);
      }
    }
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<ScanRow> threshold_scan(const RadialField& u0, std::vector<double> scales, const SolverConfig& solver,
                                    double threshold_scattering, int threads, const fs::path& dir) {
  std::sort(scales.begin(), scales.end());
  std::vector<std::optional<ScanRow>> rows(scales.size());
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (std::size_t i = next++; i < scales.size(); i = next++) {
      try {
        const auto u = Complex(scales[i]) * u0;
        const auto r = dir.empty() ? evolve(u, solver) : evolve_to_csv(u, solver, dir / ("run_" + std::to_string(i)) / "monitors.csv");
        rows[i] = ScanRow{scales[i],
                          r.monitors.front().hhalf / threshold_scattering,
                          r.verdict,
                          r.trigger,
                          r.t_final,
                          r.monitors.back().s_cumulative,
                          max_of(r.monitors, &MonitorRecord::hhalf),
                          max_of(r.monitors, &MonitorRecord::n_of_t)};
      } catch (...) {
        std::lock_guard lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const auto n = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), scales.size());
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  if (first_error) std::rethrow_exception(first_error);
  std::vector<ScanRow> out;
  for (auto& r : rows) out.push_back(*r);
  return out;
}

std::vector<std::size_t> scan_anomalies(const std::vector<ScanRow>& rows) {
  std::vector<std::size_t> out;
  bool seen_blowup = false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].verdict == Verdict::SuspectedBlowup) seen_blowup = true;
    else if (rows[i].verdict == Verdict::Completed && seen_blowup) {
      for (std::size_t j = i + 1; j < rows.size(); ++j)
        if (rows[j].verdict == Verdict::SuspectedBlowup) {
          out.push_back(i);
          break;
        }
    }
  }
  return out;
}

std::vector<VirialSample> virial_samples(const std::vector<MonitorRecord>& m) {
  std::vector<VirialSample> out;
  for (std::size_t i = 1; i + 1 < m.size(); ++i) {
    const double h1 = m[i].t - m[i - 1].t, h2 = m[i + 1].t - m[i].t;
    if (std::abs(h1 - h2) > 1e-9 * std::max(h1, h2)) continue;
    const auto& v = m[i].virial;
    const double fd = (m[i + 1].m_a - m[i - 1].m_a) / (h1 + h2);
    const double scale = std::max(std::abs(fd), std::abs(v.total));
    const double errs = std::max({std::abs(v.err_mass), std::abs(v.err_grad), std::abs(v.err_conv)});
    out.push_back({m[i].t, m[i].m_a, fd, v.total, v.main, v.err_mass, v.err_grad, v.err_conv,
                   scale > 0.0 ? std::abs(fd - v.total) / scale : 0.0, v.main != 0.0 ? errs / std::abs(v.main) : 0.0});
  }
  return out;
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::IoError, "cannot read '" + path.string() + "'");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::vector<char> buf(1 << 16);
  while (in.read(buf.data(), static_cast<std::streamsize>(buf.size())) || in.gcount() > 0)
    EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return hex.str();
}

void write_manifest(const fs::path& dir, const json& head) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file() && e.path().filename() != kManifest) files.push_back(fs::relative(e.path(), dir));
  std::sort(files.begin(), files.end());
  json list = json::array();
  for (const auto& f : files)
    list.push_back({{"path", f.generic_string()}, {"bytes", fs::file_size(dir / f)}, {"sha256", sha256_file(dir / f)}});
  json j = head;
  j["files"] = list;
  write_json(dir / kManifest, j);
}

int run(const ScenarioConfig& cfg, std::ostream& log) {
  require(cfg.command.has_value(), ErrorKind::ConfigError, "no command given (set run.command or pass a subcommand)");
  validate(cfg);
  std::error_code ec;
  fs::create_directories(cfg.out, ec);
  if (ec || !fs::is_directory(cfg.out)) fail(ErrorKind::ConfigError, "key 'run.out': cannot create directory '" + cfg.out + "'");

  int code = kExitSuccess;
  switch (*cfg.command) {
    case Command::GroundState: code = run_profile(cfg, ProfileKind::NewGroundState, log); break;
    case Command::Soliton: code = run_profile(cfg, ProfileKind::Soliton, log); break;
    case Command::Evolve: code = run_evolve(cfg, log); break;
    case Command::ThresholdScan: code = run_scan(cfg, log); break;
    case Command::VirialCheck: code = run_virial(cfg, log); break;
    case Command::DispersiveCheck: code = run_dispersive(cfg, log); break;
    case Command::BernsteinCheck: code = run_bernstein(cfg, log); break;
  }
  auto head = header(cfg);
  head["exit_code"] = code;
  write_manifest(cfg.out, head);
  return code;
}

void record_failure(const ScenarioConfig& cfg, const Error& e) {
  std::error_code ec;
  if (!fs::is_directory(cfg.out, ec)) return;
  json j = {{"error", {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}}}};
  if (const auto* ce = dynamic_cast<const ConvergenceError*>(&e)) j["error"]["history"] = ce->history();
  write_json(fs::path(cfg.out) / "error.json", j);
  json head = {{"command", cfg.command ? to_string(*cfg.command) : "none"}, {"seed", cfg.seed}, {"constants", constants_json()}, {"exit_code", exit_code(e)}};
  write_manifest(cfg.out, head);
}

}  // namespace hartree::cli

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"

namespace hartree::cli {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitCheckFailed = 4;

/// Runs cfg.command, writing every artifact and finally manifest.json into
/// cfg.out. Module errors propagate; the return value is kExitSuccess or
/// kExitCheckFailed. Progress lines go to `log`.
int run(const ScenarioConfig& cfg, std::ostream& log);

/// Writes error.json for a failed run and refreshes the manifest.
void record_failure(const ScenarioConfig& cfg, const Error& e);

/// Maps an error to its process exit code.
int exit_code(const Error& e) noexcept;

/// Initial data on `grid` as configured; ground_state is used (and required)
/// for kind = ground_state.
RadialField make_initial(const ScenarioConfig& cfg, const RadialGrid& grid, const GroundStateResult* ground_state = nullptr);

/// The physical profile of f evaluated at the nodes of `target` through f's
/// spectrum (exact band-limited interpolation, zero beyond f's r_max).
RadialField resample(const RadialField& f, const RadialGrid& target);

/// Sums of one to three chirped Gaussians with random widths, amplitudes and chirps.
std::vector<RadialField> random_corpus(const RadialGrid& grid, int count, std::uint64_t seed);

struct ScanRow {
  double c;
  double hhalf_ratio;  // hhalf0 / threshold_scattering
  Verdict verdict;
  std::string trigger;
  double t_final;
  double s_cumulative;
  double max_hhalf;
  double max_n_of_t;
};

/// Evolves c u0 for every c (sorted ascending) on a pool of `threads` workers;
/// per-run monitors go to dir/run_<i>/monitors.csv when dir is not empty.
std::vector<ScanRow> threshold_scan(const RadialField& u0, std::vector<double> scales, const SolverConfig& solver,
                                    double threshold_scattering, int threads, const std::filesystem::path& dir = {});

/// Indices i where the verdict sequence goes blowup -> completed -> blowup.
std::vector<std::size_t> scan_anomalies(const std::vector<ScanRow>& rows);

struct VirialSample {
  double t, m_a, fd, total, main, err_mass, err_grad, err_conv, rel_diff, err_ratio;
};

/// Centred differences of M_a at interior records with equal spacing on both sides.
std::vector<VirialSample> virial_samples(const std::vector<MonitorRecord>& monitors);

std::string sha256_file(const std::filesystem::path& path);

/// Lists every file below dir (except the manifest itself) with size and SHA-256.
void write_manifest(const std::filesystem::path& dir, const nlohmann::json& header);

nlohmann::json constants_json();

}  // namespace hartree::cli

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hartree/diagnostics.hpp"
#include "hartree/evolution.hpp"
#include "hartree/ground_state.hpp"

namespace hartree::cli {

enum class Command { GroundState, Soliton, Evolve, ThresholdScan, VirialCheck, DispersiveCheck, BernsteinCheck };

const char* to_string(Command c) noexcept;
std::optional<Command> parse_command(const std::string& s);

struct GridSpec {
  std::size_t n;
  double r_max;
};

struct InitialData {
  enum class Kind { Gaussian, GroundStateQ, Soliton, FromFile };
  Kind kind = Kind::Gaussian;
  double width = 1.0;      // Gaussian: amplitude exp(-r^2 / 2 width^2 + i chirp r^2)
  double amplitude = 1.0;
  double chirp = 0.0;
  double scale = 1.0;      // multiplies whatever the kind produces
  std::string path;        // FromFile
};

struct ScanSpec {
  std::vector<double> scales{0.25, 0.5, 1.0};
};

struct VirialCheckSpec {
  double tolerance = 1e-3;     // |dM_a/dt - total| relative to |total|
  int min_samples = 20;
  bool expect_plateau = false; // also require each error term below 1e-10 |main|
};

struct DispersiveSpec {
  GridSpec grid{8192, 1000.0};
  double width = 0.5;
  double t_lo = 1.0, t_hi = 30.0;
  int samples = 16;
  double exponent = -2.5;
  double tolerance = 0.05;
  double min_r2 = 0.999;
};

struct BernsteinSpec {
  GridSpec grid{65536, 40.0};
  double width = 0.002;
  std::vector<BernsteinExponents> exponents{{2, 2, 0.5}, {2, 4, 1.0}, {2, 4, 0.0}, {1, INFINITY, 0.0}};
  double band = 10.0;   // largest allowed max/min of a (p, q) ratio across scales
  int min_scales = 10;
};

struct ScenarioConfig {
  std::optional<Command> command;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out = "out";
  GridSpec grid{4096, 40.0};
  GridSpec gs_grid{kGroundStateNodes, kGroundStateRadius};
  GroundStateOptions gs;
  int corpus_size = 50;  // random fields in the sharpness probe of ground-state
  SolverConfig solver;
  InitialData initial;
  ScanSpec scan;
  VirialCheckSpec virial;
  DispersiveSpec dispersive;
  BernsteinSpec bernstein;
};

/// Parses "[section]" headers and "key = value" lines; '#' starts a comment.
/// Unknown sections or keys, duplicates and malformed values throw ConfigError
/// naming the source, line and key. The result is validated.
ScenarioConfig parse_config(std::istream& is, const std::string& source = "<config>");
ScenarioConfig load_config(const std::string& path);

/// Cross-field checks (solver ranges, referenced files); ConfigError naming the key.
void validate(const ScenarioConfig& cfg);

/// Every accepted key as "section.key", for documentation and tests.
std::vector<std::string> known_keys();

}  // namespace hartree::cli

// hartree: batch front-end. Reads a scenario config, runs one command and
// writes its artifacts plus a checksummed manifest into the output directory.

#include <CLI11.hpp>

#include <iostream>

#include "config.hpp"
#include "scenarios.hpp"

using namespace hartree;

int main(int argc, char** argv) {
  CLI::App app{"Radial focusing Hartree equation in five dimensions: ground states, evolution and diagnostics"};
  std::string config_path, out;
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "scenario config (key = value with [section] headers)")->check(CLI::ExistingFile);
  app.add_option("--out", out, "output directory (overrides run.out)");
  app.add_option("--threads", threads, "worker threads for scans (overrides run.threads)")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "seed for randomized corpora (overrides run.seed)");
  app.require_subcommand(0, 1);
  app.fallthrough();  // global flags may follow the subcommand
  for (const char* name : {"ground-state", "soliton", "evolve", "threshold-scan", "virial-check", "dispersive-check", "bernstein-check"})
    app.add_subcommand(name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kExitSuccess : cli::kExitConfig;
  }

  cli::ScenarioConfig cfg;
  try {
    if (!config_path.empty()) cfg = cli::load_config(config_path);
    if (!app.get_subcommands().empty()) cfg.command = cli::parse_command(app.get_subcommands().front()->get_name());
    if (!out.empty()) cfg.out = out;
    if (threads) cfg.threads = *threads;
    if (seed) cfg.seed = *seed;
    return cli::run(cfg, std::cerr);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    try {
      cli::record_failure(cfg, e);
    } catch (const std::exception& inner) {
      std::cerr << "could not record the failure: " << inner.what() << '\n';
    }
    return cli::exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitNumerical;
  }
}

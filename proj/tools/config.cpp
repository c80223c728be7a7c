#include "config.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "hartree/error.hpp"

namespace hartree::cli {

namespace {

constexpr std::pair<Command, const char*> kCommands[] = {
    {Command::GroundState, "ground-state"},       {Command::Soliton, "soliton"},
    {Command::Evolve, "evolve"},                  {Command::ThresholdScan, "threshold-scan"},
    {Command::VirialCheck, "virial-check"},       {Command::DispersiveCheck, "dispersive-check"},
    {Command::BernsteinCheck, "bernstein-check"},
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Thrown by value parsers; the caller adds source, line and key.
struct BadValue {
  std::string why;
};

double to_double(const std::string& v) {
  double x = 0.0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || p != end) throw BadValue{"expected a number, got '" + v + "'"};
  return x;
}

long to_long(const std::string& v) {
  long x = 0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || p != end) throw BadValue{"expected an integer, got '" + v + "'"};
  return x;
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw BadValue{"expected true or false, got '" + v + "'"};
}

std::vector<std::string> split(const std::string& v, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> to_list(const std::string& v) {
  std::vector<double> out;
  for (const auto& s : split(v, ',')) out.push_back(to_double(s));
  if (out.empty()) throw BadValue{"expected a comma-separated list of numbers"};
  return out;
}

// "p q s; p q s; ..."
std::vector<BernsteinExponents> to_exponents(const std::string& v) {
  std::vector<BernsteinExponents> out;
  for (const auto& triple : split(v, ';')) {
    std::istringstream ts(triple);
    std::vector<double> x;
    for (std::string tok; ts >> tok;) x.push_back(to_double(tok));
    if (x.size() != 3) throw BadValue{"expected 'p q s' triples separated by ';', got '" + triple + "'"};
    out.push_back({x[0], x[1], x[2]});
  }
  if (out.empty()) throw BadValue{"expected at least one 'p q s' triple"};
  return out;
}

using Setter = std::function<void(ScenarioConfig&, const std::string&)>;

std::map<std::string, Setter> setters() {
  std::map<std::string, Setter> s;
  auto real = [&](const char* key, auto member) {
    s[key] = [member](ScenarioConfig& c, const std::string& v) { member(c) = to_double(v); };
  };
  auto integer = [&](const char* key, auto member) {
    s[key] = [member](ScenarioConfig& c, const std::string& v) {
      using T = std::remove_reference_t<decltype(member(c))>;
      member(c) = static_cast<T>(to_long(v));
    };
  };
  auto boolean = [&](const char* key, auto member) {
    s[key] = [member](ScenarioConfig& c, const std::string& v) { member(c) = to_bool(v); };
  };
#define M(expr) [](ScenarioConfig& c) -> auto& { return expr; }
  s["run.command"] = [](ScenarioConfig& c, const std::string& v) {
    c.command = parse_command(v);
    if (!c.command) throw BadValue{"unknown command '" + v + "'"};
  };
  s["run.seed"] = [](ScenarioConfig& c, const std::string& v) {
    const long x = to_long(v);
    if (x < 0) throw BadValue{"seed must be nonnegative"};
    c.seed = static_cast<std::uint64_t>(x);
  };
  integer("run.threads", M(c.threads));
  s["run.out"] = [](ScenarioConfig& c, const std::string& v) { c.out = v; };

  integer("grid.n", M(c.grid.n));
  real("grid.r_max", M(c.grid.r_max));

  integer("ground_state.n", M(c.gs_grid.n));
  real("ground_state.r_max", M(c.gs_grid.r_max));
  real("ground_state.tol", M(c.gs.tol));
  integer("ground_state.max_iter", M(c.gs.max_iter));
  real("ground_state.seed_width", M(c.gs.seed_width));
  real("ground_state.seed_amplitude", M(c.gs.seed_amplitude));
  integer("ground_state.stall_window", M(c.gs.stall_window));
  integer("ground_state.corpus_size", M(c.corpus_size));

  real("solver.dt", M(c.solver.dt));
  real("solver.t_end", M(c.solver.t_end));
  boolean("solver.adapt", M(c.solver.adapt));
  real("solver.dt_min", M(c.solver.dt_min));
  real("solver.dt_max", M(c.solver.dt_max));
  real("solver.c_cfl", M(c.solver.c_cfl));
  integer("solver.monitor_stride", M(c.solver.monitor_stride));
  real("solver.virial_R", M(c.solver.virial_R));
  real("solver.mass_R", M(c.solver.mass_R));
  s["solver.record_fields_every"] = [](ScenarioConfig& c, const std::string& v) {
    c.solver.record_fields_every = static_cast<int>(to_long(v));
  };
  real("solver.coupling", M(c.solver.coupling));
  boolean("solver.monitor_virial", M(c.solver.monitor_virial));
  integer("solver.angular_order", M(c.solver.virial.angular_order));
  real("solver.blowup_growth", M(c.solver.blowup_growth));
  real("solver.frequency_cutoff", M(c.solver.frequency_cutoff));
  real("solver.mass_tolerance", M(c.solver.mass_tolerance));

  s["initial.kind"] = [](ScenarioConfig& c, const std::string& v) {
    using K = InitialData::Kind;
    if (v == "gaussian") c.initial.kind = K::Gaussian;
    else if (v == "ground_state") c.initial.kind = K::GroundStateQ;
    else if (v == "soliton") c.initial.kind = K::Soliton;
    else if (v == "file") c.initial.kind = K::FromFile;
    else throw BadValue{"expected gaussian, ground_state, soliton or file, got '" + v + "'"};
  };
  real("initial.width", M(c.initial.width));
  real("initial.amplitude", M(c.initial.amplitude));
  real("initial.chirp", M(c.initial.chirp));
  real("initial.scale", M(c.initial.scale));
  s["initial.path"] = [](ScenarioConfig& c, const std::string& v) { c.initial.path = v; };

  s["scan.scales"] = [](ScenarioConfig& c, const std::string& v) { c.scan.scales = to_list(v); };

  real("virial_check.tolerance", M(c.virial.tolerance));
  integer("virial_check.min_samples", M(c.virial.min_samples));
  boolean("virial_check.expect_plateau", M(c.virial.expect_plateau));

  integer("dispersive.n", M(c.dispersive.grid.n));
  real("dispersive.r_max", M(c.dispersive.grid.r_max));
  real("dispersive.width", M(c.dispersive.width));
  real("dispersive.t_lo", M(c.dispersive.t_lo));
  real("dispersive.t_hi", M(c.dispersive.t_hi));
  integer("dispersive.samples", M(c.dispersive.samples));
  real("dispersive.exponent", M(c.dispersive.exponent));
  real("dispersive.tolerance", M(c.dispersive.tolerance));
  real("dispersive.min_r2", M(c.dispersive.min_r2));

  integer("bernstein.n", M(c.bernstein.grid.n));
  real("bernstein.r_max", M(c.bernstein.grid.r_max));
  real("bernstein.width", M(c.bernstein.width));
  s["bernstein.exponents"] = [](ScenarioConfig& c, const std::string& v) { c.bernstein.exponents = to_exponents(v); };
  real("bernstein.band", M(c.bernstein.band));
  integer("bernstein.min_scales", M(c.bernstein.min_scales));
#undef M
  return s;
}

const std::map<std::string, Setter>& setter_table() {
  static const auto table = setters();
  return table;
}

void validate_impl(const ScenarioConfig& c, const std::function<std::string(const std::string&)>& where) {
  auto check = [&](bool ok, const std::string& key, const std::string& why) {
    if (!ok) fail(ErrorKind::ConfigError, where(key) + "key '" + key + "': " + why);
  };
  check(c.threads >= 1, "run.threads", "must be at least 1");
  check(!c.out.empty(), "run.out", "must not be empty");
  for (const auto& [grid, name] : {std::pair{c.grid, "grid"}, {c.gs_grid, "ground_state"}, {c.dispersive.grid, "dispersive"},
                                   {c.bernstein.grid, "bernstein"}}) {
    check(grid.n >= 16 && grid.n <= (std::size_t{1} << 24), std::string(name) + ".n", "must lie in [16, 2^24]");
    check(std::isfinite(grid.r_max) && grid.r_max > 0.0, std::string(name) + ".r_max", "must be positive");
  }
  check(c.gs.tol > 0.0, "ground_state.tol", "must be positive");
  check(c.gs.max_iter >= 1, "ground_state.max_iter", "must be at least 1");
  check(c.gs.seed_width > 0.0, "ground_state.seed_width", "must be positive");
  check(c.gs.stall_window >= 1, "ground_state.stall_window", "must be at least 1");
  check(c.corpus_size >= 0, "ground_state.corpus_size", "must be nonnegative");

  try {
    hartree::validate(c.solver);
  } catch (const Error& e) {
    // the solver message names the field; map it back to its config key
    const std::string msg = e.what();
    std::string key = "solver";
    for (const auto& [k, _] : setter_table())
      if (k.rfind("solver.", 0) == 0) {
        const std::string field = "solver config " + k.substr(7) + ":";
        if (msg.find(field) != std::string::npos) key = k;
      }
    fail(ErrorKind::ConfigError, where(key) + "key '" + key + "': " + msg);
  }

  check(c.initial.width > 0.0, "initial.width", "must be positive");
  check(std::isfinite(c.initial.amplitude), "initial.amplitude", "must be finite");
  check(std::isfinite(c.initial.chirp), "initial.chirp", "must be finite");
  check(std::isfinite(c.initial.scale), "initial.scale", "must be finite");
  if (c.initial.kind == InitialData::Kind::FromFile) {
    check(!c.initial.path.empty(), "initial.path", "required when kind = file");
    check(std::filesystem::is_regular_file(c.initial.path), "initial.path", "no such file '" + c.initial.path + "'");
  }
  for (double s : c.scan.scales) check(std::isfinite(s) && s >= 0.0, "scan.scales", "scales must be nonnegative");

  check(c.virial.tolerance > 0.0, "virial_check.tolerance", "must be positive");
  check(c.virial.min_samples >= 1, "virial_check.min_samples", "must be at least 1");
  check(c.dispersive.width > 0.0, "dispersive.width", "must be positive");
  check(c.dispersive.t_lo >= 1.0, "dispersive.t_lo", "must be at least 1");
  check(c.dispersive.t_hi > c.dispersive.t_lo, "dispersive.t_hi", "must exceed t_lo");
  check(c.dispersive.samples >= 8, "dispersive.samples", "must be at least 8");
  check(c.bernstein.width > 0.0, "bernstein.width", "must be positive");
  for (const auto& e : c.bernstein.exponents)
    check(e.p >= 1.0 && e.p <= e.q && std::isfinite(e.s), "bernstein.exponents", "need 1 <= p <= q <= inf");
  check(c.bernstein.band > 1.0, "bernstein.band", "must exceed 1");
}

}  // namespace

const char* to_string(Command c) noexcept {
  for (const auto& [cmd, name] : kCommands)
    if (cmd == c) return name;
  return "?";
}

std::optional<Command> parse_command(const std::string& s) {
  for (const auto& [cmd, name] : kCommands)
    if (s == name) return cmd;
  return std::nullopt;
}

std::vector<std::string> known_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, _] : setter_table()) keys.push_back(k);
  return keys;
}

ScenarioConfig parse_config(std::istream& is, const std::string& source) {
  ScenarioConfig cfg;
  const auto& table = setter_table();
  std::map<std::string, int> seen;
  std::string section, raw;
  int line = 0;
  auto at = [&](int l) { return source + ":" + std::to_string(l) + ": "; };

  while (std::getline(is, raw)) {
    ++line;
    std::string text = trim(raw.substr(0, raw.find('#')));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') fail(ErrorKind::ConfigError, at(line) + "malformed section header '" + text + "'");
      section = trim(std::string_view(text).substr(1, text.size() - 2));
      bool known = false;
      for (const auto& [k, _] : table) known = known || k.rfind(section + ".", 0) == 0;
      if (!known) fail(ErrorKind::ConfigError, at(line) + "unknown section '" + section + "'");
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) fail(ErrorKind::ConfigError, at(line) + "expected 'key = value', got '" + text + "'");
    if (section.empty()) fail(ErrorKind::ConfigError, at(line) + "key outside of any section");
    const std::string key = section + "." + trim(std::string_view(text).substr(0, eq));
    const std::string value = trim(std::string_view(text).substr(eq + 1));
    const auto it = table.find(key);
    if (it == table.end()) fail(ErrorKind::ConfigError, at(line) + "unknown key '" + key + "'");
    if (auto prev = seen.find(key); prev != seen.end())
      fail(ErrorKind::ConfigError, at(line) + "key '" + key + "' already set on line " + std::to_string(prev->second));
    try {
      it->second(cfg, value);
    } catch (const BadValue& b) {
      fail(ErrorKind::ConfigError, at(line) + "key '" + key + "': " + b.why);
    }
    seen[key] = line;
  }
  validate_impl(cfg, [&](const std::string& key) {
    const auto it = seen.find(key);
    return it == seen.end() ? source + ": " : at(it->second);
  });
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ConfigError, "cannot open config file '" + path + "'");
  return parse_config(in, path);
}

void validate(const ScenarioConfig& cfg) {
  validate_impl(cfg, [](const std::string&) { return std::string(); });
}

}  // namespace hartree::cli

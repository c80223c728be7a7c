#include "hartree/radial_field.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "hartree/error.hpp"

namespace hartree {

std::string_view to_string(Side side) noexcept { return side == Side::Physical ? "physical" : "spectral"; }

RadialField::RadialField(RadialGrid grid, Side side)
    : grid_(std::move(grid)), values_(grid_.size(), Complex(0.0)), side_(side) {}

RadialField::RadialField(RadialGrid grid, std::vector<Complex> values, Side side)
    : grid_(std::move(grid)), values_(std::move(values)), side_(side) {
  require(values_.size() == grid_.size(), ErrorKind::GridMismatch,
          "field has " + std::to_string(values_.size()) + " values for a grid of " +
              std::to_string(grid_.size()) + " nodes");
  require_finite(*this, "RadialField");
}

bool RadialField::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(),
                     [](const Complex& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

double RadialField::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v));
  return m;
}

double RadialField::imag_fraction() const noexcept {
  double peak = 0.0, im = 0.0;
  for (const auto& v : values_) {
    peak = std::max(peak, std::abs(v));
    im = std::max(im, std::abs(v.imag()));
  }
  return peak > 0.0 ? im / peak : 0.0;
}

void RadialField::check_compatible(const RadialField& other, std::string_view op) const {
  require_same_grid(*this, other, op);
  require(side_ == other.side_, ErrorKind::GridMismatch, std::string(op) + ": fields live on different sides");
}

RadialField& RadialField::operator+=(const RadialField& other) {
  check_compatible(other, "operator+=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

RadialField& RadialField::operator-=(const RadialField& other) {
  check_compatible(other, "operator-=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

RadialField& RadialField::operator*=(Complex c) noexcept {
  for (auto& v : values_) v *= c;
  return *this;
}

void require_finite(const RadialField& f, std::string_view where) {
  if (!f.all_finite()) fail(ErrorKind::NonFinite, std::string(where) + ": field contains NaN or Inf");
}

void require_same_grid(const RadialField& a, const RadialField& b, std::string_view where) {
  if (!(a.grid() == b.grid())) fail(ErrorKind::GridMismatch, std::string(where) + ": fields use different grids");
}

namespace {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s, std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    fail(ErrorKind::IoError, "line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
  return v;
}

}  // namespace

void write_field(std::ostream& os, const RadialField& f) {
  os << "# n=" << f.size() << " r_max=" << format_double(f.grid().r_max()) << " side=" << to_string(f.side())
     << '\n';
  const auto nodes = f.nodes();
  for (std::size_t i = 0; i < f.size(); ++i)
    os << format_double(nodes[i]) << ' ' << format_double(f[i].real()) << ' ' << format_double(f[i].imag())
       << '\n';
}

void write_field(const std::string& path, const RadialField& f) {
  std::ofstream os(path);
  require(static_cast<bool>(os), ErrorKind::IoError, "cannot open " + path + " for writing");
  write_field(os, f);
  require(static_cast<bool>(os), ErrorKind::IoError, "write to " + path + " failed");
}

RadialField read_field(std::istream& is) {
  std::string header;
  require(static_cast<bool>(std::getline(is, header)), ErrorKind::IoError, "empty field file");
  std::size_t n = 0;
  double r_max = 0.0;
  std::string side_name;
  {
    std::istringstream hs(header);
    std::string hash, tok;
    hs >> hash;
    require(hash == "#", ErrorKind::IoError, "field header must start with '#'");
    while (hs >> tok) {
      const auto eq = tok.find('=');
      require(eq != std::string::npos, ErrorKind::IoError, "malformed header token '" + tok + "'");
      const auto key = tok.substr(0, eq);
      const auto val = tok.substr(eq + 1);
      if (key == "n") n = static_cast<std::size_t>(parse_double(val, 1));
      else if (key == "r_max") r_max = parse_double(val, 1);
      else if (key == "side") side_name = val;
      else fail(ErrorKind::IoError, "unknown header key '" + key + "'");
    }
  }
  require(side_name == "physical" || side_name == "spectral", ErrorKind::IoError,
          "header side must be physical or spectral");
  RadialGrid grid(n, r_max);
  const Side side = side_name == "physical" ? Side::Physical : Side::Spectral;
  std::vector<Complex> values;
  values.reserve(n);
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string node, re, im;
    require(static_cast<bool>(ls >> node >> re >> im), ErrorKind::IoError,
            "line " + std::to_string(lineno) + ": expected 'node re im'");
    values.emplace_back(parse_double(re, lineno), parse_double(im, lineno));
  }
  require(values.size() == n, ErrorKind::IoError,
          "expected " + std::to_string(n) + " rows, found " + std::to_string(values.size()));
  return RadialField(grid, std::move(values), side);
}

RadialField read_field(const std::string& path) {
  std::ifstream is(path);
  require(static_cast<bool>(is), ErrorKind::IoError, "cannot open " + path);
  return read_field(is);
}

}  // namespace hartree

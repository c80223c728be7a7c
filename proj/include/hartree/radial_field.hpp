#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hartree/radial_grid.hpp"

namespace hartree {

using Complex = std::complex<double>;

enum class Side { Physical, Spectral };

std::string_view to_string(Side side) noexcept;
inline Side opposite(Side side) noexcept { return side == Side::Physical ? Side::Spectral : Side::Physical; }

/// Complex radial profile sampled on the nodes of a RadialGrid, tagged with
/// the side (physical r or frequency rho) it lives on.
class RadialField {
 public:
  RadialField(RadialGrid grid, Side side);
  RadialField(RadialGrid grid, std::vector<Complex> values, Side side);

  /// Samples fn at the nodes of the requested side.
  template <class Fn>
  static RadialField sample(const RadialGrid& grid, Fn&& fn, Side side = Side::Physical) {
    std::vector<Complex> v(grid.size());
    const auto nodes = side == Side::Physical ? grid.radii() : grid.frequencies();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = Complex(fn(nodes[i]));
    return RadialField(grid, std::move(v), side);
  }

  const RadialGrid& grid() const noexcept { return grid_; }
  Side side() const noexcept { return side_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::span<const Complex> values() const noexcept { return values_; }
  std::span<Complex> values() noexcept { return values_; }
  const Complex& operator[](std::size_t i) const { return values_[i]; }
  Complex& operator[](std::size_t i) { return values_[i]; }

  /// Node coordinates of this field's side.
  std::span<const double> nodes() const noexcept {
    return side_ == Side::Physical ? grid_.radii() : grid_.frequencies();
  }

  bool all_finite() const noexcept;
  double max_abs() const noexcept;
  /// Largest |Im v| relative to max |v|; zero for an identically zero field.
  double imag_fraction() const noexcept;

  RadialField& operator+=(const RadialField& other);
  RadialField& operator-=(const RadialField& other);
  RadialField& operator*=(Complex c) noexcept;

  friend RadialField operator+(RadialField a, const RadialField& b) { return a += b; }
  friend RadialField operator-(RadialField a, const RadialField& b) { return a -= b; }
  friend RadialField operator*(Complex c, RadialField a) { return a *= c; }
  friend RadialField operator*(RadialField a, Complex c) { return a *= c; }

 private:
  void check_compatible(const RadialField& other, std::string_view op) const;

  RadialGrid grid_;
  std::vector<Complex> values_;
  Side side_;
};

/// Throws NonFinite (naming `where`) if any value is NaN or infinite.
void require_finite(const RadialField& f, std::string_view where);
/// Throws GridMismatch unless both fields share a grid.
void require_same_grid(const RadialField& a, const RadialField& b, std::string_view where);

// Text format: a header line "# n=<n> r_max=<r_max> side=<physical|spectral>"
// followed by one "node re im" line per node, all printed round-trip exact.
void write_field(std::ostream& os, const RadialField& f);
void write_field(const std::string& path, const RadialField& f);
RadialField read_field(std::istream& is);
RadialField read_field(const std::string& path);

}  // namespace hartree

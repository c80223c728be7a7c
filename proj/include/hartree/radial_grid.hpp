#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace hartree {

namespace detail {
struct KernelTables;
struct GridLayout;
}

/// Uniform sine-transform lattice for radial functions on R^5.
///
/// Physical nodes are r_j = j dr (j = 1..n, dr = r_max / (n + 1)) and
/// frequency nodes are rho_k = k pi / r_max, so r_max * rho_max = n pi and
/// zero is never a node on either side. Index 0 of every span is j = 1.
///
/// The grid owns the discrete radial Fourier kernel. In the weighted
/// coordinates a_j = r_j^2 sqrt(dr) f_j and b_k = rho_k^2 sqrt(drho) g_k the
/// trapezoid discretisation of the order-3/2 Hankel transform is the symmetric
/// matrix sqrt(2/(n+1)) K(jk pi/(n+1)) with K(x) = sin(x)/x - cos(x). It is
/// applied with one DST-I and one DCT-I. The matrix is exactly symmetric; it
/// squares to the identity to round-off on fields that are smooth and decayed
/// at both ends of the lattice. The alternating (Nyquist) vector is nearly in
/// its null space, so fields with slow tails or non-smooth small-frequency
/// behaviour lose some of that content on a round trip.
///
/// Copies are cheap and share the immutable tables; safe to use concurrently.
class RadialGrid {
 public:
  RadialGrid(std::size_t n, double r_max);

  std::size_t size() const noexcept;
  double r_max() const noexcept;
  double dr() const noexcept;
  double drho() const noexcept;
  double rho_max() const noexcept;

  double r(std::size_t i) const { return radii()[i]; }
  double rho(std::size_t i) const { return frequencies()[i]; }
  std::span<const double> radii() const noexcept;
  std::span<const double> frequencies() const noexcept;

  /// kSphere4 r^4 dr, the weight that turns a sum over nodes into an integral over R^5.
  std::span<const double> physical_weights() const noexcept;
  /// kSphere4 rho^4 drho.
  std::span<const double> spectral_weights() const noexcept;

  /// out = K in, in weighted coordinates. `in` and `out` must have size() entries and may not alias.
  void apply_kernel(std::span<const double> in, std::span<double> out) const;

  friend bool operator==(const RadialGrid& a, const RadialGrid& b) noexcept {
    return a.layout_ == b.layout_ || (a.size() == b.size() && a.r_max() == b.r_max());
  }

 private:
  std::shared_ptr<const detail::GridLayout> layout_;
};

}  // namespace hartree

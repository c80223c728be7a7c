#include "hartree/cutoff.hpp"

#include <cmath>

namespace hartree {
namespace {

// Truncated Taylor series f(x0 + e) = c[0] + c[1] e + c[2] e^2 + c[3] e^3.
struct Jet {
  std::array<double, 4> c{};

  friend Jet operator+(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i < 4; ++i) r.c[i] = a.c[i] + b.c[i];
    return r;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; i + j < 4; ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
  }
};

Jet reciprocal(const Jet& a) {
  Jet r;
  r.c[0] = 1.0 / a.c[0];
  for (int k = 1; k < 4; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += a.c[j] * r.c[k - j];
    r.c[k] = -s / a.c[0];
  }
  return r;
}

Jet exp(const Jet& a) {
  // f' = a' f in coefficient form.
  Jet r;
  r.c[0] = std::exp(a.c[0]);
  for (int k = 1; k < 4; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += j * a.c[j] * r.c[k - j];
    r.c[k] = s / k;
  }
  return r;
}

// exp(-1/t) for t > 0, identically zero otherwise.
Jet transition_kernel(const Jet& t) {
  if (t.c[0] <= 0.0) return Jet{};
  Jet minus_inv = reciprocal(t);
  for (auto& v : minus_inv.c) v = -v;
  return exp(minus_inv);
}

Jet cutoff_jet(double x, double plateau, double support) {
  const double width = support - plateau;
  Jet t;
  t.c[0] = (x - plateau) / width;
  t.c[1] = 1.0 / width;
  if (t.c[0] <= 0.0) return Jet{{1.0, 0.0, 0.0, 0.0}};
  if (t.c[0] >= 1.0) return Jet{};
  Jet one_minus_t;
  one_minus_t.c[0] = 1.0 - t.c[0];
  one_minus_t.c[1] = -t.c[1];
  const Jet a = transition_kernel(one_minus_t);
  const Jet b = transition_kernel(t);
  return a * reciprocal(a + b);
}

}  // namespace

double smooth_cutoff(double x, double plateau, double support) noexcept {
  if (x <= plateau) return 1.0;
  if (x >= support) return 0.0;
  const double t = (x - plateau) / (support - plateau);
  const double a = std::exp(-1.0 / (1.0 - t));
  const double b = std::exp(-1.0 / t);
  return a / (a + b);
}

std::array<double, 4> smooth_cutoff_jet(double x, double plateau, double support) noexcept {
  const Jet j = cutoff_jet(x, plateau, support);
  return {j.c[0], j.c[1], 2.0 * j.c[2], 6.0 * j.c[3]};
}

}  // namespace hartree

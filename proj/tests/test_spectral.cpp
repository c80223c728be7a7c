#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "hartree/constants.hpp"
#include "hartree/error.hpp"
#include "hartree/spectral.hpp"
#include "oracles/quadrature.hpp"

using namespace hartree;

namespace {

const RadialGrid& default_grid() {
  static const RadialGrid g(4096, 40.0);
  return g;
}

RadialField gaussian(const RadialGrid& g, double sigma = 1.0, double amp = 1.0) {
  return RadialField::sample(g, [=](double r) { return amp * std::exp(-r * r / (2 * sigma * sigma)); });
}

double max_diff(const RadialField& a, const RadialField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double l2(const RadialField& f) {
  const auto w = f.side() == Side::Physical ? f.grid().physical_weights() : f.grid().spectral_weights();
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * std::norm(f[i]);
  return std::sqrt(s);
}

RadialField random_field(const RadialGrid& g, unsigned seed) {
  // Random superposition of chirped Gaussians in r^2: smooth as functions on R^5, decayed by r_max.
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RadialField f(g, Side::Physical);
  for (int b = 0; b < 4; ++b) {
    const double w = 0.5 + 2.0 * u(rng), a = u(rng) - 0.5, chirp = u(rng);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double r2 = g.r(i) * g.r(i);
      f[i] += a * std::exp(-r2 / (w * w)) * std::polar(1.0, chirp * r2);
    }
  }
  return f;
}

}  // namespace

TEST_CASE("lattice invariants") {
  const auto& g = default_grid();
  CHECK(g.radii().size() == g.frequencies().size());
  CHECK(g.r(0) > 0.0);
  CHECK(g.rho(0) > 0.0);
  CHECK(g.r_max() * g.rho_max() == doctest::Approx(4096 * std::numbers::pi).epsilon(1e-14));
  CHECK(g.dr() == doctest::Approx(40.0 / 4097.0));
  CHECK_THROWS_AS(RadialGrid(4, 1.0), Error);
  CHECK_THROWS_AS(RadialGrid(64, -1.0), Error);
}

TEST_CASE("kernel is symmetric and squares to the identity on decayed data") {
  for (std::size_t n : {64u, 300u, 1024u, 4096u}) {
    RadialGrid g(n, 12.0);
    std::mt19937 rng(7);
    std::normal_distribution<double> nd;
    std::vector<double> x(n), y(n), kx(n), ky(n), kkz(n), z(n), kz(n);
    for (auto& v : x) v = nd(rng);
    for (auto& v : y) v = nd(rng);
    for (std::size_t i = 0; i < n; ++i) z[i] = g.r(i) * g.r(i) * std::exp(-g.r(i) * g.r(i) / 2);
    g.apply_kernel(x, kx);
    g.apply_kernel(y, ky);
    g.apply_kernel(z, kz);
    g.apply_kernel(kz, kkz);
    double xky = 0, ykx = 0, err = 0;
    for (std::size_t i = 0; i < n; ++i) {
      xky += x[i] * ky[i];
      ykx += y[i] * kx[i];
      err = std::max(err, std::abs(kkz[i] - z[i]));
    }
    CAPTURE(n);
    CHECK(std::abs(xky - ykx) < 1e-11 * double(n));
    if (n >= 300) CHECK(err < 1e-13);
  }
}

TEST_CASE("gaussian transforms") {
  const auto& g = default_grid();

  SUBCASE("unit gaussian is a fixed point") {
    const auto spec = hankel_transform(gaussian(g));
    CHECK(spec.side() == Side::Spectral);
    const auto expect = RadialField::sample(g, [](double rho) { return std::exp(-rho * rho / 2); }, Side::Spectral);
    CHECK(max_diff(spec, expect) < 1e-8);
    // the quadrature oracle agrees with the analytic self-map
    for (double rho : {0.3, 1.0, 2.5}) {
      const double q = oracle::radial_fourier([](double r) { return std::exp(-r * r / 2); }, rho, 12.0);
      CHECK(q == doctest::Approx(std::exp(-rho * rho / 2)).epsilon(1e-12));
    }
  }

  SUBCASE("width-2 gaussian follows the scaling law") {
    const auto spec = hankel_transform(gaussian(g, 2.0));
    const auto expect =
        RadialField::sample(g, [](double rho) { return 32.0 * std::exp(-2.0 * rho * rho); }, Side::Spectral);
    CHECK(max_diff(spec, expect) / 32.0 < 1e-8);
    const double q = oracle::radial_fourier([](double r) { return std::exp(-r * r / 8); }, 0.7, 24.0);
    CHECK(q == doctest::Approx(32.0 * std::exp(-2.0 * 0.49)).epsilon(1e-12));
  }

  SUBCASE("zero maps to zero") {
    const auto spec = hankel_transform(RadialField(g, Side::Physical));
    CHECK(spec.max_abs() == 0.0);
  }

  SUBCASE("round trip and Parseval") {
    for (double sigma : {0.5, 1.0, 2.0}) {
      const auto f = gaussian(g, sigma);
      const auto spec = hankel_transform(f);
      const auto back = hankel_transform(spec);
      CHECK(back.side() == Side::Physical);
      CHECK(max_diff(back, f) / f.max_abs() < 1e-9);
      CHECK(l2(spec) == doctest::Approx(l2(f)).epsilon(1e-10));
    }
    const auto f = random_field(g, 3);
    CHECK(l2(hankel_transform(f)) == doctest::Approx(l2(f)).epsilon(1e-10));
  }
}

TEST_CASE("opposite-side evaluation matches node values") {
  const auto& g = default_grid();
  const auto spec = hankel_transform(gaussian(g));
  for (std::size_t i : {0u, 100u, 409u}) CHECK(std::abs(evaluate_opposite(spec, g.r(i)) - std::exp(-g.r(i) * g.r(i) / 2)) < 1e-12);
  CHECK(std::abs(evaluate_opposite(spec, 0.0) - 1.0) < 1e-11);
}

TEST_CASE("transform input validation") {
  const auto& g = default_grid();
  RadialField bad(g, Side::Physical);
  bad[10] = std::numeric_limits<double>::quiet_NaN();
  try {
    (void)hankel_transform(bad);
    FAIL("expected NonFinite");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonFinite);
  }
  CHECK_THROWS_AS(RadialField(g, std::vector<Complex>(10), Side::Physical), Error);
  const RadialGrid other(2048, 40.0);
  try {
    auto sum = gaussian(g) + gaussian(other);
    FAIL("expected GridMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::GridMismatch);
  }
}

TEST_CASE("tail warning is structured, not fatal") {
  const auto& g = default_grid();
  DiagnosticLog log;
  (void)hankel_transform(gaussian(g), &log);
  CHECK(log.warnings.empty());
  const auto slow = RadialField::sample(g, [](double r) { return 1.0 / std::pow(1.0 + r * r, 2); });
  (void)hankel_transform(slow, &log);
  REQUIRE(log.warnings.size() == 1);
  CHECK(log.warnings[0].tail_ratio > 1e-8);
}

TEST_CASE("fractional derivatives") {
  const auto& g = default_grid();
  const auto f = gaussian(g);

  CHECK(max_diff(fractional_derivative(f, 0.0), f) == 0.0);

  {
    const auto spec = hankel_transform(f);
    const auto half_twice = fractional_derivative(fractional_derivative(spec, 0.5), 0.5);
    const auto one = fractional_derivative(spec, 1.0);
    for (std::size_t k = 0; k < g.size(); ++k)
      if (one[k] != 0.0) REQUIRE(std::abs(half_twice[k] / one[k] - 1.0) < 1e-12);
  }

  const auto lap = fractional_derivative(f, 2.0);
  const auto expect = RadialField::sample(g, [](double r) { return (5.0 - r * r) * std::exp(-r * r / 2); });
  CHECK(max_diff(lap, expect) / 5.0 < 1e-7);

  // spectral input stays spectral
  const auto spec = hankel_transform(f);
  CHECK(fractional_derivative(spec, 0.5).side() == Side::Spectral);

  try {
    (void)fractional_derivative(f, 2.5);
    FAIL("expected RangeError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RangeError);
  }

  SUBCASE("homogeneity under dilation") {
    const double lambda = 2.0;
    const auto narrow = gaussian(g, 0.5);
    for (double s : {-2.0, 0.5, 1.0, 2.0}) {
      const auto lhs = fractional_derivative(f, s);
      const auto rhs = fractional_derivative(narrow, s);
      double err = 0.0;
      // (D^s f)(r / 2) at r = r_{2k} is the node value at r_k
      // r <= 20: further out the algebraic tails of |nabla|^s f meet the truncation
      for (std::size_t k = 1; 2 * k <= g.size() / 2; ++k)
        err = std::max(err, std::abs(lhs[2 * k - 1] - std::pow(lambda, -s) * rhs[k - 1]));
      CAPTURE(s);
      CHECK(err / lhs.max_abs() < 1e-8);
    }
  }
}

TEST_CASE("hartree convolution") {
  const auto& g = default_grid();

  CHECK(hartree_convolution(RadialField(g, Side::Physical)).max_abs() == 0.0);

  SUBCASE("gaussian density against quadrature") {
    // dr = 0.01 puts 1, 2 and 4 on nodes 100, 200, 400
    const RadialGrid fine(4096, 40.97);
    const auto V = hartree_convolution(gaussian(fine));
    auto gfun = [](double s) { return std::exp(-s * s / 2); };
    for (std::size_t j : {1u, 100u, 200u, 400u}) {
      const double r = fine.r(j - 1);
      const double q = oracle::riesz_potential(gfun, r, 14.0);
      CAPTURE(r);
      CHECK(q == doctest::Approx(oracle::riesz_potential_unit_gaussian(r)).epsilon(1e-10));
      CHECK(q == doctest::Approx(oracle::riesz_potential_newton(gfun, r, 14.0)).epsilon(1e-10));
      CHECK(V[j - 1].real() == doctest::Approx(q).epsilon(1e-6));
    }
    // V(0) = sigma_4 * int s e^{-s^2/2} ds = 8 pi^2 / 3
    CHECK(V.imag_fraction() == 0.0);
    // the far field is the total mass over r^3
    const double mass = std::pow(2.0 * std::numbers::pi, 2.5);
    CHECK(V[3999].real() * std::pow(fine.r(3999), 3) == doctest::Approx(mass).epsilon(1e-8));
  }

  SUBCASE("agrees with the spectral multiplier where the lattice can hold V") {
    // a density with vanishing total charge has a potential decaying faster than r^-3
    const auto dens = RadialField::sample(g, [](double r) { return (5.0 - r * r) * std::exp(-r * r / 2); });
    const auto V = hartree_convolution(dens);
    const auto spec = hankel_transform(dens);
    RadialField vs = spec;
    for (std::size_t k = 0; k < g.size(); ++k) vs[k] *= kRieszConstant / (g.rho(k) * g.rho(k));
    // -Laplacian of the Gaussian: V = 8 pi^2 exp(-r^2/2)
    CHECK(max_diff(hankel_transform(vs), V) / V.max_abs() < 1e-8);
    CHECK(V[0].real() == doctest::Approx(kRieszConstant * std::exp(-g.r(0) * g.r(0) / 2)).epsilon(1e-8));
  }

  SUBCASE("degree -2 homogeneity") {
    const double lambda = 2.0;
    const auto V1 = hartree_convolution(gaussian(g));
    const auto V2 = hartree_convolution(gaussian(g, lambda));
    double err = 0.0;
    for (std::size_t k = 1; 2 * k <= 2000; ++k)
      err = std::max(err, std::abs(V2[2 * k - 1] - lambda * lambda * V1[k - 1]));
    CHECK(err / V2.max_abs() < 1e-8);
  }

  SUBCASE("nonnegative density gives nonnegative potential") {
    for (unsigned seed = 0; seed < 5; ++seed) {
      auto f = random_field(g, seed);
      RadialField rho(g, Side::Physical);
      for (std::size_t i = 0; i < g.size(); ++i) rho[i] = std::norm(f[i]);
      const auto V = hartree_convolution(rho);
      double lowest = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) lowest = std::min(lowest, V[i].real());
      CHECK(lowest >= -1e-8 * V.max_abs());
    }
  }

  SUBCASE("rejects complex or spectral densities") {
    auto z = gaussian(g);
    z[5] += Complex(0.0, 1e-3);
    try {
      (void)hartree_convolution(z);
      FAIL("expected ComplexDensity");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ComplexDensity);
    }
    CHECK_THROWS_AS(hartree_convolution(hankel_transform(gaussian(g))), Error);
  }
}

TEST_CASE("Littlewood-Paley projections") {
  const auto& g = default_grid();
  const auto f = random_field(g, 11);
  const auto fs = hankel_transform(f);
  for (double N : {0.5, 3.0, 40.0}) {
    // exact on the spectral side; the physical side adds one round trip
    CHECK(max_diff(lp_project(fs, N, BandKind::Low) + lp_project(fs, N, BandKind::High), fs) / fs.max_abs() < 1e-14);
    CHECK(max_diff(lp_project(f, N, BandKind::Low) + lp_project(f, N, BandKind::High), f) / f.max_abs() < 1e-10);
  }

  // spectrum supported in [4N, 8N]: the annulus multiplier vanishes there
  const double N = 2.0;
  const auto shell = RadialField::sample(
      g, [=](double rho) { return rho > 4 * N && rho < 8 * N ? std::sin(rho) : 0.0; }, Side::Spectral);
  CHECK(lp_project(shell, N, BandKind::Band).max_abs() == 0.0);

  CHECK(lp_symbol(0.5, 1.0, BandKind::Low) == 1.0);
  CHECK(lp_symbol(1.1, 1.0, BandKind::Low) == 0.0);
  CHECK(lp_symbol(0.5, 1.0, BandKind::Band) == 0.0);
  CHECK(lp_symbol(0.75, 1.0, BandKind::Band) == doctest::Approx(1.0));
  CHECK_THROWS_AS(lp_project(f, 0.0, BandKind::Band), Error);
}

TEST_CASE("free propagator") {
  const auto& g = default_grid();
  const auto f = random_field(g, 5);
  const auto fs = hankel_transform(f);
  CHECK(max_diff(free_propagate(f, 0.0), f) == 0.0);
  for (double t : {0.01, 0.3, 1.0}) {
    CHECK(l2(free_propagate(fs, t)) == doctest::Approx(l2(fs)).epsilon(1e-12));
    CHECK(l2(free_propagate(f, t)) == doctest::Approx(l2(f)).epsilon(1e-10));
  }
  CHECK(max_diff(free_propagate(free_propagate(fs, 0.2), 0.5), free_propagate(fs, 0.7)) / fs.max_abs() < 1e-12);
  CHECK(max_diff(free_propagate(free_propagate(f, 0.2), 0.5), free_propagate(f, 0.7)) / f.max_abs() < 1e-10);
}

TEST_CASE("diagonal multipliers commute") {
  const auto& g = default_grid();
  const auto f = hankel_transform(random_field(g, 9));
  auto A = [](const RadialField& x) { return fractional_derivative(x, 0.5); };
  auto B = [](const RadialField& x) { return lp_project(x, 2.0, BandKind::Band); };
  auto C = [](const RadialField& x) { return free_propagate(x, 0.4); };
  const double scale = A(B(f)).max_abs();
  CHECK(max_diff(A(B(f)), B(A(f))) / scale < 1e-12);
  CHECK(max_diff(A(C(f)), C(A(f))) / A(f).max_abs() < 1e-12);
  CHECK(max_diff(B(C(f)), C(B(f))) / scale < 1e-12);
}

TEST_CASE("field text format round trip") {
  const RadialGrid g(64, 5.0);
  auto f = random_field(g, 1);
  std::stringstream ss;
  write_field(ss, f);
  const auto back = read_field(ss);
  CHECK(back.grid() == g);
  CHECK(back.side() == Side::Physical);
  CHECK(max_diff(back, f) == 0.0);
  std::stringstream bad("# n=64 r_max=5 side=sideways\n");
  CHECK_THROWS_AS(read_field(bad), Error);
}

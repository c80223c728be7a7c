#include <doctest.h>

#include <cmath>
#include <random>

#include "hartree/constants.hpp"
#include "hartree/functionals.hpp"
#include "hartree/ground_state.hpp"
#include "hartree/spectral.hpp"

using namespace hartree;

namespace {

const RadialGrid& gs_grid() {
  static const RadialGrid g(kGroundStateNodes, kGroundStateRadius);
  return g;
}

const GroundStateResult& ground_state() {
  static const GroundStateResult r = solve_ground_state(gs_grid());
  return r;
}

const GroundStateResult& soliton() {
  static const GroundStateResult r = solve_soliton_profile(RadialGrid(4096, 40.0));
  return r;
}

double linf_rel(const RadialField& a, const RadialField& b) {
  double d = 0.0, m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d = std::max(d, std::abs(a[i] - b[i]));
    m = std::max(m, std::abs(b[i]));
  }
  return d / m;
}

RadialField random_profile(const RadialGrid& g, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RadialField f(g, Side::Physical);
  const int count = 1 + static_cast<int>(3 * u(rng));
  for (int b = 0; b < count; ++b) {
    const double w = 0.5 + 2.0 * u(rng), a = 2.0 * u(rng) - 0.5, c = u(rng) - 0.5;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double r2 = g.r(i) * g.r(i);
      f[i] += a * std::exp(-r2 / (w * w)) * std::polar(1.0, c * r2);
    }
  }
  return f;
}

}  // namespace

TEST_CASE("ground state identities") {
  const auto& Q = ground_state();
  for (const auto& c : check_invariants(Q)) {
    CAPTURE(c.name);
    CAPTURE(c.value);
    CHECK(c.pass);
  }
  const double K = Q.hhalf_norm * Q.hhalf_norm, H = Q.h1_norm * Q.h1_norm;
  CHECK(Q.el_residual < 1e-9 * Q.hhalf_norm);
  CHECK(std::abs(H - K) < 1e-6 * H);
  CHECK(std::abs(Q.potential - 2.0 * H) < 1e-6 * Q.potential);
  CHECK(std::abs(energy(Q.spectrum)) < 1e-6 * H);
  CHECK(weinstein(Q.spectrum) * Q.sharp_constant == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(Q.sharp_constant == doctest::Approx(2.0 / K).epsilon(1e-12));
  CHECK(std::abs(Q.stabilizer - 1.0) < 10.0 * Q.tolerance);
  // the stored norms are those of the stored profile
  CHECK(sobolev_norm(Q.profile, 1.0) == doctest::Approx(Q.h1_norm).epsilon(1e-6));
  CHECK(el_residual(Q.spectrum, ProfileKind::NewGroundState) == doctest::Approx(Q.el_residual).epsilon(1e-12));
  MESSAGE("||Q||_{H^1/2} = " << Q.hhalf_norm << ", C5 = " << Q.sharp_constant << ", iterations " << Q.iterations);
}

TEST_CASE("ground state tail decays like r^-4") {
  const auto& Q = ground_state();
  const auto& g = gs_grid();
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.r(i) < 0.1 * g.r_max()) continue;
    const double v = Q.profile[i].real() * std::pow(g.r(i), 4);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(lo > 0.0);
  CHECK(hi < 2.0 * lo);
}

TEST_CASE("sharp constant is invariant under u -> a u(b x)") {
  const auto& Q = ground_state();
  for (auto [a, b] : {std::pair{3.0, 2.0}, std::pair{0.2, 1.25}}) {
    // spectrally a b^-5 Q^(rho / b)
    const auto scaled = dilate(Q.spectrum, a * std::pow(b, -5.0), 1.0 / b);
    CHECK(weinstein(scaled) * Q.sharp_constant == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("sharpness of the Hartree inequality over a random corpus") {
  const auto& Q = ground_state();
  const RadialGrid g(4096, 40.0);
  std::mt19937 rng(2024);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) worst = std::max(worst, hls_ratio(random_profile(g, rng)));
  MESSAGE("largest corpus ratio / C5 = " << worst / Q.sharp_constant);
  CHECK(worst <= Q.sharp_constant * (1.0 + 1e-4));
  CHECK(hls_ratio(Q.spectrum) == doctest::Approx(Q.sharp_constant).epsilon(1e-8));
}

TEST_CASE("seed independence and grid convergence") {
  const auto& Q = ground_state();
  for (double w : {0.5, 2.0}) {
    GroundStateOptions opts;
    opts.seed_width = w;
    const auto other = solve_ground_state(gs_grid(), opts);
    CAPTURE(w);
    CHECK(linf_rel(other.profile, Q.profile) < 1e-6);
  }
  const auto fine = solve_ground_state(RadialGrid(2 * kGroundStateNodes, 2.0 * kGroundStateRadius));
  CHECK(fine.hhalf_norm == doctest::Approx(Q.hhalf_norm).epsilon(1e-4));
  CHECK(thresholds(fine).scattering == doctest::Approx(thresholds(Q).scattering).epsilon(1e-4));
}

TEST_CASE("thresholds") {
  const auto t = thresholds(ground_state());
  CHECK(t.scattering > 0.0);
  CHECK(t.global > 0.0);
  CHECK(std::abs(t.scattering / t.global - std::sqrt(6.0) / 3.0) < 1e-15);
  CHECK(ground_state().threshold_scattering.value() == t.scattering);
  CHECK(ground_state().threshold_global.value() == t.global);
}

TEST_CASE("Euler-Lagrange residual") {
  const RadialGrid g(4096, 40.0);
  CHECK(el_residual(RadialField(g, Side::Physical), ProfileKind::NewGroundState) == 0.0);
  CHECK(el_residual(RadialField(g, Side::Physical), ProfileKind::Soliton) == 0.0);

  const auto& S = soliton();
  const auto bump = RadialField::sample(S.profile.grid(), [](double r) { return std::exp(-r * r / 2); });
  const double base = el_residual(S.profile, ProfileKind::Soliton);
  CHECK(el_residual(S.profile + 0.01 * bump, ProfileKind::Soliton) > 10.0 * base);

  const auto& Q = ground_state();
  const auto qbump = RadialField::sample(gs_grid(), [](double r) { return std::exp(-r * r / 2); });
  CHECK(el_residual(Q.profile + 0.01 * qbump, ProfileKind::NewGroundState) > 10.0 * Q.el_residual);

  RadialField bad(g, Side::Physical);
  bad[3] = std::nan("");
  try {
    (void)el_residual(bad, ProfileKind::Soliton);
    FAIL("expected NonFinite");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonFinite);
  }
}

TEST_CASE("soliton profile") {
  const auto& S = soliton();
  for (const auto& c : check_invariants(S)) {
    CAPTURE(c.name);
    CAPTURE(c.value);
    CHECK(c.pass);
  }
  CHECK(S.el_residual < 1e-8);
  CHECK_FALSE(S.threshold_scattering.has_value());
  CHECK_FALSE(S.threshold_global.has_value());
  // Q solves Delta Q + W Q = Q on the physical side too
  const auto lap = fractional_derivative(S.profile, 2.0);
  RadialField dens(S.profile.grid(), Side::Physical);
  for (std::size_t i = 0; i < dens.size(); ++i) dens[i] = std::norm(S.profile[i]);
  const auto W = hartree_convolution(dens);
  double err = 0.0;
  for (std::size_t i = 0; i < dens.size(); ++i)
    err = std::max(err, std::abs(-lap[i] + W[i] * S.profile[i] - S.profile[i]));
  CHECK(err < 1e-7 * S.profile[0].real());
}

TEST_CASE("solver failures") {
  const RadialGrid g(4096, 40.0);
  SUBCASE("tail not captured") {
    try {
      (void)solve_ground_state(g);
      FAIL("expected GridTooSmall");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::GridTooSmall);
    }
  }
  SUBCASE("iteration budget") {
    GroundStateOptions opts;
    opts.max_iter = 5;
    try {
      (void)solve_soliton_profile(g, opts);
      FAIL("expected NoConvergence");
    } catch (const ConvergenceError& e) {
      CHECK(e.kind() == ErrorKind::NoConvergence);
      CHECK(e.history().size() == 5);
    }
  }
  SUBCASE("zero seed") {
    GroundStateOptions opts;
    opts.seed_amplitude = 0.0;
    try {
      (void)solve_soliton_profile(g, opts);
      FAIL("expected CollapseToZero");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::CollapseToZero);
    }
  }
  SUBCASE("unresolved seed") {
    GroundStateOptions opts;
    opts.seed_width = 0.05;
    CHECK_THROWS_AS(solve_soliton_profile(g, opts), Error);
    opts.seed_width = 2.0;
    CHECK_THROWS_AS(solve_soliton_profile(g, opts), Error);
  }
}

TEST_CASE("fallback descent") {
  const RadialGrid g(4096, 40.0);
  const auto seed = RadialField::sample(g, [](double rho) { return std::exp(-rho * rho / 2); }, Side::Spectral);
  for (auto kind : {ProfileKind::NewGroundState, ProfileKind::Soliton}) {
    const double before = log_weinstein(seed, kind);
    const double after = log_weinstein(weinstein_descent(seed, kind, 20), kind);
    CHECK(after < before);
  }
  // forcing the fallback after every non-halving step still reaches the soliton
  GroundStateOptions opts;
  opts.stall_window = 1;
  const auto S = solve_soliton_profile(g, opts);
  CHECK(S.used_fallback);
  CHECK(linf_rel(S.profile, soliton().profile) < 1e-6);
}

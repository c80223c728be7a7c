#include "hartree/ground_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hartree/constants.hpp"
#include "hartree/functionals.hpp"
#include "hartree/spectral.hpp"

namespace hartree {

namespace {

constexpr double kRoundoffFloor = 1e-13;

// Symbol of the linear part: rho^2 + rho for Q, rho^2 + 1 for the soliton.
double symbol(double rho, ProfileKind kind) { return rho * rho + (kind == ProfileKind::NewGroundState ? rho : 1.0); }

std::vector<double> real_parts(const RadialField& f) {
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) v[i] = f[i].real();
  return v;
}

// Spectral representation of the nonlinearity (|x|^-3 * Q^2) Q, for spectral Q.
// Also returns P(Q) = int W Q^2.
std::vector<double> nonlinearity(const RadialField& spec, double* potential = nullptr) {
  const auto Q = hankel_transform(spec);
  RadialField dens(Q.grid(), Side::Physical);
  for (std::size_t i = 0; i < Q.size(); ++i) dens[i] = Q[i].real() * Q[i].real();
  const auto W = hartree_convolution(dens);
  RadialField WQ(Q.grid(), Side::Physical);
  double P = 0.0;
  const auto w = Q.grid().physical_weights();
  for (std::size_t i = 0; i < Q.size(); ++i) {
    WQ[i] = W[i].real() * Q[i].real();
    P += w[i] * W[i].real() * dens[i].real();
  }
  if (potential) *potential = P;
  return real_parts(hankel_transform(WQ));
}

// sum_k w_k m(rho_k) a_k b_k over the spectral lattice.
template <class M>
double pairing(const RadialGrid& g, const std::vector<double>& a, const std::vector<double>& b, M m) {
  const auto w = g.spectral_weights();
  const auto rho = g.frequencies();
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += w[k] * m(rho[k]) * a[k] * b[k];
  return s;
}

RadialField spectral_field(const RadialGrid& g, const std::vector<double>& v) {
  RadialField f(g, Side::Spectral);
  for (std::size_t k = 0; k < v.size(); ++k) f[k] = v[k];
  return f;
}

double residual_norm(const RadialGrid& g, const std::vector<double>& q, const std::vector<double>& N, ProfileKind kind) {
  const auto w = g.spectral_weights();
  const auto rho = g.frequencies();
  double s = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    const double r = N[k] - symbol(rho[k], kind) * q[k];
    s += w[k] * r * r / rho[k];
  }
  return std::sqrt(s);
}

// Quadratic forms of the functional minimized by the descent: log A^alpha B^beta / P.
struct FunctionalShape {
  double alpha, beta;
  double (*ma)(double);
  double (*mb)(double);
};

FunctionalShape shape(ProfileKind kind) {
  if (kind == ProfileKind::NewGroundState)
    return {1.0, 1.0, [](double r) { return r; }, [](double r) { return r * r; }};
  return {0.5, 1.5, [](double) { return 1.0; }, [](double r) { return r * r; }};
}

double log_functional(const RadialGrid& g, const std::vector<double>& q, ProfileKind kind, double* P_out = nullptr,
                      std::vector<double>* N_out = nullptr) {
  const auto sh = shape(kind);
  double P = 0.0;
  auto N = nonlinearity(spectral_field(g, q), &P);
  const double A = pairing(g, q, q, sh.ma), B = pairing(g, q, q, sh.mb);
  require(P > 0.0 && A > 0.0 && B > 0.0, ErrorKind::DegenerateDenominator, "Weinstein functional of a degenerate field");
  if (P_out) *P_out = P;
  if (N_out) *N_out = std::move(N);
  return sh.alpha * std::log(A) + sh.beta * std::log(B) - std::log(P);
}

void require_resolved(const RadialGrid& g, double w) {
  require(std::isfinite(w) && w > 0.0, ErrorKind::RangeError, "seed_width must be positive");
  std::ostringstream os;
  os << "grid (n = " << g.size() << ", r_max = " << g.r_max() << ") cannot resolve seed width " << w
     << ": need dr <= " << 0.05 * w << " and r_max >= " << 40.0 * w;
  require(g.dr() <= 0.05 * w * (1 + 1e-12) && g.r_max() >= 40.0 * w, ErrorKind::RangeError, os.str());
}

GroundStateResult solve(const RadialGrid& g, const GroundStateOptions& opts, ProfileKind kind) {
  require(opts.tol > 0.0 && opts.max_iter > 0 && opts.stall_window > 0, ErrorKind::RangeError,
          "solver options: tol, max_iter and stall_window must be positive");
  require(std::isfinite(opts.seed_amplitude), ErrorKind::NonFinite, "seed amplitude must be finite");
  require_resolved(g, opts.seed_width);
  const auto rho = g.frequencies();
  const std::size_t n = g.size();
  const double w = opts.seed_width;
  const auto hhalf_weight = [](double r) { return r; };

  std::vector<double> q(n), L(n);
  for (std::size_t k = 0; k < n; ++k) {
    q[k] = opts.seed_amplitude * std::pow(w, 5) * std::exp(-0.5 * w * w * rho[k] * rho[k]);
    L[k] = symbol(rho[k], kind);
  }

  std::vector<double> history;
  double S = 0.0, best = std::numeric_limits<double>::infinity();
  int since_best = 0, it = 0;
  bool fallback = false, converged = false;
  for (; it < opts.max_iter; ++it) {
    const auto N = nonlinearity(spectral_field(g, q));
    const double num = pairing(g, q, q, [&](double r) { return symbol(r, kind); });
    const double den = pairing(g, q, N, [](double) { return 1.0; });
    const double qn = std::sqrt(pairing(g, q, q, hhalf_weight));
    if (!(qn > 1e-150) || !(den > 0.0))
      fail(ErrorKind::CollapseToZero, "iterate collapsed to zero at iteration " + std::to_string(it));
    S = num / den;
    std::vector<double> next(n);
    const double factor = std::pow(S, 1.5);
    for (std::size_t k = 0; k < n; ++k) next[k] = factor * N[k] / L[k];
    double d = 0.0;
    {
      std::vector<double> diff(n);
      for (std::size_t k = 0; k < n; ++k) diff[k] = next[k] - q[k];
      d = std::sqrt(pairing(g, diff, diff, hhalf_weight)) / qn;
    }
    require(std::isfinite(d), ErrorKind::NonFinite, "ground-state iterate became non-finite");
    history.push_back(d);
    q = std::move(next);
    if (d < opts.tol) {
      const double nq = std::sqrt(pairing(g, q, q, hhalf_weight));
      if (residual_norm(g, q, nonlinearity(spectral_field(g, q)), kind) < 10.0 * opts.tol * nq) {
        converged = true;
        ++it;
        break;
      }
    }
    if (d < 0.5 * best) {
      best = d;
      since_best = 0;
    } else if (++since_best >= opts.stall_window && d > opts.tol && !fallback) {
      // the fixed point is not attracting from here: descend on the functional,
      // then scale onto the equation and resume
      fallback = true;
      auto f = weinstein_descent(spectral_field(g, q), kind, 200);
      q = real_parts(f);
      double P = 0.0;
      std::vector<double> Nq;
      (void)log_functional(g, q, kind, &P, &Nq);
      const double c = pairing(g, q, q, [&](double r) { return symbol(r, kind); }) / pairing(g, q, Nq, [](double) { return 1.0; });
      for (auto& v : q) v *= std::sqrt(c);
      best = std::numeric_limits<double>::infinity();
      since_best = 0;
    }
  }
  if (!converged) {
    std::ostringstream os;
    os << "no convergence after " << opts.max_iter << " iterations (last increment "
       << (history.empty() ? 0.0 : history.back()) << ")";
    throw ConvergenceError(os.str(), std::move(history));
  }

  GroundStateResult res(kind, RadialField(g, Side::Physical), spectral_field(g, q));
  res.stabilizer = S;
  res.iterations = it;
  res.used_fallback = fallback;
  res.tolerance = opts.tol;
  res.history = std::move(history);

  if (kind == ProfileKind::NewGroundState) {
    // u_{a,b} = a u(b x) with ||u_{a,b}||_{H^1/2} = ||nabla u_{a,b}||_2 = 1, whose
    // Hartree energy is the sharp constant; then Q = sqrt(2 / C5) u_{a,b}.
    const double K = std::pow(sobolev_norm(res.spectrum, 0.5), 2), H = std::pow(sobolev_norm(res.spectrum, 1.0), 2);
    const double b = K / H, a = b * b / std::sqrt(K);
    // spectrally: a b^-5 q(rho / b)
    const auto star = dilate(res.spectrum, a * std::pow(b, -5.0), 1.0 / b);
    const double C5 = hartree_energy(star);
    res.spectrum = std::sqrt(2.0 / C5) * star;
    res.sharp_constant = C5;
    res.rescale_a = a;
    res.rescale_b = b;
  }
  res.profile = hankel_transform(res.spectrum);
  for (auto& v : res.profile.values()) v = v.real();

  res.hhalf_norm = sobolev_norm(res.spectrum, 0.5);
  res.h1_norm = sobolev_norm(res.spectrum, 1.0);
  res.potential = hartree_energy(res.profile);
  res.el_residual = el_residual(res.spectrum, kind);
  if (kind == ProfileKind::NewGroundState) {
    res.threshold_scattering = kScatteringFactor * res.hhalf_norm;
    res.threshold_global = res.hhalf_norm;
  }

  const double tail = tail_ratio(res.profile);
  if (tail > kTailWarningLevel) {
    std::ostringstream os;
    os << "converged profile has tail ratio " << tail << " > " << kTailWarningLevel << "; enlarge r_max";
    fail(ErrorKind::GridTooSmall, os.str());
  }
  const auto& p = res.profile;
  const double peak = p[0].real();
  for (std::size_t i = 0; i < n; ++i) {
    // below kRoundoffFloor the sign of an exponentially small tail is transform noise
    const bool ok = (p[i].real() > 0.0 || std::abs(p[i].real()) < kRoundoffFloor * peak) &&
                    (i == 0 || p[i].real() <= p[i - 1].real() + 1e-10 * peak);
    if (!ok) {
      std::ostringstream os;
      os << "converged profile is not positive and nonincreasing at r = " << g.r(i);
      throw ConvergenceError(os.str(), res.history);
    }
  }
  return res;
}

}  // namespace

double log_weinstein(const RadialField& f, ProfileKind kind) {
  const auto s = to_side(f, Side::Spectral);
  require_finite(s, "log_weinstein");
  return log_functional(s.grid(), real_parts(s), kind);
}

RadialField weinstein_descent(const RadialField& start, ProfileKind kind, int steps) {
  const auto s0 = to_side(start, Side::Spectral);
  require_finite(s0, "weinstein_descent");
  const auto& g = s0.grid();
  const auto rho = g.frequencies();
  const auto sh = shape(kind);
  auto q = real_parts(s0);
  double P = 0.0;
  std::vector<double> N;
  double J = log_functional(g, q, kind, &P, &N);
  double tau = 0.5;
  for (int step = 0; step < steps; ++step) {
    const double A = pairing(g, q, q, sh.ma), B = pairing(g, q, q, sh.mb);
    // gradient of log J in the spectral L^2 pairing, preconditioned by 1 / (m_a + m_b)
    std::vector<double> dir(q.size());
    for (std::size_t k = 0; k < q.size(); ++k) {
      const double grad = 2.0 * sh.alpha * sh.ma(rho[k]) * q[k] / A + 2.0 * sh.beta * sh.mb(rho[k]) * q[k] / B - 4.0 * N[k] / P;
      dir[k] = grad / (sh.ma(rho[k]) + sh.mb(rho[k])) * std::sqrt(A + B);
    }
    bool moved = false;
    for (int tries = 0; tries < 30 && !moved; ++tries) {
      std::vector<double> trial(q.size());
      for (std::size_t k = 0; k < q.size(); ++k) trial[k] = q[k] - tau * dir[k];
      double Pt = 0.0;
      std::vector<double> Nt;
      double Jt = 0.0;
      try {
        Jt = log_functional(g, trial, kind, &Pt, &Nt);
      } catch (const Error&) {
        Jt = std::numeric_limits<double>::infinity();
      }
      if (Jt < J) {
        q = std::move(trial);
        J = Jt;
        P = Pt;
        N = std::move(Nt);
        tau *= 1.5;
        moved = true;
      } else {
        tau *= 0.5;
      }
    }
    if (!moved) break;
    // keep the amplitude O(1): J is invariant under scalar multiples
    const double scale = 1.0 / std::sqrt(pairing(g, q, q, sh.mb));
    for (auto& v : q) v *= scale;
    for (auto& v : N) v *= scale * scale * scale;
    P *= std::pow(scale, 4);
  }
  return spectral_field(g, q);
}

GroundStateResult solve_ground_state(const RadialGrid& grid, const GroundStateOptions& opts) {
  return solve(grid, opts, ProfileKind::NewGroundState);
}

GroundStateResult solve_soliton_profile(const RadialGrid& grid, const GroundStateOptions& opts) {
  return solve(grid, opts, ProfileKind::Soliton);
}

double el_residual(const RadialField& Q, ProfileKind kind) {
  require_finite(Q, "el_residual");
  require(Q.imag_fraction() <= 1e-12, ErrorKind::RangeError, "el_residual: profile must be real");
  const auto s = to_side(Q, Side::Spectral);
  const auto q = real_parts(s);
  if (std::all_of(q.begin(), q.end(), [](double v) { return v == 0.0; })) return 0.0;
  return residual_norm(s.grid(), q, nonlinearity(spectral_field(s.grid(), q)), kind);
}

Thresholds thresholds(const GroundStateResult& res) {
  return {kScatteringFactor * res.hhalf_norm, res.hhalf_norm};
}

std::vector<InvariantCheck> check_invariants(const GroundStateResult& res) {
  std::vector<InvariantCheck> out;
  auto add = [&](const char* name, double value, double bound) { out.push_back({name, value, bound, value <= bound}); };
  const auto& p = res.profile;
  double worst = 0.0, min_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (std::abs(p[i].real()) >= kRoundoffFloor * p[0].real()) min_value = std::min(min_value, p[i].real());
    if (i > 0) worst = std::max(worst, (p[i].real() - p[i - 1].real()) / p[0].real());
  }
  add("profile_positive", min_value > 0.0 ? 0.0 : 1.0, 0.0);
  add("profile_nonincreasing", worst, 1e-10);
  const double K = res.hhalf_norm * res.hhalf_norm, H = res.h1_norm * res.h1_norm, P = res.potential;
  add("el_residual", res.el_residual / res.hhalf_norm, 10.0 * res.tolerance);
  add("stabilizer", std::abs(res.stabilizer - 1.0), 10.0 * res.tolerance);
  if (res.kind == ProfileKind::NewGroundState) {
    add("sharp_constant_definition", std::abs(res.sharp_constant * K / 2.0 - 1.0), 1e-12);
    add("kinetic_balance", std::abs(H - K) / H, 1e-6);
    add("pohozaev", std::abs(P - 2.0 * H) / P, 1e-6);
    add("energy_zero", std::abs(0.5 * H - 0.25 * P) / H, 1e-6);
    add("weinstein_sharp", std::abs(K * H / P * res.sharp_constant - 1.0), 1e-8);
  } else {
    // pairing with the profile gives P = H + M; the dilation identity gives 3H/2 + 5M/2 = 7P/4
    const double M = std::pow(sobolev_norm(res.spectrum, 0.0), 2);
    add("soliton_pairing", std::abs(P - H - M) / P, 1e-6);
    add("soliton_dilation", std::abs(H - 3.0 * M) / H, 1e-6);
  }
  return out;
}

}  // namespace hartree

#pragma once

#include <optional>
#include <vector>

#include "hartree/error.hpp"
#include "hartree/radial_field.hpp"

namespace hartree {

/// Which elliptic equation a profile solves:
///   NewGroundState:  Delta Q + (|x|^-3 * Q^2) Q = |nabla| Q
///   Soliton:         Delta Q + (|x|^-3 * Q^2) Q = Q
enum class ProfileKind { NewGroundState, Soliton };

/// Q decays like r^-4, so the truncated lattice perturbs the Pohozaev balance
/// ||Q||_{H^1/2} = ||nabla Q||_2 at order r_max^-3; this grid keeps that below
/// 1e-9 while resolving seeds down to width 0.5.
inline constexpr std::size_t kGroundStateNodes = 65536;
inline constexpr double kGroundStateRadius = 1024.0;

struct GroundStateOptions {
  double tol = 1e-10;            // on the relative H^1/2 increment; el_residual must also
                                 // fall below 10 tol relative to ||Q||_{H^1/2}
  int max_iter = 5000;
  double seed_width = 1.0;       // Gaussian seed A exp(-r^2 / (2 w^2))
  double seed_amplitude = 1.0;
  int stall_window = 50;         // iterations without progress before the fallback descent
};

struct GroundStateResult {
  GroundStateResult(ProfileKind k, RadialField p, RadialField s)
      : kind(k), profile(std::move(p)), spectrum(std::move(s)) {}

  ProfileKind kind;
  RadialField profile;   // physical side
  RadialField spectrum;  // the iteration's master variable; profile is its transform
  double hhalf_norm = 0.0;
  double h1_norm = 0.0;
  double potential = 0.0;
  double sharp_constant = 0.0;  // set for NewGroundState only (0 otherwise)
  double el_residual = 0.0;
  double tolerance = 0.0;       // the tol the solve was run with
  double stabilizer = 0.0;      // last Petviashvili factor S_n
  int iterations = 0;
  bool used_fallback = false;
  double rescale_a = 1.0, rescale_b = 1.0;  // normalization applied after convergence
  std::optional<double> threshold_scattering;
  std::optional<double> threshold_global;
  std::vector<double> history;  // relative increment per iteration
};

/// NoConvergence carrying the per-iteration increment history.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> history)
      : Error(ErrorKind::NoConvergence, what), history_(std::move(history)) {}
  const std::vector<double>& history() const noexcept { return history_; }

 private:
  std::vector<double> history_;
};

/// Petviashvili iteration for Q with L = rho^2 + rho, then the (a, b) normalization
/// that makes ||Q||_{H^1/2} = ||nabla Q||_2 exactly and sets the sharp constant.
/// Throws ConvergenceError, CollapseToZero, GridTooSmall (tail warning on the
/// profile) and RangeError when the grid cannot resolve the seed.
GroundStateResult solve_ground_state(const RadialGrid& grid, const GroundStateOptions& opts = {});

/// Same iteration with L = rho^2 + 1 for the stationary soliton profile.
GroundStateResult solve_soliton_profile(const RadialGrid& grid, const GroundStateOptions& opts = {});

/// Preconditioned gradient descent on log of the profile's Weinstein-type
/// functional (J for NewGroundState, ||u||_2 ||nabla u||_2^3 / P for Soliton),
/// starting from a spectral field. Used when the fixed-point iteration stalls.
RadialField weinstein_descent(const RadialField& start, ProfileKind kind, int steps);

/// log of the functional minimized by weinstein_descent.
double log_weinstein(const RadialField& f, ProfileKind kind);

/// H^{-1/2} norm of Delta Q + (|x|^-3 * Q^2) Q - |nabla| Q (resp. - Q). Q must be
/// real; either side is accepted (a spectral Q is used without re-transforming).
double el_residual(const RadialField& Q, ProfileKind kind);

struct Thresholds {
  double scattering = 0.0;  // sqrt(6)/3 ||Q||_{H^1/2}
  double global = 0.0;      // ||Q||_{H^1/2}
};

Thresholds thresholds(const GroundStateResult& res);

/// Invariant checks of a GroundStateResult, by name, with the measured value
/// and the bound it was held to.
struct InvariantCheck {
  const char* name;
  double value;
  double bound;
  bool pass;
};

std::vector<InvariantCheck> check_invariants(const GroundStateResult& res);

}  // namespace hartree

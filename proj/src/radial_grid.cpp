#include "hartree/radial_grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "hartree/constants.hpp"
#include "hartree/error.hpp"

namespace hartree {
namespace detail {

namespace {

// FFTW planning and plan destruction are not thread-safe; execution with
// fftw_execute_r2r on distinct arrays is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// Outputs this close to the origin are divided by j^2 when converted back to
// field values, which amplifies the FFT round-off; they are summed directly.
constexpr std::size_t kDirectRows = 32;

// K(x) = sin x / x - cos x, by its Taylor series where the difference cancels.
double radial_kernel(double x) {
  if (x < 0.1) {
    const double x2 = x * x;
    return x2 * (1.0 / 3.0 - x2 / 30.0 + x2 * x2 / 840.0 - x2 * x2 * x2 / 45360.0);
  }
  return std::sin(x) / x - std::cos(x);
}

}  // namespace

struct KernelTables {
  explicit KernelTables(std::size_t n);
  ~KernelTables();
  KernelTables(const KernelTables&) = delete;
  KernelTables& operator=(const KernelTables&) = delete;

  void apply(const double* in, double* out) const;

  std::size_t n;
  fftw_plan sine_plan = nullptr;
  fftw_plan cosine_plan = nullptr;
  std::size_t direct_rows = 0;
  std::vector<double> direct;  // direct_rows x n block of the kernel matrix
};

KernelTables::KernelTables(std::size_t n_) : n(n_) {
  std::vector<double> a(n + 2), b(n + 2);
  {
    std::lock_guard lock(fftw_planner_mutex());
    sine_plan = fftw_plan_r2r_1d(static_cast<int>(n), a.data(), b.data(), FFTW_RODFT00,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
    cosine_plan = fftw_plan_r2r_1d(static_cast<int>(n + 2), a.data(), b.data(), FFTW_REDFT00,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  require(sine_plan != nullptr && cosine_plan != nullptr, ErrorKind::RangeError,
          "FFTW could not plan transforms of size " + std::to_string(n));
  direct_rows = std::min(kDirectRows, n);
  direct.resize(direct_rows * n);
  const double scale = std::sqrt(2.0 / static_cast<double>(n + 1));
  const double unit = std::numbers::pi / static_cast<double>(n + 1);
  for (std::size_t k = 0; k < direct_rows; ++k)
    for (std::size_t j = 0; j < n; ++j)
      direct[k * n + j] = scale * radial_kernel(static_cast<double>((k + 1) * (j + 1)) * unit);
}

KernelTables::~KernelTables() {
  std::lock_guard lock(fftw_planner_mutex());
  if (sine_plan) fftw_destroy_plan(sine_plan);
  if (cosine_plan) fftw_destroy_plan(cosine_plan);
}

void KernelTables::apply(const double* in, double* out) const {
  std::vector<double> s_in(n), s_out(n), c_in(n + 2), c_out(n + 2);
  for (std::size_t j = 0; j < n; ++j) s_in[j] = in[j] / static_cast<double>(j + 1);
  c_in[0] = 0.0;
  c_in[n + 1] = 0.0;
  std::copy(in, in + n, c_in.begin() + 1);
  fftw_execute_r2r(sine_plan, s_in.data(), s_out.data());
  fftw_execute_r2r(cosine_plan, c_in.data(), c_out.data());
  const double np1 = static_cast<double>(n + 1);
  const double scale = std::sqrt(2.0 / np1);
  for (std::size_t k = 0; k < n; ++k) {
    const double kk = static_cast<double>(k + 1);
    out[k] = scale * (0.5 * np1 / (std::numbers::pi * kk) * s_out[k] - 0.5 * c_out[k + 1]);
  }
  for (std::size_t k = 0; k < direct_rows; ++k) {
    const double* row = direct.data() + k * n;
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) sum += row[j] * in[j];
    out[k] = sum;
  }
}

struct GridLayout {
  std::size_t n;
  double r_max, dr, drho;
  std::vector<double> r, rho, wr, wrho;
  std::shared_ptr<const KernelTables> tables;
};

namespace {

std::shared_ptr<const KernelTables> kernel_for(std::size_t n) {
  static std::mutex m;
  static std::map<std::size_t, std::shared_ptr<const KernelTables>> cache;
  std::lock_guard lock(m);
  auto& slot = cache[n];
  if (!slot) slot = std::make_shared<const KernelTables>(n);
  return slot;
}

}  // namespace
}  // namespace detail

RadialGrid::RadialGrid(std::size_t n, double r_max) {
  require(n >= 8, ErrorKind::RangeError, "grid needs at least 8 nodes, got " + std::to_string(n));
  require(std::isfinite(r_max) && r_max > 0.0, ErrorKind::RangeError, "r_max must be positive and finite");
  auto layout = std::make_shared<detail::GridLayout>();
  layout->n = n;
  layout->r_max = r_max;
  layout->dr = r_max / static_cast<double>(n + 1);
  layout->drho = std::numbers::pi / r_max;
  layout->r.resize(n);
  layout->rho.resize(n);
  layout->wr.resize(n);
  layout->wrho.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double j = static_cast<double>(i + 1);
    layout->r[i] = j * layout->dr;
    layout->rho[i] = j * layout->drho;
    layout->wr[i] = kSphere4 * std::pow(layout->r[i], 4) * layout->dr;
    layout->wrho[i] = kSphere4 * std::pow(layout->rho[i], 4) * layout->drho;
  }
  layout->tables = detail::kernel_for(n);
  layout_ = std::move(layout);
}

std::size_t RadialGrid::size() const noexcept { return layout_->n; }
double RadialGrid::r_max() const noexcept { return layout_->r_max; }
double RadialGrid::dr() const noexcept { return layout_->dr; }
double RadialGrid::drho() const noexcept { return layout_->drho; }
double RadialGrid::rho_max() const noexcept { return layout_->rho.back(); }
std::span<const double> RadialGrid::radii() const noexcept { return layout_->r; }
std::span<const double> RadialGrid::frequencies() const noexcept { return layout_->rho; }
std::span<const double> RadialGrid::physical_weights() const noexcept { return layout_->wr; }
std::span<const double> RadialGrid::spectral_weights() const noexcept { return layout_->wrho; }

void RadialGrid::apply_kernel(std::span<const double> in, std::span<double> out) const {
  require(in.size() == size() && out.size() == size(), ErrorKind::GridMismatch, "kernel buffer size mismatch");
  layout_->tables->apply(in.data(), out.data());
}

}  // namespace hartree

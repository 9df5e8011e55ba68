#include "ddalab/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace ddalab::nse {

namespace {

// FFTW planning and plan destruction are not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

FourierGrid::FourierGrid(int n, double length) : n_(n), length_(length) {
  if (n < 8 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("FourierGrid: N must be a power of two >= 8");
  }
  if (!(length > 0.0)) {
    throw std::invalid_argument("FourierGrid: L must be positive");
  }
  max_mode_ = (n - 1) / 3;
  size_ = static_cast<std::size_t>(n) * static_cast<std::size_t>(ny_half());
  mode_x_.resize(size_);
  mode_y_.resize(size_);
  kx_.resize(size_);
  ky_.resize(size_);
  k2_.resize(size_);
  weight_.resize(size_);
  retained_.resize(size_);
  const double k0 = 2.0 * std::numbers::pi / length;
  for (int i = 0; i < n; ++i) {
    const int m1 = i <= n / 2 ? i : i - n;
    for (int j = 0; j < ny_half(); ++j) {
      const std::size_t idx = index(i, j);
      mode_x_[idx] = m1;
      mode_y_[idx] = j;
      kx_[idx] = k0 * m1;
      ky_[idx] = k0 * j;
      k2_[idx] = kx_[idx] * kx_[idx] + ky_[idx] * ky_[idx];
      weight_[idx] = (j == 0 || j == n / 2) ? 1.0 : 2.0;
      if (m1 == 0 && j == 0) weight_[idx] = 0.0;
      const bool keep = std::abs(m1) <= max_mode_ && j <= max_mode_ &&
                        !(m1 == 0 && j == 0);
      retained_[idx] = keep ? 1 : 0;
    }
  }
}

double FourierGrid::lambda1() const {
  const double k0 = 2.0 * std::numbers::pi / length_;
  return k0 * k0;
}

struct Transform::Impl {
  int n = 0;
  std::size_t nspec = 0;
  std::size_t nphys = 0;
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

Transform::Transform(const FourierGrid& grid) : impl_(std::make_unique<Impl>()) {
  impl_->n = grid.n();
  impl_->nspec = grid.size();
  impl_->nphys = grid.physical_size();
  std::lock_guard<std::mutex> lock(planner_mutex());
  impl_->real = fftw_alloc_real(impl_->nphys);
  impl_->spec = fftw_alloc_complex(impl_->nspec);
  if (impl_->real == nullptr || impl_->spec == nullptr) {
    fftw_free(impl_->real);
    fftw_free(impl_->spec);
    throw std::bad_alloc();
  }
  // FFTW_ESTIMATE keeps the plan (and hence the bits) independent of timing.
  impl_->forward = fftw_plan_dft_r2c_2d(impl_->n, impl_->n, impl_->real,
                                        impl_->spec, FFTW_ESTIMATE);
  impl_->backward = fftw_plan_dft_c2r_2d(impl_->n, impl_->n, impl_->spec,
                                         impl_->real, FFTW_ESTIMATE);
}

Transform::~Transform() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(impl_->forward);
  fftw_destroy_plan(impl_->backward);
  fftw_free(impl_->real);
  fftw_free(impl_->spec);
}

void Transform::to_physical(std::span<const Complex> spectral,
                            std::span<double> physical) {
  if (spectral.size() != impl_->nspec || physical.size() != impl_->nphys) {
    throw std::invalid_argument("Transform::to_physical: size mismatch");
  }
  auto* dst = reinterpret_cast<Complex*>(impl_->spec);
  std::copy(spectral.begin(), spectral.end(), dst);
  fftw_execute(impl_->backward);
  std::copy(impl_->real, impl_->real + impl_->nphys, physical.begin());
}

void Transform::to_spectral(std::span<const double> physical,
                            std::span<Complex> spectral) {
  if (spectral.size() != impl_->nspec || physical.size() != impl_->nphys) {
    throw std::invalid_argument("Transform::to_spectral: size mismatch");
  }
  std::copy(physical.begin(), physical.end(), impl_->real);
  fftw_execute(impl_->forward);
  const double scale = 1.0 / static_cast<double>(impl_->nphys);
  const auto* src = reinterpret_cast<const Complex*>(impl_->spec);
  for (std::size_t i = 0; i < impl_->nspec; ++i) spectral[i] = src[i] * scale;
}

}  // namespace ddalab::nse

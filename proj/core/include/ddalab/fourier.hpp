#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace ddalab::nse {

using Complex = std::complex<double>;

/// Periodic box [0, L]^2 sampled on N x N points, with the half-plane
/// spectral layout of a real-to-complex transform: index (i, j) with
/// i in [0, N) (x wavenumber, negative ones wrapped) and j in [0, N/2].
class FourierGrid {
 public:
  FourierGrid(int n, double length);

  int n() const { return n_; }
  double length() const { return length_; }
  int ny_half() const { return n_ / 2 + 1; }
  /// Complex coefficients per velocity component.
  std::size_t size() const { return size_; }
  std::size_t physical_size() const {
    return static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_);
  }

  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(ny_half()) +
           static_cast<std::size_t>(j);
  }
  /// Index of the integer wavevector (m1, m2); m2 must be >= 0.
  std::size_t index_of_mode(int m1, int m2) const {
    return index(m1 >= 0 ? m1 : m1 + n_, m2);
  }

  int mode_x(std::size_t idx) const { return mode_x_[idx]; }
  int mode_y(std::size_t idx) const { return mode_y_[idx]; }
  double kx(std::size_t idx) const { return kx_[idx]; }
  double ky(std::size_t idx) const { return ky_[idx]; }
  /// |k|^2 with k = (2 pi / L) m.
  double k2(std::size_t idx) const { return k2_[idx]; }
  /// 2 for coefficients standing in for a conjugate partner (0 < j < N/2),
  /// 1 otherwise; 0 for the mean mode, which is never part of the state.
  double weight(std::size_t idx) const { return weight_[idx]; }
  /// Two-thirds rule: |m1|, |m2| <= max_mode() and (m1, m2) != 0.
  bool retained(std::size_t idx) const { return retained_[idx] != 0; }
  int max_mode() const { return max_mode_; }

  /// Smallest eigenvalue of the Stokes operator, (2 pi / L)^2.
  double lambda1() const;
  double dx() const { return length_ / n_; }

  friend bool operator==(const FourierGrid& a, const FourierGrid& b) {
    return a.n_ == b.n_ && a.length_ == b.length_;
  }

 private:
  int n_;
  double length_;
  int max_mode_;
  std::size_t size_;
  std::vector<int> mode_x_, mode_y_;
  std::vector<double> kx_, ky_, k2_, weight_;
  std::vector<unsigned char> retained_;
};

/// FFTW-backed transforms between the spectral layout of FourierGrid and
/// N x N real arrays (row-major, x index first). Owns its plans and aligned
/// buffers; an instance must not be used from two threads at once.
///
/// Convention: u(x) = sum_k u_k e^{i k.x}, so `forward` divides by N^2.
class Transform {
 public:
  explicit Transform(const FourierGrid& grid);
  ~Transform();
  Transform(const Transform&) = delete;
  Transform& operator=(const Transform&) = delete;

  void to_physical(std::span<const Complex> spectral, std::span<double> physical);
  void to_spectral(std::span<const double> physical, std::span<Complex> spectral);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ddalab::nse

#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ddalab/fourier.hpp"
#include "ddalab/observation.hpp"

// Pseudospectral 2D incompressible Navier-Stokes on the periodic box.
namespace ddalab::nse {

/// Fourier coefficients of a real, zero-mean 2D vector field on a
/// FourierGrid's half-plane layout; component 1 occupies the first
/// grid.size() entries of `coeffs()`, component 2 the rest. Hermitian
/// symmetry of the j = 0 column is maintained by every operation here.
class SpectralVelocity {
 public:
  SpectralVelocity() = default;
  explicit SpectralVelocity(const FourierGrid& grid)
      : half_(grid.size()), c_(2 * grid.size()) {}

  std::size_t half() const { return half_; }
  std::span<Complex> u1() { return {c_.data(), half_}; }
  std::span<Complex> u2() { return {c_.data() + half_, half_}; }
  std::span<const Complex> u1() const { return {c_.data(), half_}; }
  std::span<const Complex> u2() const { return {c_.data() + half_, half_}; }
  std::vector<Complex>& coeffs() { return c_; }
  const std::vector<Complex>& coeffs() const { return c_; }

  SpectralVelocity& operator+=(const SpectralVelocity& o);
  SpectralVelocity& operator-=(const SpectralVelocity& o);
  SpectralVelocity& operator*=(double s);

  friend SpectralVelocity operator+(SpectralVelocity a, const SpectralVelocity& b) {
    return a += b;
  }
  friend SpectralVelocity operator-(SpectralVelocity a, const SpectralVelocity& b) {
    return a -= b;
  }
  friend SpectralVelocity operator*(double s, SpectralVelocity a) { return a *= s; }
  friend bool operator==(const SpectralVelocity&, const SpectralVelocity&) = default;

 private:
  std::size_t half_ = 0;
  std::vector<Complex> c_;
};

bool is_finite(const SpectralVelocity& u);

struct Norms {
  double l2 = 0.0;  // |u|
  double h1 = 0.0;  // ||u||
  double h2 = 0.0;  // |Au|
};

/// (u, v) = L^2 sum_k u_k . conj(v_k) over the full wavevector set.
double inner(const FourierGrid& grid, const SpectralVelocity& u,
             const SpectralVelocity& v);
/// |u| = (L^2 sum |u_k|^2)^{1/2}, ||u|| = (L^2 sum k^2 |u_k|^2)^{1/2},
/// |Au| = (L^2 sum k^4 |u_k|^2)^{1/2}.
Norms norms(const FourierGrid& grid, const SpectralVelocity& u);

/// u_k <- u_k - k (k . u_k) / |k|^2; the mean mode is zeroed.
SpectralVelocity leray_project(const FourierGrid& grid, SpectralVelocity u);
/// Zeroes every coefficient outside the two-thirds band.
SpectralVelocity dealias(const FourierGrid& grid, SpectralVelocity u);
/// Restores u(-m1, 0) = conj(u(m1, 0)) from the m1 > 0 half of the j = 0
/// column and makes self-conjugate coefficients real.
void enforce_hermitian(const FourierGrid& grid, SpectralVelocity& u);
/// A u = k^2 u_k (A = -Laplacian on the periodic box).
SpectralVelocity apply_A(const FourierGrid& grid, SpectralVelocity u);
/// max_k |k . u_k|
double max_divergence(const FourierGrid& grid, const SpectralVelocity& u);
/// Largest |u_{-k} - conj(u_k)| over the j = 0 column.
double hermitian_defect(const FourierGrid& grid, const SpectralVelocity& u);

/// P_lambda keeps modes with |k|^2 <= lambda.
ObservationOp<SpectralVelocity> proj_lambda(const FourierGrid& grid, double lambda);
/// Number of full-plane wavevectors with 0 < |k|^2 <= lambda that the
/// dealiased state can carry (the rank of P_lambda per component).
std::size_t observed_mode_count(const FourierGrid& grid, double lambda);

/// Divergence-free mode with stream function amplitude `psi` at integer
/// wavevector (m1, m2), plus its conjugate partner.
SpectralVelocity single_mode(const FourierGrid& grid, int m1, int m2, Complex psi);

/// Random valid field supported on retained modes with |m| <= max_mode
/// (0 means the whole dealiased band), amplitudes decaying like
/// 1 / (1 + |k|^2), scaled so ||u|| = h1_norm.
SpectralVelocity random_field(const FourierGrid& grid, std::uint64_t seed,
                              double h1_norm, int max_mode = 0);

/// Divergence-free forcing supported on k2_min <= |k|^2 <= k2_max with
/// seeded phases and |f| = l2_norm.
SpectralVelocity shell_forcing(const FourierGrid& grid, double k2_min,
                               double k2_max, double l2_norm,
                               std::uint64_t seed);

struct Params {
  double nu = 0.1;
  SpectralVelocity forcing;
};

/// Vector field du/dt = f - nu A u - B(u, u) on a fixed grid.
///
/// Each instance owns its transform workspace and a small cache of viscous
/// factors; it must not be stepped from two threads at once. Independent
/// instances are fully independent.
class Solver {
 public:
  using state_type = SpectralVelocity;

  Solver(FourierGrid grid, Params params);
  ~Solver();
  Solver(Solver&&) noexcept;
  Solver& operator=(Solver&&) noexcept;

  const FourierGrid& grid() const { return grid_; }
  const Params& params() const { return params_; }
  double nu() const { return params_.nu; }

  /// f - nu A u - B(u, u)
  SpectralVelocity rhs(const SpectralVelocity& u) const;
  /// f - B(u, u); the viscous term is left to linear_propagate.
  SpectralVelocity nonlinear(const SpectralVelocity& u) const;
  /// e^{-nu k^2 tau} u_k
  SpectralVelocity linear_propagate(const SpectralVelocity& u, double tau) const;

  /// B(u, v) = P_H[(u . grad) v], advective form: 8 transforms.
  SpectralVelocity B(const SpectralVelocity& u, const SpectralVelocity& v) const;
  /// B(u, u) from the rotational form P_H[omega z x u]: 5 transforms.
  SpectralVelocity B_self(const SpectralVelocity& u) const;

  /// Velocity components on the N x N grid.
  std::pair<std::vector<double>, std::vector<double>> to_physical(
      const SpectralVelocity& u) const;
  double max_speed(const SpectralVelocity& u) const;
  /// min(dt_max, 0.5 dx / max(|u1| + |u2|))
  double cfl_dt(const SpectralVelocity& u, double dt_max) const;

  // Hooks used by the assimilation driver.
  struct ErrorNorms {
    double l2;
    std::optional<double> h1;
  };
  ErrorNorms error_norms(const SpectralVelocity& delta) const;
  double solution_norm(const SpectralVelocity& u) const;

 private:
  const std::vector<double>& viscous_factors(double tau) const;

  FourierGrid grid_;
  Params params_;
  struct Workspace;
  std::unique_ptr<Workspace> ws_;
};

}  // namespace ddalab::nse

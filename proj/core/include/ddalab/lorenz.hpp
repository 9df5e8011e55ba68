#pragma once

#include <array>
#include <optional>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "ddalab/integrators.hpp"
#include "ddalab/observation.hpp"

// The Lorenz system written as dU/dt + A U + B(U, U) = f, with Z shifted by
// r + sigma so that the attractor lies in a ball centred at the origin.
namespace ddalab::lorenz {

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Params {
  double sigma = 10.0;
  double b = 8.0 / 3.0;
  double r = 28.0;

  static Params standard() { return {}; }
  /// Throws ParameterError unless sigma > 0, b > 1 and r > 0.
  void validate() const;
};

struct State {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend State operator+(const State& a, const State& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend State operator-(const State& a, const State& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend State operator*(double s, const State& a) {
    return {s * a.x, s * a.y, s * a.z};
  }
  friend bool operator==(const State&, const State&) = default;
};

inline double dot(const State& a, const State& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}
inline double norm2(const State& a) { return dot(a, a); }
inline double norm(const State& a) { return std::sqrt(norm2(a)); }
inline bool is_finite(const State& a) {
  return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

State apply_A(const Params& p, const State& u);
/// Symmetrised bilinear term [0, (X Z' + Z X')/2, -(X Y' + Y X')/2].
State bilinear_B(const State& u, const State& v);
/// f = [0, 0, -b (r + sigma)]
State forcing(const Params& p);
/// f - A u - B(u, u)
State rhs(const Params& p, const State& u);

/// Vector field for the integrators.
class System {
 public:
  using state_type = State;
  explicit System(Params p) : p_(p) { p_.validate(); }
  const Params& params() const { return p_; }
  State rhs(const State& u) const { return lorenz::rhs(p_, u); }

  // Hooks used by the assimilation driver.
  struct ErrorNorms {
    double l2;
    std::optional<double> h1;
  };
  ErrorNorms error_norms(const State& delta) const { return {norm(delta), std::nullopt}; }
  double solution_norm(const State& u) const { return norm(u); }

 private:
  Params p_;
};

// ---------------------------------------------------------------------------
// Analytic bounds.

/// Attractor bound K = b^2 (r + sigma)^2 / (4 (b - 1)); rejects b <= 1.
double attractor_bound_K(const Params& p);
/// Growth rate beta = 2 (K^{1/2} - 1) of the error norm inside a window.
double growth_rate_beta(const Params& p);
/// Per-window contraction factor M(tau), closed form. M(0) = 1.
double contraction_M(const Params& p, double tau);
/// dM/dtau = -M + sigma K / (beta + sigma) (e^{beta tau} - e^{-sigma tau})
double contraction_M_prime(const Params& p, double tau);
/// Root of M(t) = 1 on t > 0: M(s) < 1 for every s in (0, t_star).
double t_star(const Params& p, double rel_tol = 1e-9);
/// |f|^2 = b^2 (r + sigma)^2
double forcing_norm2(const Params& p);

struct Boundedness {
  double M1 = 0.0;  // |u(t)|^2 <= M1 / (1 - e^{-h})
  double M2 = 0.0;  // limsup |u(t)|^2 <= M2 / (1 - e^{-h}); M1 without |eta|^2
  double M3 = 0.0;  // |u(t)|^2 <= M3 / (1 - e^{-2h}), using (Au,u) - (f,u) >= |u|^2 - K
  double M4 = 0.0;  // |u(t)| <= M4 for every h
  double C1 = 0.0;
  double R = 0.0;   // 2 (K + |eta|^2)
};

/// Boundedness constants for observation interval h and initial guess eta.
Boundedness boundedness_constants(const Params& p, const State& eta, double h);

struct Bounds {
  double K = 0.0;
  double beta = 0.0;
  double t_star = 0.0;
  double R = 0.0;
  double forcing_norm2 = 0.0;
  Boundedness boundedness;
};

Bounds bounds(const Params& p, const State& eta, double h);

// ---------------------------------------------------------------------------
// Observation operators.

/// Projection onto the listed components; {true, false, false} is P_X.
ObservationOp<State> diagonal_projection(std::array<bool, 3> observed);
/// P = diag(1, 0, 0)
ObservationOp<State> proj_X();

// ---------------------------------------------------------------------------
// Reference trajectories.

/// Deterministic initial point for seed s: (1, 1, 1) for s = 0, otherwise
/// (1, 1, 1) plus a uniform perturbation in [-1, 1]^3.
State seed_point(std::uint64_t seed);

/// Integrates seed_point(seed) for `spinup` time units.
State attractor_point(const Params& p, std::uint64_t seed, double spinup,
                      const StepperConfig& cfg);

/// Q-range initial guess of Euclidean norm `magnitude` in a random direction
/// (the observed component is zeroed).
State random_guess(const ObservationOp<State>& obs, double magnitude,
                   std::uint64_t seed);

}  // namespace ddalab::lorenz

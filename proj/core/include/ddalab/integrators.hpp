#pragma once

#include <cmath>
#include <concepts>
#include <sstream>
#include <stdexcept>
#include <string_view>

// Fixed-step realisation of the solution semigroup S(t, t0, u0).
//
// A system exposes `state_type` and `rhs(u)`. Systems that can be split as
// du/dt = -L u + N(u) with a diagonal, exactly integrable L additionally
// expose `nonlinear(u)` (N only) and `linear_propagate(u, tau)` (e^{-L tau} u)
// and may be advanced with the integrating-factor scheme.
namespace ddalab {

enum class Scheme { RK4, IFRK4 };

constexpr std::string_view to_string(Scheme s) {
  return s == Scheme::RK4 ? "RK4" : "IFRK4";
}

struct StepperConfig {
  Scheme scheme = Scheme::RK4;
  double dt = 1e-3;
};

/// Raised when a non-finite component appears; carries the model time of
/// the step that produced it.
class BlowUpError : public std::runtime_error {
 public:
  explicit BlowUpError(double t)
      : std::runtime_error(make_message(t)), time_(t) {}
  double time() const { return time_; }

 private:
  static std::string make_message(double t) {
    std::ostringstream os;
    os << "non-finite state encountered at t = " << t;
    return os.str();
  }
  double time_;
};

inline bool is_finite(double x) { return std::isfinite(x); }

template <class S>
concept VectorField = requires(const S& sys, const typename S::state_type& u) {
  { sys.rhs(u) } -> std::convertible_to<typename S::state_type>;
  { is_finite(u) } -> std::convertible_to<bool>;
};

template <class S>
concept SplitVectorField =
    VectorField<S> &&
    requires(const S& sys, const typename S::state_type& u, double tau) {
      { sys.nonlinear(u) } -> std::convertible_to<typename S::state_type>;
      { sys.linear_propagate(u, tau) } -> std::convertible_to<typename S::state_type>;
    };

/// Uniform steps of size dt with the final one shortened so the interval
/// ends exactly on t1.
struct StepPlan {
  long count = 0;
  double dt = 0.0;
  double last = 0.0;

  double step_size(long i) const { return i + 1 == count ? last : dt; }
};

inline StepPlan plan_steps(double t0, double t1, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("plan_steps: dt must be positive");
  if (t1 < t0) throw std::invalid_argument("plan_steps: t1 < t0");
  const double span = t1 - t0;
  if (span == 0.0) return {};
  // Absorb round-off so that e.g. span = 0.1, dt = 1e-3 gives 100 steps.
  auto n = static_cast<long>(std::ceil(span / dt * (1.0 - 1e-12)));
  if (n < 1) n = 1;
  const double last = span - static_cast<double>(n - 1) * dt;
  return {n, dt, last};
}

template <VectorField S>
typename S::state_type rk4_step(const S& sys, const typename S::state_type& u,
                                double h) {
  const auto k1 = sys.rhs(u);
  const auto k2 = sys.rhs(u + (0.5 * h) * k1);
  const auto k3 = sys.rhs(u + (0.5 * h) * k2);
  const auto k4 = sys.rhs(u + h * k3);
  return u + (h / 6.0) * (k1 + 2.0 * (k2 + k3) + k4);
}

// Lawson form: the linear part is carried exactly by e^{-L tau}.
template <SplitVectorField S>
typename S::state_type ifrk4_step(const S& sys,
                                  const typename S::state_type& u, double h) {
  const double hh = 0.5 * h;
  const auto a = sys.nonlinear(u);
  const auto b = sys.nonlinear(sys.linear_propagate(u + hh * a, hh));
  const auto c = sys.nonlinear(sys.linear_propagate(u, hh) + hh * b);
  const auto d = sys.nonlinear(sys.linear_propagate(u, h) +
                               h * sys.linear_propagate(c, hh));
  return sys.linear_propagate(u + (h / 6.0) * a, h) +
         (h / 3.0) * sys.linear_propagate(b + c, hh) + (h / 6.0) * d;
}

template <VectorField S>
typename S::state_type step(const S& sys, const typename S::state_type& u,
                            double h, Scheme scheme) {
  if (scheme == Scheme::IFRK4) {
    if constexpr (SplitVectorField<S>) {
      return ifrk4_step(sys, u, h);
    } else {
      throw std::invalid_argument("IFRK4 requires a split vector field");
    }
  }
  return rk4_step(sys, u, h);
}

struct NoObserver {
  template <class State>
  void operator()(double, const State&) const {}
};

/// Approximates S(t1, t0, u0). The observer is called after every step with
/// the new time and state. Throws BlowUpError on a non-finite state.
template <VectorField S, class Observer = NoObserver>
typename S::state_type integrate(const S& sys, typename S::state_type u,
                                 double t0, double t1,
                                 const StepperConfig& cfg,
                                 Observer&& observer = {}) {
  const StepPlan plan = plan_steps(t0, t1, cfg.dt);
  for (long i = 0; i < plan.count; ++i) {
    u = step(sys, u, plan.step_size(i), cfg.scheme);
    const double t =
        (i + 1 == plan.count) ? t1 : t0 + static_cast<double>(i + 1) * plan.dt;
    if (!is_finite(u)) throw BlowUpError(t);
    observer(t, u);
  }
  return u;
}

}  // namespace ddalab

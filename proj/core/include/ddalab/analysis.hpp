#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

// Small numerical toolkit used by the bound machinery: bracketing and
// bisection, adaptive Simpson quadrature and one-sided differences.
namespace ddalab::analysis {

using ScalarFunction = std::function<double(double)>;

class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RootConfig {
  double rel_tol = 1e-9;
  int max_doublings = 60;
  int max_iterations = 400;
};

struct RootResult {
  double root = 0.0;
  // Final bracket; f(lo) and f(hi) have opposite signs (or one is zero).
  double lo = 0.0;
  double hi = 0.0;
  int iterations = 0;
};

/// Bisection on [lo, hi]. Requires f(lo) * f(hi) <= 0 and throws
/// BracketError otherwise. Stops once the bracket width is at most
/// rel_tol * max(|lo|, |hi|) or the bracket can no longer shrink.
RootResult bisect(const ScalarFunction& f, double lo, double hi,
                  const RootConfig& cfg = {});

/// Walks x = start, 2 start, 4 start, ... until the sign of f differs from
/// the sign at `start`. Returns {previous x, first x with the new sign}.
/// start must be positive.
std::pair<double, double> bracket_by_doubling(const ScalarFunction& f,
                                              double start,
                                              const RootConfig& cfg = {});

/// Adaptive Simpson quadrature with the Richardson acceptance test
/// |S_fine - S_coarse| <= 15 tol on every panel. The tolerance is relative
/// to the magnitude of the coarse whole-interval estimate.
double adaptive_simpson(const ScalarFunction& f, double a, double b,
                        double rel_tol = 1e-10, int max_depth = 50);

/// (f(x + eps) - f(x)) / eps
double fd_derivative(const ScalarFunction& f, double x, double eps);

}  // namespace ddalab::analysis

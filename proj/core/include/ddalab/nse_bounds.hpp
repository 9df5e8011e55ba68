#pragma once

#include <stdexcept>

// Analytic constants for assimilating 2D Navier-Stokes through P_lambda.
namespace ddalab::nse {

struct BoundsInput {
  double nu = 0.1;
  double length = 6.283185307179586;
  double forcing_norm = 1.0;  // |f|
  double lambda = 1.0;        // observation cutoff, modes with |k|^2 <= lambda
  double R = 0.0;             // bound on ||delta(t0)||^2
  double c = 1.0;             // Sobolev/Agmon constant

  /// Throws std::invalid_argument naming the first bad field.
  void validate() const;
};

struct NseBounds {
  BoundsInput in;
  double lambda1 = 0.0;  // (2 pi / L)^2
  double K = 0.0;        // |f|^2 / (lambda1 nu^2), attractor bound on ||U||^2
  double C1 = 0.0;
  double C2 = 0.0;       // c^2 2^{5/4}
  double C3 = 0.0;       // 3 c^{8/3} 5^{5/3} 2^{-10/3}
  double beta = 0.0;     // 2 C1 nu^{-5/3} lambda1^{-1/3} K^{4/3}
  double L1 = 0.0;       // R^{1/2} + 2 K^{1/2}
  double L2 = 0.0;
  double g1_coef = 0.0;  // C2 (lambda / (nu^4 lambda1))^{1/4}
  double g2_coef = 0.0;  // C3 (1 / (nu^5 lambda1))^{1/3}

  // Resolution thresholds on lambda.
  double lambda_one_step = 0.0;  // c^2 |f|^2 / (lambda1 nu^4)
  double lambda_min = 0.0;       // 9 lambda1^{-1/3} ((2 c K^{1/2} + c R^{1/2}) / nu)^{8/3}
  double lambda_min_eta0 = 0.0;  // 9 lambda1^{-5/3} (3 c |f| / nu^2)^{8/3}
  bool above_lambda_min = false;
  bool above_lambda_min_eta0 = false;

  double M_prime0 = 0.0;  // -nu lambda + g(0)
  /// Root of M(t) = 1 when M'(0) < 0; 0 when M'(0) >= 0 (no interval
  /// contracts); +inf when M stays below 1 for every sampled t.
  double t_star = 0.0;
};

NseBounds bounds(const BoundsInput& in);

/// g(tau), the growth rate of ||Q delta||^2 inside a window.
double g_eval(const NseBounds& b, double tau);

/// M(tau) = e^{-nu lambda tau} (1 + int_0^tau g(s) e^{nu lambda s} ds).
/// The terms coming from the squared bracket are integrated exactly; the
/// 8/3-power term by Gauss-Kronrod quadrature. Returns +inf on overflow.
double contraction_M_nse(const NseBounds& b, double tau);
/// M'(tau) = -nu lambda M(tau) + g(tau)
double contraction_M_nse_prime(const NseBounds& b, double tau);

/// m(tau) = (1 - eps) e^{-nu lambda tau} + eps e^{(7 beta / 3) tau},
/// eps = L2 lambda^{-3/4}; an upper bound for M when lambda >= lambda1.
double majorant_m(const NseBounds& b, double tau);
double majorant_m_prime(const NseBounds& b, double tau);

class LambdaSearchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Smallest lambda found (doubling from lambda1, then bisection to 1e-6
/// relative) with m'(t_star) < 0, so that M(h) < 1 on (0, t_star].
/// in.lambda is ignored. Throws LambdaSearchError past lambda = 1e12.
double lambda_for_tstar(const BoundsInput& in, double t_star);

/// M5 = ||eta||^2 + 3 K: sup ||u||^2 <= M5 / (1 - e^{-nu lambda1 h}).
double boundedness_M5(double eta_h1_norm2, double K);

}  // namespace ddalab::nse

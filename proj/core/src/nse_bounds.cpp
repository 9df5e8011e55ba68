#include "ddalab/nse_bounds.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "ddalab/analysis.hpp"

namespace ddalab::nse {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// exp() overflows just above 709.
constexpr double kLogOverflow = 700.0;

void require_positive(double v, const char* field) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream msg;
    msg << field << " must be positive and finite (got " << v << ")";
    throw std::invalid_argument(msg.str());
  }
}

// log(R^{1/2} e^{beta s / 2} + 2 K^{1/2}) without forming the exponential.
double log_bracket(const NseBounds& b, double s) {
  const double y = b.K > 0.0 ? std::log(2.0 * std::sqrt(b.K)) : -kInf;
  if (b.in.R <= 0.0) return y;
  const double x = 0.5 * std::log(b.in.R) + 0.5 * b.beta * s;
  const double hi = std::max(x, y);
  const double lo = std::min(x, y);
  if (lo == -kInf) return hi;
  return hi + std::log1p(std::exp(lo - hi));
}

NseBounds constants(const BoundsInput& in) {
  in.validate();
  NseBounds b;
  b.in = in;
  const double k0 = 2.0 * std::numbers::pi / in.length;
  b.lambda1 = k0 * k0;
  const double nu = in.nu;
  const double f2 = in.forcing_norm * in.forcing_norm;
  const double c = in.c;
  const double c83 = std::pow(c, 8.0 / 3.0);
  const double five53 = std::pow(5.0, 5.0 / 3.0);

  b.K = f2 / (b.lambda1 * nu * nu);
  b.C1 = 3.0 * five53 * std::pow(2.0, -16.0 / 3.0) * c83;
  b.C2 = c * c * std::pow(2.0, 1.25);
  b.C3 = 3.0 * c83 * five53 * std::pow(2.0, -10.0 / 3.0);
  b.beta = 2.0 * b.C1 * std::pow(nu, -5.0 / 3.0) * std::cbrt(1.0 / b.lambda1) *
           std::pow(b.K, 4.0 / 3.0);
  b.L1 = std::sqrt(in.R) + 2.0 * std::sqrt(b.K);
  b.L2 = b.C2 / std::pow(b.lambda1, 0.25) * std::pow(b.L1 / nu, 2.0) +
         b.C3 / std::pow(b.lambda1, 7.0 / 12.0) * std::pow(b.L1 / nu, 8.0 / 3.0);
  b.g1_coef = b.C2 * std::pow(in.lambda / (std::pow(nu, 4.0) * b.lambda1), 0.25);
  b.g2_coef = b.C3 * std::cbrt(1.0 / (std::pow(nu, 5.0) * b.lambda1));

  b.lambda_one_step = c * c * f2 / (b.lambda1 * std::pow(nu, 4.0));
  b.lambda_min = 9.0 / std::cbrt(b.lambda1) *
                 std::pow((2.0 * c * std::sqrt(b.K) + c * std::sqrt(in.R)) / nu,
                          8.0 / 3.0);
  b.lambda_min_eta0 = 9.0 / std::pow(b.lambda1, 5.0 / 3.0) *
                      std::pow(3.0 * c * in.forcing_norm / (nu * nu), 8.0 / 3.0);
  b.above_lambda_min = in.lambda > b.lambda_min;
  b.above_lambda_min_eta0 = in.lambda > b.lambda_min_eta0;
  b.M_prime0 = -nu * in.lambda + g_eval(b, 0.0);
  return b;
}

double t_star_of(const NseBounds& b) {
  if (!(b.M_prime0 < 0.0)) return 0.0;
  const double rate = b.in.nu * b.in.lambda;
  const auto f = [&b](double t) {
    const double m = contraction_M_nse(b, t);
    return std::isfinite(m) ? m - 1.0 : 1.0;
  };
  double lo = 1e-9 / rate;
  const double limit = 1e6 / rate;
  double hi = lo;
  while (true) {
    hi = 2.0 * lo;
    if (hi > limit) return kInf;
    if (f(hi) >= 0.0) break;
    lo = hi;
  }
  return analysis::bisect(f, lo, hi).root;
}

}  // namespace

void BoundsInput::validate() const {
  require_positive(nu, "nu");
  require_positive(length, "length");
  require_positive(lambda, "lambda");
  require_positive(c, "c");
  if (!(forcing_norm >= 0.0) || !std::isfinite(forcing_norm)) {
    throw std::invalid_argument("forcing_norm must be >= 0 and finite");
  }
  if (!(R >= 0.0) || !std::isfinite(R)) {
    throw std::invalid_argument("R must be >= 0 and finite");
  }
}

NseBounds bounds(const BoundsInput& in) {
  NseBounds b = constants(in);
  b.t_star = t_star_of(b);
  return b;
}

double g_eval(const NseBounds& b, double tau) {
  if (tau < 0.0) throw std::invalid_argument("g_eval: tau < 0");
  const double lb = log_bracket(b, tau);
  const double g1 = std::exp(b.beta * tau + 2.0 * lb);
  const double g2 = std::exp(b.beta * tau + (8.0 / 3.0) * lb);
  return b.g1_coef * g1 + b.g2_coef * g2;
}

double contraction_M_nse(const NseBounds& b, double tau) {
  if (tau < 0.0) throw std::invalid_argument("contraction_M_nse: tau < 0");
  if (tau == 0.0) return 1.0;
  const double rate = b.in.nu * b.in.lambda;

  // Integrand is increasing in s, so its size at s = tau bounds the rest.
  if (b.beta * tau + (8.0 / 3.0) * log_bracket(b, tau) > kLogOverflow ||
      2.0 * b.beta * tau > kLogOverflow) {
    return kInf;
  }

  // e^{beta s}(R^{1/2} e^{beta s/2} + 2 K^{1/2})^2 expands into three
  // exponentials e^{a s}; each contributes (e^{a tau} - e^{-rate tau}) / (a + rate).
  const double sR = std::sqrt(b.in.R);
  const double sK = std::sqrt(b.K);
  const struct {
    double weight, a;
  } terms[] = {{b.in.R, 2.0 * b.beta}, {4.0 * sR * sK, 1.5 * b.beta}, {4.0 * b.K, b.beta}};
  double first = 0.0;
  for (const auto& t : terms) {
    if (t.weight == 0.0) continue;
    const double s = t.a + rate;
    first += t.weight * std::exp(t.a * tau) * -std::expm1(-s * tau) / s;
  }

  double second = 0.0;
  if (b.g2_coef > 0.0 && (b.in.R > 0.0 || b.K > 0.0)) {
    const auto integrand = [&b, rate, tau](double s) {
      return std::exp(b.beta * s + (8.0 / 3.0) * log_bracket(b, s) -
                      rate * (tau - s));
    };
    second = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        integrand, 0.0, tau, 12, 1e-12);
  }

  const double m = std::exp(-rate * tau) + b.g1_coef * first + b.g2_coef * second;
  return std::isfinite(m) ? m : kInf;
}

double contraction_M_nse_prime(const NseBounds& b, double tau) {
  return -b.in.nu * b.in.lambda * contraction_M_nse(b, tau) + g_eval(b, tau);
}

double majorant_m(const NseBounds& b, double tau) {
  if (tau < 0.0) throw std::invalid_argument("majorant_m: tau < 0");
  const double eps = b.L2 * std::pow(b.in.lambda, -0.75);
  const double rate = b.in.nu * b.in.lambda;
  return (1.0 - eps) * std::exp(-rate * tau) +
         eps * std::exp((7.0 * b.beta / 3.0) * tau);
}

double majorant_m_prime(const NseBounds& b, double tau) {
  const double eps = b.L2 * std::pow(b.in.lambda, -0.75);
  const double rate = b.in.nu * b.in.lambda;
  const double grow = 7.0 * b.beta / 3.0;
  return -rate * (1.0 - eps) * std::exp(-rate * tau) +
         grow * eps * std::exp(grow * tau);
}

double lambda_for_tstar(const BoundsInput& in, double t_star) {
  if (!(t_star > 0.0)) throw std::invalid_argument("lambda_for_tstar: t_star <= 0");
  BoundsInput probe = in;
  probe.lambda = std::pow(2.0 * std::numbers::pi / in.length, 2);
  // beta and L2 do not depend on lambda.
  const NseBounds base = constants(probe);
  const auto mprime = [&base, t_star](double lambda) {
    NseBounds b = base;
    b.in.lambda = lambda;
    return majorant_m_prime(b, t_star);
  };

  constexpr double kLimit = 1e12;
  double lo = base.lambda1;
  if (mprime(lo) < 0.0) return lo;
  double hi = lo;
  while (true) {
    hi = 2.0 * lo;
    if (hi > kLimit) {
      std::ostringstream msg;
      msg << "lambda_for_tstar: no lambda <= 1e12 gives m'(" << t_star
          << ") < 0; the admissible window is empty or was stepped over";
      throw LambdaSearchError(msg.str());
    }
    if (mprime(hi) < 0.0) break;
    lo = hi;
  }
  analysis::RootConfig cfg;
  cfg.rel_tol = 1e-6;
  const auto r = analysis::bisect(mprime, lo, hi, cfg);
  return mprime(r.hi) < 0.0 ? r.hi : hi;
}

double boundedness_M5(double eta_h1_norm2, double K) { return eta_h1_norm2 + 3.0 * K; }

}  // namespace ddalab::nse

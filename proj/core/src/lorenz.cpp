#include "ddalab/lorenz.hpp"

#include <algorithm>
#include <sstream>

#include "ddalab/analysis.hpp"
#include "ddalab/random.hpp"

namespace ddalab::lorenz {

void Params::validate() const {
  std::ostringstream msg;
  if (!(sigma > 0.0)) {
    msg << "sigma must be > 0 (got " << sigma << ")";
  } else if (!(b > 1.0)) {
    msg << "b must be > 1: the attractor bound K has denominator 4(b - 1) (got "
        << b << ")";
  } else if (!(r > 0.0)) {
    msg << "r must be > 0 (got " << r << ")";
  } else {
    return;
  }
  throw ParameterError(msg.str());
}

State apply_A(const Params& p, const State& u) {
  return {p.sigma * u.x - p.sigma * u.y, p.sigma * u.x + u.y, p.b * u.z};
}

State bilinear_B(const State& u, const State& v) {
  return {0.0, 0.5 * (u.x * v.z + u.z * v.x), -0.5 * (u.x * v.y + u.y * v.x)};
}

State forcing(const Params& p) { return {0.0, 0.0, -p.b * (p.r + p.sigma)}; }

State rhs(const Params& p, const State& u) {
  const State au = apply_A(p, u);
  const State buu = bilinear_B(u, u);
  const State f = forcing(p);
  return {f.x - au.x - buu.x, f.y - au.y - buu.y, f.z - au.z - buu.z};
}

double forcing_norm2(const Params& p) {
  const double fz = p.b * (p.r + p.sigma);
  return fz * fz;
}

double attractor_bound_K(const Params& p) {
  if (!(p.b > 1.0)) {
    std::ostringstream msg;
    msg << "attractor_bound_K: b must be > 1 (denominator 4(b - 1)), got "
        << p.b;
    throw ParameterError(msg.str());
  }
  const double s = p.r + p.sigma;
  return p.b * p.b * s * s / (4.0 * (p.b - 1.0));
}

double growth_rate_beta(const Params& p) {
  const double K = attractor_bound_K(p);
  if (K < 1.0) {
    std::ostringstream msg;
    msg << "growth_rate_beta: K = " << K
        << " < 1 gives a negative growth rate; outside the supported regime";
    throw ParameterError(msg.str());
  }
  return 2.0 * (std::sqrt(K) - 1.0);
}

namespace {

// int_0^tau (e^{(beta+1)s} - e^{-(sigma-1)s}) ds, written with expm1 so the
// leading-order cancellation at small tau costs no precision.
double window_integral(double beta, double sigma, double tau) {
  const double grow = std::expm1((beta + 1.0) * tau) / (beta + 1.0);
  const double a = sigma - 1.0;
  const double decay = (a == 0.0) ? tau : -std::expm1(-a * tau) / a;
  return grow - decay;
}

}  // namespace

double contraction_M(const Params& p, double tau) {
  if (tau < 0.0) throw std::invalid_argument("contraction_M: tau < 0");
  if (tau == 0.0) return 1.0;
  const double K = attractor_bound_K(p);
  const double beta = growth_rate_beta(p);
  const double coef = p.sigma * K / (beta + p.sigma);
  return std::exp(-tau) * (1.0 + coef * window_integral(beta, p.sigma, tau));
}

double contraction_M_prime(const Params& p, double tau) {
  const double K = attractor_bound_K(p);
  const double beta = growth_rate_beta(p);
  const double coef = p.sigma * K / (beta + p.sigma);
  return -contraction_M(p, tau) +
         coef * (std::exp(beta * tau) - std::exp(-p.sigma * tau));
}

double t_star(const Params& p, double rel_tol) {
  const auto f = [&p](double t) { return contraction_M(p, t) - 1.0; };
  analysis::RootConfig cfg;
  cfg.rel_tol = rel_tol;
  // M'(0) = -1, so M < 1 just to the right of zero; walk out to the
  // first point where M is back above 1 (within [0, 10]).
  constexpr double kStart = 1e-12;
  constexpr double kLimit = 10.0;
  double lo = kStart;
  double hi = kStart;
  while (true) {
    hi = 2.0 * lo;
    if (hi > kLimit) {
      throw analysis::BracketError(
          "t_star: M(t) does not return to 1 within [0, 10]");
    }
    if (f(hi) >= 0.0) break;
    lo = hi;
  }
  return analysis::bisect(f, lo, hi, cfg).root;
}

Boundedness boundedness_constants(const Params& p, const State& eta,
                                  double h) {
  if (!(h > 0.0)) throw std::invalid_argument("boundedness_constants: h <= 0");
  const double K = attractor_bound_K(p);
  const double f2 = forcing_norm2(p);
  const double eta2 = norm2(eta);
  const double gamma = std::exp(-h);

  Boundedness out;
  out.C1 = K * gamma + f2 * (1.0 - gamma);
  out.M1 = eta2 + out.C1 + K + f2;
  out.M2 = out.C1 + K + f2;
  out.M3 = eta2 + 3.0 * K;
  out.R = 2.0 * (K + eta2);
  // M4 must hold for every h, so use the supremum of C1 over gamma in [0, 1].
  const double m1_uniform = eta2 + std::max(K, f2) + K + f2;
  const double ts = t_star(p);
  out.M4 = std::max(std::sqrt(K) + std::sqrt(out.R),
                    std::sqrt(m1_uniform / -std::expm1(-ts)));
  return out;
}

Bounds bounds(const Params& p, const State& eta, double h) {
  Bounds b;
  b.K = attractor_bound_K(p);
  b.beta = growth_rate_beta(p);
  b.t_star = t_star(p);
  b.R = 2.0 * (b.K + norm2(eta));
  b.forcing_norm2 = forcing_norm2(p);
  b.boundedness = boundedness_constants(p, eta, h);
  return b;
}

ObservationOp<State> diagonal_projection(std::array<bool, 3> observed) {
  const auto project = [observed](const State& u, bool keep) {
    return State{observed[0] == keep ? u.x : 0.0,
                 observed[1] == keep ? u.y : 0.0,
                 observed[2] == keep ? u.z : 0.0};
  };
  std::string name = "diag(";
  for (int i = 0; i < 3; ++i) name += (i ? "," : "") + std::string(observed[i] ? "1" : "0");
  name += ")";
  return ObservationOp<State>(
      name, [project](const State& u) { return project(u, true); },
      [project](const State& u) { return project(u, false); },
      [observed](const State& model, const State& obs) {
        return State{observed[0] ? obs.x : model.x,
                     observed[1] ? obs.y : model.y,
                     observed[2] ? obs.z : model.z};
      });
}

ObservationOp<State> proj_X() {
  auto op = diagonal_projection({true, false, false});
  return ObservationOp<State>(
      "P_X", [op](const State& u) { return op.P(u); },
      [op](const State& u) { return op.Q(u); },
      [op](const State& m, const State& o) { return op.merge(m, o); });
}

State seed_point(std::uint64_t seed) {
  State s{1.0, 1.0, 1.0};
  if (seed == 0) return s;
  Rng rng(seed);
  s.x += rng.uniform(-1.0, 1.0);
  s.y += rng.uniform(-1.0, 1.0);
  s.z += rng.uniform(-1.0, 1.0);
  return s;
}

State attractor_point(const Params& p, std::uint64_t seed, double spinup,
                      const StepperConfig& cfg) {
  const System sys(p);
  return integrate(sys, seed_point(seed), 0.0, spinup, cfg);
}

State random_guess(const ObservationOp<State>& obs, double magnitude,
                   std::uint64_t seed) {
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (int attempt = 0; attempt < 64; ++attempt) {
    const State g = obs.Q(State{rng.normal(), rng.normal(), rng.normal()});
    const double n = norm(g);
    if (n > 1e-12) return (magnitude / n) * g;
  }
  return State{};
}

}  // namespace ddalab::lorenz

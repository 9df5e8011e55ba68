#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oracle {

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                   double fm, double fb, double whole, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

double wave(const ddalab::nse::FourierGrid& g) { return 2.0 * std::numbers::pi / g.length(); }

}  // namespace

double simpson(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double eps = rel_tol * std::max(std::abs(whole), 1e-300);
  return simpson_rec(f, a, b, fa, fm, fb, whole, eps, 48);
}

// ---------------------------------------------------------------------------

ddalab::lorenz::State lorenz_rhs_textbook(const ddalab::lorenz::Params& p,
                                          const ddalab::lorenz::State& s) {
  const double x = s.x, y = s.y, z = s.z + p.r + p.sigma;
  return {p.sigma * (y - x), p.r * x - y - x * z, x * y - p.b * z};
}

double lorenz_K(const ddalab::lorenz::Params& p) {
  const double c = p.r + p.sigma;
  return p.b * p.b * c * c / (4.0 * (p.b - 1.0));
}

double lorenz_M_quadrature(const ddalab::lorenz::Params& p, double tau) {
  const double K = lorenz_K(p);
  const double beta = 2.0 * (std::sqrt(K) - 1.0);
  const double s = p.sigma;
  auto integrand = [&](double x) {
    return std::exp((beta + 1.0) * x) - std::exp(-(s - 1.0) * x);
  };
  return std::exp(-tau) * (1.0 + s * K / (beta + s) * simpson(integrand, 0.0, tau, 1e-13));
}

// ---------------------------------------------------------------------------

FullField expand(const ddalab::nse::FourierGrid& g, const ddalab::nse::SpectralVelocity& u) {
  FullField f;
  const int nyq = g.n() / 2;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    const int m1 = g.mode_x(idx), m2 = g.mode_y(idx);
    const Complex a = u.u1()[idx], b = u.u2()[idx];
    f.c1[{m1, m2}] = a;
    f.c2[{m1, m2}] = b;
    if (m2 > 0 && m2 < nyq) {
      f.c1[{-m1, -m2}] = std::conj(a);
      f.c2[{-m1, -m2}] = std::conj(b);
    }
  }
  return f;
}

ddalab::nse::SpectralVelocity pack(const ddalab::nse::FourierGrid& g, const FullField& f) {
  ddalab::nse::SpectralVelocity u(g);
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    const std::pair<int, int> key{g.mode_x(idx), g.mode_y(idx)};
    if (auto it = f.c1.find(key); it != f.c1.end()) u.u1()[idx] = it->second;
    if (auto it = f.c2.find(key); it != f.c2.end()) u.u2()[idx] = it->second;
  }
  return u;
}

std::pair<double, double> evaluate(const ddalab::nse::FourierGrid& g, const FullField& f,
                                   double x, double y) {
  const double w = wave(g);
  double u1 = 0.0, u2 = 0.0;
  for (const auto& [m, c] : f.c1) {
    u1 += (c * std::polar(1.0, w * (m.first * x + m.second * y))).real();
  }
  for (const auto& [m, c] : f.c2) {
    u2 += (c * std::polar(1.0, w * (m.first * x + m.second * y))).real();
  }
  return {u1, u2};
}

PhysicalNorms physical_norms(const ddalab::nse::FourierGrid& g, const FullField& f, int m) {
  const double w = wave(g);
  // Derivative fields by multiplying coefficients with i k, evaluated in
  // physical space and squared there.
  auto derivative = [&](const ModeMap& c, int dx, int dy) {
    ModeMap out;
    for (const auto& [mm, v] : c) {
      Complex factor = 1.0;
      for (int i = 0; i < dx; ++i) factor *= Complex(0.0, w * mm.first);
      for (int i = 0; i < dy; ++i) factor *= Complex(0.0, w * mm.second);
      out[mm] = factor * v;
    }
    return out;
  };
  auto laplacian = [&](const ModeMap& c) {
    ModeMap out;
    for (const auto& [mm, v] : c) {
      out[mm] = -w * w * (mm.first * mm.first + mm.second * mm.second) * v;
    }
    return out;
  };
  const FullField gx{derivative(f.c1, 1, 0), derivative(f.c2, 1, 0)};
  const FullField gy{derivative(f.c1, 0, 1), derivative(f.c2, 0, 1)};
  const FullField lap{laplacian(f.c1), laplacian(f.c2)};

  PhysicalNorms out;
  const double h = g.length() / m;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const double x = i * h, y = j * h;
      const auto [a1, a2] = evaluate(g, f, x, y);
      const auto [bx1, bx2] = evaluate(g, gx, x, y);
      const auto [by1, by2] = evaluate(g, gy, x, y);
      const auto [c1, c2] = evaluate(g, lap, x, y);
      out.l2sq += a1 * a1 + a2 * a2;
      out.h1sq += bx1 * bx1 + bx2 * bx2 + by1 * by1 + by2 * by2;
      out.h2sq += c1 * c1 + c2 * c2;
    }
  }
  out.l2sq *= h * h;
  out.h1sq *= h * h;
  out.h2sq *= h * h;
  return out;
}

FullField convolution_B(const ddalab::nse::FourierGrid& g, const FullField& u,
                        const FullField& v) {
  const double w = wave(g);
  const int mm = g.max_mode();
  ModeMap r1, r2;
  for (const auto& [p, up1] : u.c1) {
    const Complex up2 = u.c2.at(p);
    if (up1 == 0.0 && up2 == 0.0) continue;
    for (const auto& [q, vq1] : v.c1) {
      const Complex vq2 = v.c2.at(q);
      const std::pair<int, int> k{p.first + q.first, p.second + q.second};
      if (std::abs(k.first) > mm || std::abs(k.second) > mm) continue;
      // (u_p . i q) v_q
      const Complex adv = Complex(0.0, w) * (up1 * double(q.first) + up2 * double(q.second));
      r1[k] += adv * vq1;
      r2[k] += adv * vq2;
    }
  }
  FullField out;
  for (const auto& [k, a] : r1) {
    const Complex b = r2[k];
    const double kx = w * k.first, ky = w * k.second;
    const double k2 = kx * kx + ky * ky;
    if (k2 == 0.0) continue;
    const Complex dot = kx * a + ky * b;
    out.c1[k] = a - kx * dot / k2;
    out.c2[k] = b - ky * dot / k2;
  }
  return out;
}

double inner_full(const ddalab::nse::FourierGrid& g, const FullField& u, const FullField& v) {
  Complex s = 0.0;
  for (const auto& [k, a] : u.c1) {
    if (auto it = v.c1.find(k); it != v.c1.end()) s += a * std::conj(it->second);
  }
  for (const auto& [k, a] : u.c2) {
    if (auto it = v.c2.find(k); it != v.c2.end()) s += a * std::conj(it->second);
  }
  return g.length() * g.length() * s.real();
}

double divergence_full(const ddalab::nse::FourierGrid& g, const FullField& u) {
  const double w = wave(g);
  double worst = 0.0;
  for (const auto& [k, a] : u.c1) {
    const Complex b = u.c2.at(k);
    worst = std::max(worst, std::abs(w * k.first * a + w * k.second * b));
  }
  return worst;
}

// ---------------------------------------------------------------------------

NseConstants nse_constants(double nu, double length, double forcing_norm, double R, double c) {
  NseConstants k{};
  k.lambda1 = std::pow(2.0 * std::numbers::pi / length, 2);
  k.K = forcing_norm * forcing_norm / (k.lambda1 * nu * nu);
  const double c83 = std::pow(c, 8.0 / 3.0);
  k.C1 = 3.0 * std::pow(5.0, 5.0 / 3.0) * std::pow(2.0, -16.0 / 3.0) * c83;
  k.C2 = c * c * std::pow(2.0, 1.25);
  k.C3 = 3.0 * c83 * std::pow(5.0, 5.0 / 3.0) * std::pow(2.0, -10.0 / 3.0);
  k.beta = 2.0 * k.C1 * std::pow(nu, -5.0 / 3.0) * std::pow(k.lambda1, -1.0 / 3.0) *
           std::pow(k.K, 4.0 / 3.0);
  k.L1 = std::sqrt(R) + 2.0 * std::sqrt(k.K);
  k.L2 = k.C2 / std::pow(k.lambda1, 0.25) * std::pow(k.L1 / nu, 2) +
         k.C3 / std::pow(k.lambda1, 7.0 / 12.0) * std::pow(k.L1 / nu, 8.0 / 3.0);
  return k;
}

double nse_g(const NseConstants& k, double nu, double lambda, double R, double tau) {
  const double X = std::sqrt(R) * std::exp(k.beta * tau / 2.0) + 2.0 * std::sqrt(k.K);
  const double g1 = std::exp(k.beta * tau) * X * X;
  const double g2 = std::exp(k.beta * tau) * std::pow(X, 8.0 / 3.0);
  return k.C2 * std::pow(lambda / (std::pow(nu, 4) * k.lambda1), 0.25) * g1 +
         k.C3 * std::pow(1.0 / (std::pow(nu, 5) * k.lambda1), 1.0 / 3.0) * g2;
}

double nse_M_quadrature(const NseConstants& k, double nu, double lambda, double R, double tau) {
  const double a = nu * lambda;
  auto integrand = [&](double s) { return nse_g(k, nu, lambda, R, s) * std::exp(a * s); };
  return std::exp(-a * tau) * (1.0 + simpson(integrand, 0.0, tau, 1e-13));
}

}  // namespace oracle

#include "ddalab/nse2d.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "ddalab/random.hpp"

namespace ddalab::nse {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_same_shape(const SpectralVelocity& a, const SpectralVelocity& b) {
  if (a.half() != b.half()) {
    throw std::invalid_argument("SpectralVelocity: operands live on different grids");
  }
}

void require_grid(const FourierGrid& grid, const SpectralVelocity& u) {
  if (u.half() != grid.size()) {
    throw std::invalid_argument("SpectralVelocity does not match the grid");
  }
}

void hermitian_column(const FourierGrid& grid, SpectralVelocity& u, int j) {
  const int n = grid.n();
  for (auto comp : {u.u1(), u.u2()}) {
    for (int i = 1; i < n / 2; ++i) {
      comp[grid.index(n - i, j)] = std::conj(comp[grid.index(i, j)]);
    }
    comp[grid.index(0, j)] = comp[grid.index(0, j)].real();
    comp[grid.index(n / 2, j)] = comp[grid.index(n / 2, j)].real();
  }
}

}  // namespace

SpectralVelocity& SpectralVelocity::operator+=(const SpectralVelocity& o) {
  require_same_shape(*this, o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

SpectralVelocity& SpectralVelocity::operator-=(const SpectralVelocity& o) {
  require_same_shape(*this, o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

SpectralVelocity& SpectralVelocity::operator*=(double s) {
  for (auto& v : c_) v *= s;
  return *this;
}

bool is_finite(const SpectralVelocity& u) {
  return std::all_of(u.coeffs().begin(), u.coeffs().end(), [](const Complex& c) {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
  });
}

double inner(const FourierGrid& grid, const SpectralVelocity& u,
             const SpectralVelocity& v) {
  require_grid(grid, u);
  require_grid(grid, v);
  const auto u1 = u.u1(), u2 = u.u2(), v1 = v.u1(), v2 = v.u2();
  double s = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    s += grid.weight(i) *
         (u1[i] * std::conj(v1[i]) + u2[i] * std::conj(v2[i])).real();
  }
  const double L = grid.length();
  return L * L * s;
}

Norms norms(const FourierGrid& grid, const SpectralVelocity& u) {
  require_grid(grid, u);
  const auto u1 = u.u1(), u2 = u.u2();
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double a = grid.weight(i) * (std::norm(u1[i]) + std::norm(u2[i]));
    const double k2 = grid.k2(i);
    s0 += a;
    s1 += k2 * a;
    s2 += k2 * k2 * a;
  }
  const double L2 = grid.length() * grid.length();
  return {std::sqrt(L2 * s0), std::sqrt(L2 * s1), std::sqrt(L2 * s2)};
}

SpectralVelocity leray_project(const FourierGrid& grid, SpectralVelocity u) {
  require_grid(grid, u);
  auto u1 = u.u1();
  auto u2 = u.u2();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double k2 = grid.k2(i);
    if (k2 == 0.0) {
      u1[i] = 0.0;
      u2[i] = 0.0;
      continue;
    }
    const double kx = grid.kx(i), ky = grid.ky(i);
    const Complex kdotu = kx * u1[i] + ky * u2[i];
    u1[i] -= kx * kdotu / k2;
    u2[i] -= ky * kdotu / k2;
  }
  return u;
}

SpectralVelocity dealias(const FourierGrid& grid, SpectralVelocity u) {
  require_grid(grid, u);
  auto u1 = u.u1();
  auto u2 = u.u2();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!grid.retained(i)) {
      u1[i] = 0.0;
      u2[i] = 0.0;
    }
  }
  return u;
}

void enforce_hermitian(const FourierGrid& grid, SpectralVelocity& u) {
  require_grid(grid, u);
  hermitian_column(grid, u, 0);
  hermitian_column(grid, u, grid.n() / 2);
}

SpectralVelocity apply_A(const FourierGrid& grid, SpectralVelocity u) {
  require_grid(grid, u);
  auto u1 = u.u1();
  auto u2 = u.u2();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    u1[i] *= grid.k2(i);
    u2[i] *= grid.k2(i);
  }
  return u;
}

double max_divergence(const FourierGrid& grid, const SpectralVelocity& u) {
  require_grid(grid, u);
  const auto u1 = u.u1(), u2 = u.u2();
  double m = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    m = std::max(m, std::abs(grid.kx(i) * u1[i] + grid.ky(i) * u2[i]));
  }
  return m;
}

double hermitian_defect(const FourierGrid& grid, const SpectralVelocity& u) {
  require_grid(grid, u);
  const int n = grid.n();
  double d = 0.0;
  for (int j : {0, n / 2}) {
    for (auto comp : {u.u1(), u.u2()}) {
      for (int i = 0; i < n; ++i) {
        const int partner = (n - i) % n;
        d = std::max(d, std::abs(comp[grid.index(partner, j)] -
                                 std::conj(comp[grid.index(i, j)])));
      }
    }
  }
  return d;
}

ObservationOp<SpectralVelocity> proj_lambda(const FourierGrid& grid,
                                            double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("proj_lambda: lambda < 0");
  auto mask = std::make_shared<std::vector<unsigned char>>(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    (*mask)[i] = (grid.k2(i) > 0.0 && grid.k2(i) <= lambda) ? 1 : 0;
  }
  const std::size_t half = grid.size();
  auto select = [mask, half](const SpectralVelocity& a, const SpectralVelocity& b) {
    // Observed coefficients from b, the rest from a.
    require_same_shape(a, b);
    SpectralVelocity out = a;
    auto& c = out.coeffs();
    const auto& cb = b.coeffs();
    for (std::size_t i = 0; i < half; ++i) {
      if ((*mask)[i]) {
        c[i] = cb[i];
        c[i + half] = cb[i + half];
      }
    }
    return out;
  };
  auto keep = [mask, half](const SpectralVelocity& u, bool observed) {
    SpectralVelocity out = u;
    auto& c = out.coeffs();
    for (std::size_t i = 0; i < half; ++i) {
      if (((*mask)[i] != 0) != observed) {
        c[i] = 0.0;
        c[i + half] = 0.0;
      }
    }
    return out;
  };
  return ObservationOp<SpectralVelocity>(
      "P_lambda(" + std::to_string(lambda) + ")",
      [keep](const SpectralVelocity& u) { return keep(u, true); },
      [keep](const SpectralVelocity& u) { return keep(u, false); }, select);
}

std::size_t observed_mode_count(const FourierGrid& grid, double lambda) {
  double count = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.retained(i) && grid.k2(i) <= lambda) count += grid.weight(i);
  }
  return static_cast<std::size_t>(count);
}

SpectralVelocity single_mode(const FourierGrid& grid, int m1, int m2,
                             Complex psi) {
  const int n = grid.n();
  if (std::abs(m1) >= n / 2 || std::abs(m2) >= n / 2 || (m1 == 0 && m2 == 0)) {
    throw std::invalid_argument("single_mode: wavevector outside the grid");
  }
  if (m2 < 0 || (m2 == 0 && m1 < 0)) {
    m1 = -m1;
    m2 = -m2;
    psi = std::conj(psi);
  }
  SpectralVelocity u(grid);
  const std::size_t idx = grid.index_of_mode(m1, m2);
  u.u1()[idx] = kI * grid.ky(idx) * psi;
  u.u2()[idx] = -kI * grid.kx(idx) * psi;
  if (m2 == 0) enforce_hermitian(grid, u);
  return u;
}

namespace {

SpectralVelocity curl_of_stream(const FourierGrid& grid,
                                const std::vector<Complex>& psi) {
  SpectralVelocity u(grid);
  auto u1 = u.u1();
  auto u2 = u.u2();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    u1[i] = kI * grid.ky(i) * psi[i];
    u2[i] = -kI * grid.kx(i) * psi[i];
  }
  enforce_hermitian(grid, u);
  return u;
}

}  // namespace

SpectralVelocity random_field(const FourierGrid& grid, std::uint64_t seed,
                              double h1_norm, int max_mode) {
  Rng rng(seed);
  const int band = max_mode > 0 ? std::min(max_mode, grid.max_mode()) : grid.max_mode();
  std::vector<Complex> psi(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double re = rng.normal();
    const double im = rng.normal();
    if (!grid.retained(i) || std::abs(grid.mode_x(i)) > band ||
        grid.mode_y(i) > band) {
      continue;
    }
    const double k2 = grid.k2(i);
    psi[i] = Complex(re, im) / (std::sqrt(k2) * (1.0 + k2));
  }
  SpectralVelocity u = dealias(grid, curl_of_stream(grid, psi));
  const double h1 = norms(grid, u).h1;
  if (h1 > 0.0) u *= h1_norm / h1;
  return u;
}

SpectralVelocity shell_forcing(const FourierGrid& grid, double k2_min,
                               double k2_max, double l2_norm,
                               std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Complex> psi(grid.size());
  bool any = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double phase = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
    const double k2 = grid.k2(i);
    if (!grid.retained(i) || k2 < k2_min || k2 > k2_max) continue;
    psi[i] = std::polar(1.0 / std::sqrt(k2), phase);
    any = true;
  }
  if (!any) {
    throw std::invalid_argument("shell_forcing: no retained modes in the shell");
  }
  SpectralVelocity f = curl_of_stream(grid, psi);
  const double l2 = norms(grid, f).l2;
  f *= l2_norm / l2;
  return f;
}

// ---------------------------------------------------------------------------

struct Solver::Workspace {
  explicit Workspace(const FourierGrid& g)
      : fft(g),
        p1(g.physical_size()),
        p2(g.physical_size()),
        p3(g.physical_size()),
        p4(g.physical_size()),
        p5(g.physical_size()),
        p6(g.physical_size()),
        s1(g.size()),
        s2(g.size()) {}

  Transform fft;
  std::vector<double> p1, p2, p3, p4, p5, p6;
  std::vector<Complex> s1, s2;
  std::deque<std::pair<double, std::vector<double>>> viscous;
};

Solver::Solver(FourierGrid grid, Params params)
    : grid_(std::move(grid)),
      params_(std::move(params)),
      ws_(std::make_unique<Workspace>(grid_)) {
  if (!(params_.nu > 0.0)) throw std::invalid_argument("Solver: nu must be > 0");
  if (params_.forcing.half() == 0) params_.forcing = SpectralVelocity(grid_);
  require_grid(grid_, params_.forcing);
}

Solver::~Solver() = default;
Solver::Solver(Solver&&) noexcept = default;
Solver& Solver::operator=(Solver&&) noexcept = default;

SpectralVelocity Solver::B(const SpectralVelocity& u,
                           const SpectralVelocity& v) const {
  require_grid(grid_, u);
  require_grid(grid_, v);
  auto& w = *ws_;
  w.fft.to_physical(u.u1(), w.p1);
  w.fft.to_physical(u.u2(), w.p2);

  const auto v1 = v.u1(), v2 = v.u2();
  const std::size_t ns = grid_.size();
  // d/dx v1, d/dy v1
  for (std::size_t i = 0; i < ns; ++i) w.s1[i] = kI * grid_.kx(i) * v1[i];
  for (std::size_t i = 0; i < ns; ++i) w.s2[i] = kI * grid_.ky(i) * v1[i];
  w.fft.to_physical(w.s1, w.p3);
  w.fft.to_physical(w.s2, w.p4);
  // d/dx v2, d/dy v2
  for (std::size_t i = 0; i < ns; ++i) w.s1[i] = kI * grid_.kx(i) * v2[i];
  for (std::size_t i = 0; i < ns; ++i) w.s2[i] = kI * grid_.ky(i) * v2[i];
  w.fft.to_physical(w.s1, w.p5);
  w.fft.to_physical(w.s2, w.p6);

  const std::size_t np = grid_.physical_size();
  for (std::size_t i = 0; i < np; ++i) {
    const double a = w.p1[i] * w.p3[i] + w.p2[i] * w.p4[i];
    const double b = w.p1[i] * w.p5[i] + w.p2[i] * w.p6[i];
    w.p3[i] = a;
    w.p4[i] = b;
  }
  SpectralVelocity out(grid_);
  w.fft.to_spectral(w.p3, out.u1());
  w.fft.to_spectral(w.p4, out.u2());
  return leray_project(grid_, dealias(grid_, std::move(out)));
}

SpectralVelocity Solver::B_self(const SpectralVelocity& u) const {
  require_grid(grid_, u);
  auto& w = *ws_;
  const auto u1 = u.u1(), u2 = u.u2();
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    w.s1[i] = kI * (grid_.kx(i) * u2[i] - grid_.ky(i) * u1[i]);
  }
  w.fft.to_physical(u1, w.p1);
  w.fft.to_physical(u2, w.p2);
  w.fft.to_physical(w.s1, w.p3);
  const std::size_t np = grid_.physical_size();
  for (std::size_t i = 0; i < np; ++i) {
    const double omega = w.p3[i];
    w.p4[i] = -omega * w.p2[i];
    w.p5[i] = omega * w.p1[i];
  }
  SpectralVelocity out(grid_);
  w.fft.to_spectral(w.p4, out.u1());
  w.fft.to_spectral(w.p5, out.u2());
  return leray_project(grid_, dealias(grid_, std::move(out)));
}

SpectralVelocity Solver::nonlinear(const SpectralVelocity& u) const {
  SpectralVelocity out = params_.forcing;
  out -= B_self(u);
  return out;
}

SpectralVelocity Solver::rhs(const SpectralVelocity& u) const {
  SpectralVelocity out = nonlinear(u);
  out -= params_.nu * apply_A(grid_, u);
  return out;
}

const std::vector<double>& Solver::viscous_factors(double tau) const {
  auto& cache = ws_->viscous;
  for (const auto& entry : cache) {
    if (entry.first == tau) return entry.second;
  }
  std::vector<double> f(grid_.size());
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    f[i] = std::exp(-params_.nu * grid_.k2(i) * tau);
  }
  if (cache.size() >= 6) cache.pop_front();
  cache.emplace_back(tau, std::move(f));
  return cache.back().second;
}

SpectralVelocity Solver::linear_propagate(const SpectralVelocity& u,
                                          double tau) const {
  require_grid(grid_, u);
  const auto& f = viscous_factors(tau);
  SpectralVelocity out = u;
  auto o1 = out.u1();
  auto o2 = out.u2();
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    o1[i] *= f[i];
    o2[i] *= f[i];
  }
  return out;
}

std::pair<std::vector<double>, std::vector<double>> Solver::to_physical(
    const SpectralVelocity& u) const {
  require_grid(grid_, u);
  std::vector<double> a(grid_.physical_size()), b(grid_.physical_size());
  ws_->fft.to_physical(u.u1(), a);
  ws_->fft.to_physical(u.u2(), b);
  return {std::move(a), std::move(b)};
}

double Solver::max_speed(const SpectralVelocity& u) const {
  const auto [a, b] = to_physical(u);
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::hypot(a[i], b[i]));
  return m;
}

double Solver::cfl_dt(const SpectralVelocity& u, double dt_max) const {
  const auto [a, b] = to_physical(u);
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a[i]) + std::abs(b[i]));
  }
  if (m == 0.0) return dt_max;
  return std::min(dt_max, 0.5 * grid_.dx() / m);
}

Solver::ErrorNorms Solver::error_norms(const SpectralVelocity& delta) const {
  const Norms n = norms(grid_, delta);
  return {n.l2, n.h1};
}

double Solver::solution_norm(const SpectralVelocity& u) const {
  return norms(grid_, u).h1;
}

}  // namespace ddalab::nse

#include "ddalab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ddalab::analysis {

namespace {

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

struct SimpsonPanel {
  double a, m, b;
  double fa, fm, fb;
  double whole;
};

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_recurse(const ScalarFunction& f, const SimpsonPanel& p,
                       double tol, int depth) {
  const double lm = 0.5 * (p.a + p.m);
  const double rm = 0.5 * (p.m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(p.a, p.m, p.fa, flm, p.fm);
  const double right = simpson(p.m, p.b, p.fm, frm, p.fb);
  const double delta = left + right - p.whole;
  if (std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  if (depth <= 0) {
    std::ostringstream msg;
    msg << "adaptive_simpson: maximum depth exceeded on [" << p.a << ", "
        << p.b << "]";
    throw QuadratureError(msg.str());
  }
  const SimpsonPanel lp{p.a, lm, p.m, p.fa, flm, p.fm, left};
  const SimpsonPanel rp{p.m, rm, p.b, p.fm, frm, p.fb, right};
  return simpson_recurse(f, lp, 0.5 * tol, depth - 1) +
         simpson_recurse(f, rp, 0.5 * tol, depth - 1);
}

}  // namespace

RootResult bisect(const ScalarFunction& f, double lo, double hi,
                  const RootConfig& cfg) {
  if (!(cfg.rel_tol > 0.0)) {
    throw std::invalid_argument("bisect: rel_tol must be positive");
  }
  if (lo > hi) std::swap(lo, hi);
  double flo = f(lo);
  double fhi = f(hi);
  if (!std::isfinite(flo) || !std::isfinite(fhi)) {
    throw BracketError("bisect: function is not finite at the bracket ends");
  }
  if (flo == 0.0) return {lo, lo, lo, 0};
  if (fhi == 0.0) return {hi, hi, hi, 0};
  if (sign_of(flo) == sign_of(fhi)) {
    std::ostringstream msg;
    msg << "bisect: no sign change on [" << lo << ", " << hi
        << "]; widen the bracket";
    throw BracketError(msg.str());
  }

  int it = 0;
  for (; it < cfg.max_iterations; ++it) {
    const double width = hi - lo;
    if (width <= cfg.rel_tol * std::max(std::abs(lo), std::abs(hi))) break;
    const double mid = lo + 0.5 * width;
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return {mid, mid, mid, it + 1};
    if (sign_of(fm) == sign_of(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  return {lo + 0.5 * (hi - lo), lo, hi, it};
}

std::pair<double, double> bracket_by_doubling(const ScalarFunction& f,
                                              double start,
                                              const RootConfig& cfg) {
  if (!(start > 0.0)) {
    throw std::invalid_argument("bracket_by_doubling: start must be positive");
  }
  const int s0 = sign_of(f(start));
  double prev = start;
  double x = start;
  for (int i = 0; i < cfg.max_doublings; ++i) {
    x = 2.0 * prev;
    const double fx = f(x);
    if (std::isnan(fx)) break;
    if (sign_of(fx) != s0) return {prev, x};
    prev = x;
  }
  std::ostringstream msg;
  msg << "bracket_by_doubling: no sign change between " << start << " and "
      << x;
  throw BracketError(msg.str());
}

double adaptive_simpson(const ScalarFunction& f, double a, double b,
                        double rel_tol, int max_depth) {
  if (a == b) return 0.0;
  if (a > b) return -adaptive_simpson(f, b, a, rel_tol, max_depth);
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = simpson(a, b, fa, fm, fb);
  // The single-panel estimate can be far off for steep integrands, so the
  // tolerance is scaled by a composite 16-panel rule instead.
  double scale = 0.0;
  constexpr int kPanels = 16;
  const double w = (b - a) / kPanels;
  for (int i = 0; i < kPanels; ++i) {
    const double x0 = a + i * w, x1 = x0 + w;
    scale += simpson(x0, x1, f(x0), f(0.5 * (x0 + x1)), f(x1));
  }
  double tol = rel_tol * std::abs(scale);
  if (tol == 0.0) tol = rel_tol;
  return simpson_recurse(f, {a, m, b, fa, fm, fb, whole}, tol, max_depth);
}

double fd_derivative(const ScalarFunction& f, double x, double eps) {
  return (f(x + eps) - f(x)) / eps;
}

}  // namespace ddalab::analysis

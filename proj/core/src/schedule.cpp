#include "ddalab/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ddalab/random.hpp"

namespace ddalab {

Schedule Schedule::uniform(double t0, double h, std::size_t n_max) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw std::invalid_argument("Schedule::uniform: h must be positive");
  }
  std::vector<double> t(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) t[n] = t0 + static_cast<double>(n) * h;
  return Schedule(Kind::Uniform, std::move(t), h);
}

Schedule Schedule::uniform_until(double t0, double h, double t_end) {
  if (!(h > 0.0)) throw std::invalid_argument("Schedule::uniform_until: h must be positive");
  if (!(t_end >= t0)) throw std::invalid_argument("Schedule::uniform_until: t_end < t0");
  const double n = std::floor((t_end - t0) / h * (1.0 + 1e-12));
  return uniform(t0, h, static_cast<std::size_t>(n));
}

Schedule Schedule::explicit_times(std::vector<double> times) {
  if (times.empty()) throw std::invalid_argument("Schedule: empty time list");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i])) throw std::invalid_argument("Schedule: non-finite time");
    if (i > 0 && !(times[i] > times[i - 1])) {
      std::ostringstream msg;
      msg << "Schedule: times must be strictly increasing (t[" << i << "] = " << times[i]
          << " after " << times[i - 1] << ")";
      throw std::invalid_argument(msg.str());
    }
  }
  return Schedule(Kind::Explicit, std::move(times), 0.0);
}

Schedule Schedule::random_gaps(double t0, double max_gap, double t_end,
                               std::uint64_t seed) {
  if (!(max_gap > 0.0)) throw std::invalid_argument("Schedule::random_gaps: max_gap <= 0");
  if (!(t_end > t0)) throw std::invalid_argument("Schedule::random_gaps: t_end <= t0");
  Rng rng(seed);
  std::vector<double> t{t0};
  while (t.back() < t_end) {
    // 1 - U[0,1) lies in (0, 1].
    const double gap = max_gap * (1.0 - rng.uniform());
    const double next = std::min(t.back() + gap, t_end);
    if (next > t.back()) t.push_back(next);
  }
  return Schedule(Kind::Explicit, std::move(t), 0.0);
}

double Schedule::max_gap() const {
  double g = 0.0;
  for (std::size_t i = 1; i < times_.size(); ++i) g = std::max(g, times_[i] - times_[i - 1]);
  return g;
}

std::string Schedule::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (kind_ == Kind::Uniform) {
    os << "uniform(t0=" << start() << ",h=" << h_ << ",n=" << size() - 1 << ")";
  } else {
    os << "explicit(n=" << size() - 1 << ",t0=" << start() << ",t_end=" << end()
       << ",max_gap=" << max_gap() << ")";
  }
  return os.str();
}

}  // namespace ddalab

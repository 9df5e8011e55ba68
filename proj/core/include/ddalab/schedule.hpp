#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ddalab {

/// Strictly increasing observation times t_0 < t_1 < ... < t_N.
class Schedule {
 public:
  enum class Kind { Uniform, Explicit };

  /// t_n = t0 + n h for n = 0..n_max.
  static Schedule uniform(double t0, double h, std::size_t n_max);
  /// Uniform with n_max = floor((t_end - t0) / h), allowing for rounding.
  static Schedule uniform_until(double t0, double h, double t_end);
  /// Throws std::invalid_argument unless the list is strictly increasing
  /// with at least one entry.
  static Schedule explicit_times(std::vector<double> times);
  /// Gaps drawn uniformly from (0, max_gap] until t_end; the last time is
  /// clipped to t_end.
  static Schedule random_gaps(double t0, double max_gap, double t_end,
                              std::uint64_t seed);

  Kind kind() const { return kind_; }
  std::size_t size() const { return times_.size(); }
  double time(std::size_t n) const { return times_.at(n); }
  double start() const { return times_.front(); }
  double end() const { return times_.back(); }
  /// Uniform step for uniform schedules, 0 otherwise.
  double h() const { return h_; }
  double max_gap() const;
  const std::vector<double>& times() const { return times_; }
  /// One-line description for run metadata.
  std::string describe() const;

 private:
  Schedule(Kind kind, std::vector<double> times, double h)
      : kind_(kind), times_(std::move(times)), h_(h) {}

  Kind kind_;
  std::vector<double> times_;
  double h_;
};

}  // namespace ddalab

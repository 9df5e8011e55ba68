#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "ddalab/dda.hpp"
#include "ddalab/integrators.hpp"

namespace expcli {

/// Raised for malformed or out-of-range configuration; the message starts
/// with the offending field path, e.g. "schedule.h: must be > 0".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SystemKind { Lorenz, Nse2d };

struct LorenzSection {
  double sigma = 10.0;
  double b = 8.0 / 3.0;
  double r = 28.0;
  /// Observed components, any of x, y, z.
  std::string observe = "x";
};

struct NseSection {
  int n = 64;
  double length = 6.283185307179586;
  double nu = 0.01;
  double forcing_norm = 0.5;
  double forcing_k2_min = 16.0;
  double forcing_k2_max = 25.0;
  std::uint64_t forcing_seed = 7;
  double lambda = 25.0;
  double c = 1.0;
  /// Reference start before spin-up: random field of this H1 norm on |m| <= max_mode.
  double init_h1 = 1.0;
  int init_max_mode = 4;
};

struct IntegratorSection {
  ddalab::Scheme scheme = ddalab::Scheme::RK4;
  double dt = 1e-3;
};

enum class ScheduleKind { Uniform, RandomGaps, Explicit };

struct ScheduleSection {
  ScheduleKind kind = ScheduleKind::Uniform;
  double h = 0.1;          // uniform interval; upper gap bound for random_gaps
  double t_end = 100.0;    // horizon measured from the end of spin-up
  std::vector<double> times;  // explicit
};

enum class EtaKind { Zero, Random };

struct EtaSection {
  EtaKind kind = EtaKind::Zero;
  double norm = 1.0;
  std::uint64_t seed = 0;
};

struct ThresholdSection {
  double h_lo = 0.05;
  double h_hi = 0.5;
  double resolution = 0.0;
};

struct SweepSection {
  std::vector<double> h;
  std::vector<double> lambda;
};

struct ExperimentConfig {
  SystemKind system = SystemKind::Lorenz;
  int seed_count = 5;
  std::uint64_t first_seed = 1;
  unsigned workers = 0;
  double spinup = 100.0;
  long sample_stride = 0;

  LorenzSection lorenz;
  NseSection nse;
  IntegratorSection integrator;
  ScheduleSection schedule;
  EtaSection eta;
  ddalab::dda::VerdictConfig verdict;
  ThresholdSection threshold;
  SweepSection sweep;
};

std::string to_string(SystemKind k);

/// Defaults appropriate for each system (Lorenz: RK4, dt 1e-3; NSE: IFRK4,
/// dt 0.02 capped by the CFL limit).
ExperimentConfig default_config(SystemKind kind);

/// Parses the INI text. Keys absent from the text keep their defaults for
/// the chosen system; unknown sections or keys are rejected.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// INI text that parse_config maps back to an equal configuration.
std::string serialize_config(const ExperimentConfig& cfg);

/// Flat (section.key, value) pairs in serialization order.
std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& cfg);

/// Range checks; throws ConfigError naming the field.
void validate(const ExperimentConfig& cfg);

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

}  // namespace expcli

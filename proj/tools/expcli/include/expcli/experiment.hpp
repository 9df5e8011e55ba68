#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "ddalab/dda.hpp"
#include "ddalab/lorenz.hpp"
#include "ddalab/nse2d.hpp"
#include "ddalab/schedule.hpp"
#include "expcli/config.hpp"

namespace expcli {

/// Observation times starting at 0 (the end of spin-up) for interval h.
/// Random-gap schedules draw their gaps from `seed`.
ddalab::Schedule make_schedule(const ScheduleSection& s, double h, std::uint64_t seed);

/// Reference norms at one instant, for the NSE norm-series export.
struct NormRow {
  double t;
  double l2, h1, h2;
};

/// A configured system that can run assimilation experiments for any
/// reference seed. Spun-up reference states are cached per seed and the
/// cache is safe to share between threads; each run builds its own solver.
class Experiment {
 public:
  explicit Experiment(ExperimentConfig cfg) : cfg_(std::move(cfg)) {}
  virtual ~Experiment() = default;

  const ExperimentConfig& config() const { return cfg_; }

  /// One run. `h` overrides schedule.h and `lambda` overrides nse2d.lambda
  /// (Lorenz ignores it).
  virtual ddalab::dda::ErrorSeries run(std::uint64_t seed, std::optional<double> h = {},
                                       std::optional<double> lambda = {}) const = 0;

  /// Spins up the references for `seeds` ahead of time, in parallel.
  virtual void prepare(const std::vector<std::uint64_t>& seeds, unsigned workers) const = 0;

 protected:
  void stamp(ddalab::dda::ErrorSeries& s, std::uint64_t seed, double h,
             std::optional<double> lambda) const;

  ExperimentConfig cfg_;
};

class LorenzExperiment : public Experiment {
 public:
  explicit LorenzExperiment(ExperimentConfig cfg);

  ddalab::dda::ErrorSeries run(std::uint64_t seed, std::optional<double> h = {},
                               std::optional<double> lambda = {}) const override;
  void prepare(const std::vector<std::uint64_t>& seeds, unsigned workers) const override;

  const ddalab::lorenz::Params& params() const { return params_; }
  ddalab::ObservationOp<ddalab::lorenz::State> observation() const;
  ddalab::lorenz::State reference(std::uint64_t seed) const;
  ddalab::lorenz::State eta(const ddalab::ObservationOp<ddalab::lorenz::State>& obs,
                            std::uint64_t seed) const;

 private:
  ddalab::lorenz::Params params_;
  mutable std::mutex mu_;
  mutable std::map<std::uint64_t, ddalab::lorenz::State> refs_;
};

class NseExperiment : public Experiment {
 public:
  explicit NseExperiment(ExperimentConfig cfg);

  ddalab::dda::ErrorSeries run(std::uint64_t seed, std::optional<double> h = {},
                               std::optional<double> lambda = {}) const override;
  void prepare(const std::vector<std::uint64_t>& seeds, unsigned workers) const override;

  struct Detail {
    std::vector<NormRow> reference_norms;  // at every observation time
    ddalab::nse::SpectralVelocity reference_t0;
    ddalab::nse::SpectralVelocity final_approximation;
    double final_time = 0.0;
  };
  /// run() that also records reference norms and the end states.
  ddalab::dda::ErrorSeries run_detailed(std::uint64_t seed, std::optional<double> h,
                                        std::optional<double> lambda, Detail& detail) const;

  const ddalab::nse::FourierGrid& grid() const { return grid_; }
  const ddalab::nse::SpectralVelocity& forcing() const { return forcing_; }
  ddalab::nse::Solver solver() const;
  ddalab::nse::SpectralVelocity reference(std::uint64_t seed) const;
  ddalab::nse::SpectralVelocity eta(const ddalab::ObservationOp<ddalab::nse::SpectralVelocity>& obs,
                                    std::uint64_t seed) const;
  /// Integrator settings for a run starting from U0: dt capped by the CFL limit.
  ddalab::StepperConfig stepper_for(const ddalab::nse::Solver& s,
                                    const ddalab::nse::SpectralVelocity& U0) const;

 private:
  ddalab::nse::FourierGrid grid_;
  ddalab::nse::SpectralVelocity forcing_;
  mutable std::mutex mu_;
  mutable std::map<std::uint64_t, ddalab::nse::SpectralVelocity> refs_;
};

std::unique_ptr<Experiment> make_experiment(const ExperimentConfig& cfg);

}  // namespace expcli

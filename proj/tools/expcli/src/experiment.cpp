#include "expcli/experiment.hpp"

#include <cmath>

#include "ddalab/parallel.hpp"
#include "ddalab/random.hpp"
#include "ddalab/version.hpp"

namespace expcli {

using ddalab::dda::format_double;

ddalab::Schedule make_schedule(const ScheduleSection& s, double h, std::uint64_t seed) {
  switch (s.kind) {
    case ScheduleKind::Uniform:
      return ddalab::Schedule::uniform_until(0.0, h, s.t_end);
    case ScheduleKind::RandomGaps:
      return ddalab::Schedule::random_gaps(0.0, h, s.t_end, seed * 0x2545F4914F6CDD1DULL + 17);
    case ScheduleKind::Explicit:
      return ddalab::Schedule::explicit_times(s.times);
  }
  throw std::logic_error("make_schedule: unknown kind");
}

void Experiment::stamp(ddalab::dda::ErrorSeries& s, std::uint64_t seed, double h,
                       std::optional<double> lambda) const {
  s.set_meta("ddalab_version", ddalab::kVersion);
  s.set_meta("seed", std::to_string(seed));
  s.set_meta("h", format_double(h));
  if (lambda) s.set_meta("lambda", format_double(*lambda));
  for (const auto& [k, v] : config_entries(cfg_)) s.set_meta("config." + k, v);
}

// ---------------------------------------------------------------------------

LorenzExperiment::LorenzExperiment(ExperimentConfig cfg)
    : Experiment(std::move(cfg)),
      params_{cfg_.lorenz.sigma, cfg_.lorenz.b, cfg_.lorenz.r} {
  params_.validate();
}

ddalab::ObservationOp<ddalab::lorenz::State> LorenzExperiment::observation() const {
  const std::string& o = cfg_.lorenz.observe;
  if (o == "x") return ddalab::lorenz::proj_X();
  return ddalab::lorenz::diagonal_projection({o.find('x') != std::string::npos,
                                              o.find('y') != std::string::npos,
                                              o.find('z') != std::string::npos});
}

ddalab::lorenz::State LorenzExperiment::reference(std::uint64_t seed) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = refs_.find(seed); it != refs_.end()) return it->second;
  }
  const auto U0 = ddalab::lorenz::attractor_point(params_, seed, cfg_.spinup,
                                                  {ddalab::Scheme::RK4, cfg_.integrator.dt});
  std::lock_guard<std::mutex> lock(mu_);
  refs_.emplace(seed, U0);
  return U0;
}

void LorenzExperiment::prepare(const std::vector<std::uint64_t>& seeds, unsigned workers) const {
  ddalab::parallel_map(seeds.size(), workers, [&](std::size_t i) { return reference(seeds[i]); });
}

ddalab::lorenz::State LorenzExperiment::eta(
    const ddalab::ObservationOp<ddalab::lorenz::State>& obs, std::uint64_t seed) const {
  if (cfg_.eta.kind == EtaKind::Zero) return {};
  return ddalab::lorenz::random_guess(obs, cfg_.eta.norm, cfg_.eta.seed + seed);
}

ddalab::dda::ErrorSeries LorenzExperiment::run(std::uint64_t seed, std::optional<double> h,
                                               std::optional<double>) const {
  const double hh = h.value_or(cfg_.schedule.h);
  const ddalab::lorenz::System sys(params_);
  const auto obs = observation();
  ddalab::dda::RunConfig rc;
  rc.stepper = {ddalab::Scheme::RK4, cfg_.integrator.dt};
  rc.verdict = cfg_.verdict;
  rc.sample_stride = cfg_.sample_stride;
  auto series = ddalab::dda::run(sys, reference(seed), obs, make_schedule(cfg_.schedule, hh, seed),
                                 eta(obs, seed), rc);
  stamp(series, seed, hh, std::nullopt);
  return series;
}

// ---------------------------------------------------------------------------

NseExperiment::NseExperiment(ExperimentConfig cfg)
    : Experiment(std::move(cfg)), grid_(cfg_.nse.n, cfg_.nse.length) {
  forcing_ = ddalab::nse::shell_forcing(grid_, cfg_.nse.forcing_k2_min, cfg_.nse.forcing_k2_max,
                                        cfg_.nse.forcing_norm, cfg_.nse.forcing_seed);
}

ddalab::nse::Solver NseExperiment::solver() const {
  return ddalab::nse::Solver(grid_, ddalab::nse::Params{cfg_.nse.nu, forcing_});
}

ddalab::StepperConfig NseExperiment::stepper_for(const ddalab::nse::Solver& s,
                                                 const ddalab::nse::SpectralVelocity& U0) const {
  return {cfg_.integrator.scheme, s.cfl_dt(U0, cfg_.integrator.dt)};
}

ddalab::nse::SpectralVelocity NseExperiment::reference(std::uint64_t seed) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = refs_.find(seed); it != refs_.end()) return it->second;
  }
  const auto s = solver();
  auto U = ddalab::nse::random_field(grid_, seed, cfg_.nse.init_h1, cfg_.nse.init_max_mode);
  // Re-evaluate the CFL limit every time unit while the flow develops.
  double t = 0.0;
  while (t < cfg_.spinup) {
    const double t1 = std::min(cfg_.spinup, t + 1.0);
    U = ddalab::integrate(s, U, t, t1, stepper_for(s, U));
    t = t1;
  }
  std::lock_guard<std::mutex> lock(mu_);
  refs_.emplace(seed, U);
  return U;
}

void NseExperiment::prepare(const std::vector<std::uint64_t>& seeds, unsigned workers) const {
  ddalab::parallel_map(seeds.size(), workers, [&](std::size_t i) {
    reference(seeds[i]);
    return 0;
  });
}

ddalab::nse::SpectralVelocity NseExperiment::eta(
    const ddalab::ObservationOp<ddalab::nse::SpectralVelocity>& obs, std::uint64_t seed) const {
  ddalab::nse::SpectralVelocity zero(grid_);
  if (cfg_.eta.kind == EtaKind::Zero) return zero;
  auto e = obs.Q(ddalab::nse::random_field(grid_, cfg_.eta.seed + seed + 0x51ED27ULL, 1.0));
  const double n = ddalab::nse::norms(grid_, e).h1;
  if (n == 0.0) return zero;
  e *= cfg_.eta.norm / n;
  return e;
}

ddalab::dda::ErrorSeries NseExperiment::run(std::uint64_t seed, std::optional<double> h,
                                            std::optional<double> lambda) const {
  Detail d;
  return run_detailed(seed, h, lambda, d);
}

ddalab::dda::ErrorSeries NseExperiment::run_detailed(std::uint64_t seed, std::optional<double> h,
                                                     std::optional<double> lambda,
                                                     Detail& detail) const {
  const double hh = h.value_or(cfg_.schedule.h);
  const double lam = lambda.value_or(cfg_.nse.lambda);
  const auto s = solver();
  const auto U0 = reference(seed);
  const auto obs = ddalab::nse::proj_lambda(grid_, lam);
  ddalab::dda::RunConfig rc;
  rc.stepper = stepper_for(s, U0);
  rc.verdict = cfg_.verdict;
  rc.sample_stride = cfg_.sample_stride;

  detail.reference_norms.clear();
  detail.reference_t0 = U0;
  auto observer = [&](std::size_t, double t, const ddalab::nse::SpectralVelocity& U,
                      const ddalab::nse::SpectralVelocity& u, ddalab::dda::SampleEvent ev) {
    if (ev != ddalab::dda::SampleEvent::Update) return;
    const auto n = ddalab::nse::norms(grid_, U);
    detail.reference_norms.push_back({t, n.l2, n.h1, n.h2});
    detail.final_approximation = u;
    detail.final_time = t;
  };
  auto series = ddalab::dda::run(s, U0, obs, make_schedule(cfg_.schedule, hh, seed),
                                 eta(obs, seed), rc, observer);
  stamp(series, seed, hh, lam);
  series.set_meta("observed_modes",
                  std::to_string(ddalab::nse::observed_mode_count(grid_, lam)));
  return series;
}

std::unique_ptr<Experiment> make_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  if (cfg.system == SystemKind::Lorenz) return std::make_unique<LorenzExperiment>(cfg);
  return std::make_unique<NseExperiment>(cfg);
}

}  // namespace expcli

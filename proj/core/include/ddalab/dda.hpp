#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ddalab/integrators.hpp"
#include "ddalab/observation.hpp"
#include "ddalab/schedule.hpp"

// Discrete data assimilation: between observation times the approximating
// solution runs the model freely; at each t_n its observed part is replaced
// by the reference's, u(t_n) = Q S(t_n, t_{n-1}, u_{n-1}) + P U(t_n).
namespace ddalab::dda {

enum class Verdict { Converged, Diverged, Undecided };
std::string to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

enum class SampleEvent { Step, Update };
std::string to_string(SampleEvent e);

struct ErrorSample {
  double t = 0.0;
  double err_l2 = 0.0;
  std::optional<double> err_h1;
  SampleEvent event = SampleEvent::Step;
  double u_norm = 0.0;  // |u| (Lorenz) or ||u|| (NSE) of the approximation
};

struct VerdictConfig {
  double tol_rel = 1e-6;
  double blowup_factor = 1e3;
  double dwell_fraction = 0.1;
};

struct ErrorSeries {
  std::vector<ErrorSample> samples;
  bool has_h1 = false;
  Verdict verdict = Verdict::Undecided;
  std::optional<double> blowup_time;
  double sup_u_norm = 0.0;
  /// Ordered key=value pairs describing the run.
  std::vector<std::pair<std::string, std::string>> metadata;

  /// ||delta|| where available, |delta| otherwise.
  double primary(const ErrorSample& s) const {
    return has_h1 && s.err_h1 ? *s.err_h1 : s.err_l2;
  }
  double initial_error() const;
  double final_error() const;
  /// Samples taken right after an observation update, in time order.
  std::vector<ErrorSample> updates() const;
  /// Number of updates after which the error stays below tol_rel times the
  /// initial error for the rest of the run; nullopt if it never settles.
  std::optional<std::size_t> windows_to_converge(double tol_rel) const;
  void set_meta(const std::string& key, const std::string& value);
  std::optional<std::string> meta(const std::string& key) const;
};

/// Converged: every sample in the final dwell_fraction of [t_start, t_end]
/// is below tol_rel * e0. Diverged: a blow-up was recorded or some sample
/// exceeds blowup_factor * e0. Undecided otherwise. e0 is the error of the
/// first sample; when it is exactly zero the run is Converged only if the
/// error stays exactly zero. The horizon defaults to the sample span.
Verdict detect_convergence(const ErrorSeries& series, const VerdictConfig& cfg,
                           std::optional<std::pair<double, double>> horizon = {});

/// Q S(...) + P U_next, with S already applied by the caller:
/// `model` is S(t_{n+1}, t_n, u_n).
template <class State>
State assimilate_step(const State& model, const ObservationOp<State>& obs,
                      const State& reference) {
  return obs.merge(model, reference);
}

struct RunConfig {
  StepperConfig stepper;
  VerdictConfig verdict;
  /// Record an interior sample every `sample_stride` integrator steps
  /// (0: only at observation times).
  long sample_stride = 0;
  /// Stop as soon as the error exceeds blowup_factor * e0.
  bool stop_on_divergence = true;
};

/// Called after every integrator step and after every update with the
/// window index, time, reference and approximation.
struct NoRunObserver {
  template <class State>
  void operator()(std::size_t, double, const State&, const State&, SampleEvent) const {}
};

class ReferenceBlowUp : public std::runtime_error {
 public:
  explicit ReferenceBlowUp(double t)
      : std::runtime_error("reference trajectory became non-finite at t = " +
                           std::to_string(t)),
        time_(t) {}
  double time() const { return time_; }

 private:
  double time_;
};

/// Runs the reference from U0 at schedule.start() and the approximation from
/// u0 = Q eta + P U0 in lockstep (same scheme, same steps), updating at every
/// scheduled time. A non-finite approximation ends the run as Diverged with
/// the blow-up time; a non-finite reference throws ReferenceBlowUp.
template <VectorField System, class Observer = NoRunObserver>
ErrorSeries run(const System& sys, const typename System::state_type& U0,
                const ObservationOp<typename System::state_type>& obs,
                const Schedule& schedule, const typename System::state_type& eta,
                const RunConfig& cfg, Observer&& observer = {}) {
  using State = typename System::state_type;
  ErrorSeries series;
  series.set_meta("observation", obs.name());
  series.set_meta("schedule", schedule.describe());
  series.set_meta("scheme", std::string(to_string(cfg.stepper.scheme)));
  {
    std::ostringstream os;
    os.precision(17);
    os << cfg.stepper.dt;
    series.set_meta("dt", os.str());
    os.str("");
    os << cfg.verdict.tol_rel << "," << cfg.verdict.blowup_factor << ","
       << cfg.verdict.dwell_fraction;
    series.set_meta("verdict_rule(tol_rel,blowup_factor,dwell)", os.str());
  }

  State U = U0;
  State u = obs.merge(obs.Q(eta), U0);

  auto record = [&](double t, SampleEvent ev) {
    const auto en = sys.error_norms(U - u);
    ErrorSample s;
    s.t = t;
    s.err_l2 = en.l2;
    s.err_h1 = en.h1;
    s.event = ev;
    s.u_norm = sys.solution_norm(u);
    series.has_h1 = en.h1.has_value();
    series.samples.push_back(s);
    return series.primary(s);
  };

  const double e0 = record(schedule.start(), SampleEvent::Update);
  series.sup_u_norm = series.samples.back().u_norm;
  observer(std::size_t{0}, schedule.start(), U, u, SampleEvent::Update);
  const double divergence_level = cfg.verdict.blowup_factor * e0;
  bool stopped = false;

  for (std::size_t n = 0; n + 1 < schedule.size() && !stopped; ++n) {
    const double ta = schedule.time(n);
    const double tb = schedule.time(n + 1);
    const StepPlan plan = plan_steps(ta, tb, cfg.stepper.dt);
    for (long i = 0; i < plan.count; ++i) {
      const double h = plan.step_size(i);
      const bool last = i + 1 == plan.count;
      const double t = last ? tb : ta + static_cast<double>(i + 1) * plan.dt;
      U = step(sys, U, h, cfg.stepper.scheme);
      if (!is_finite(U)) throw ReferenceBlowUp(t);
      u = step(sys, u, h, cfg.stepper.scheme);
      if (!is_finite(u)) {
        series.blowup_time = t;
        stopped = true;
        break;
      }
      series.sup_u_norm = std::max(series.sup_u_norm, sys.solution_norm(u));
      observer(n, t, U, u, SampleEvent::Step);
      if (!last && cfg.sample_stride > 0 && (i + 1) % cfg.sample_stride == 0) {
        const double e = record(t, SampleEvent::Step);
        if (cfg.stop_on_divergence && e0 > 0.0 && e > divergence_level) {
          stopped = true;
          break;
        }
      }
    }
    if (stopped) break;
    u = assimilate_step(u, obs, U);
    const double e = record(tb, SampleEvent::Update);
    series.sup_u_norm = std::max(series.sup_u_norm, series.samples.back().u_norm);
    observer(n + 1, tb, U, u, SampleEvent::Update);
    if (cfg.stop_on_divergence && e0 > 0.0 && e > divergence_level) stopped = true;
  }

  series.verdict = detect_convergence(
      series, cfg.verdict, std::make_pair(schedule.start(), schedule.end()));
  series.set_meta("verdict", to_string(series.verdict));
  if (series.blowup_time) {
    std::ostringstream os;
    os.precision(17);
    os << *series.blowup_time;
    series.set_meta("blowup_time", os.str());
  }
  return series;
}

// ---------------------------------------------------------------------------
// Threshold search on the observation interval h.

/// Verdict of one run at interval h for one reference seed.
using Prober = std::function<Verdict(double h, std::uint64_t seed)>;

struct ThresholdConfig {
  int n_seeds = 5;
  /// Target bracket width; 0 means (h_hi - h_lo) / 32.
  double resolution = 0.0;
  unsigned workers = 1;
  std::uint64_t first_seed = 1;
};

struct Probe {
  double h = 0.0;
  std::vector<Verdict> verdicts;  // indexed by seed offset
  bool converged = false;         // strict majority Converged
};

struct ThresholdResult {
  double h_conv = 0.0;  // largest probed h with a Converged majority
  double h_div = 0.0;   // smallest probed h above it without one
  std::vector<Probe> probes;
};

class BracketError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

Probe probe_h(const Prober& prober, double h, const ThresholdConfig& cfg);

/// Bisection on h between a Converged-majority lower end and a
/// non-Converged-majority upper end, both checked first.
ThresholdResult threshold_search(const Prober& prober, double h_lo, double h_hi,
                                 const ThresholdConfig& cfg = {});

// ---------------------------------------------------------------------------
// Reports.

enum class BoundOn { Norm, NormSquared };

struct BoundednessReport {
  double sup_norm = 0.0;
  double bound = 0.0;
  BoundOn kind = BoundOn::Norm;
  bool within = false;
};

/// Compares the largest |u| (or ||u||) seen during the run against `bound`,
/// which applies to the norm or its square according to `kind`.
BoundednessReport boundedness_monitor(const ErrorSeries& series, double bound,
                                      BoundOn kind);

/// One cell of an (h, lambda) sweep with its majority verdict.
struct SweepCell {
  double h = 0.0;
  double lambda = 0.0;
  Verdict majority = Verdict::Undecided;
};

struct Anomaly {
  SweepCell from;  // the Converged cell
  SweepCell to;    // the Diverged cell that should have converged as well
  std::string rule;
};

/// At fixed h, raising lambda must not turn Converged into Diverged; at
/// fixed lambda, lowering h must not either. Every violating pair is listed.
std::vector<Anomaly> monotone_anomalies(const std::vector<SweepCell>& cells);

/// Strict majority of Converged, else Diverged if that has a strict
/// majority, else Undecided.
Verdict majority_verdict(const std::vector<Verdict>& verdicts);

// ---------------------------------------------------------------------------
// CSV persistence.

inline constexpr const char* kErrorSeriesSchema = "ddalab.error_series/1";

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// "# key=value" metadata lines (schema first), then the header
/// t,err_l2[,err_h1],event,u_norm and one row per sample. Numbers use the
/// shortest representation that round-trips.
void write_csv(std::ostream& os, const ErrorSeries& series);
void write_csv(const std::filesystem::path& path, const ErrorSeries& series);
ErrorSeries read_csv(std::istream& is);
ErrorSeries read_csv(const std::filesystem::path& path);

/// Shortest round-trip decimal form of x.
std::string format_double(double x);
/// Parses a full string as a double; throws std::invalid_argument.
double parse_double(const std::string& s);

}  // namespace ddalab::dda

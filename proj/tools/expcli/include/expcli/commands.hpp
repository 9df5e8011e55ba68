#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ddalab/dda.hpp"
#include "expcli/config.hpp"
#include "expcli/experiment.hpp"

namespace expcli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kRuntimeError = 2, kIoError = 3 };

struct SweepRow {
  double h = 0.0;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  ddalab::dda::Verdict verdict = ddalab::dda::Verdict::Undecided;
  double initial_error = 0.0;
  double final_error = 0.0;
  std::optional<std::size_t> windows_to_converge;
  std::string failure;  // non-empty when the run threw
};

struct SweepResult {
  std::vector<SweepRow> rows;              // sorted by (h, lambda, seed)
  std::vector<ddalab::dda::SweepCell> cells;  // majority per (h, lambda)
  std::vector<ddalab::dda::Anomaly> anomalies;
};

/// Every (h, lambda, seed) combination of the sweep axes; an empty h axis
/// falls back to schedule.h and an empty lambda axis to nse2d.lambda (0 for
/// Lorenz). Failing runs are recorded and the sweep continues.
SweepResult run_sweep(const Experiment& exp, unsigned workers);

ddalab::dda::ThresholdResult run_threshold(const Experiment& exp, unsigned workers);

void write_sweep_csv(std::ostream& os, const SweepResult& r, const ExperimentConfig& cfg);

/// Gnuplot script drawing the error columns of `csv_name` on a log axis.
void write_plot_script(std::ostream& os, const std::string& csv_name, bool has_h1,
                       const std::string& title);

/// t,l2,h1,h2 rows of reference norms under the metadata header.
void write_norm_series(std::ostream& os, const std::vector<NormRow>& rows,
                       const ExperimentConfig& cfg);

// Subcommands. Each writes its files under `out` and a summary to `log`,
// and returns the process exit code.
int cmd_bounds(const ExperimentConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_run(const ExperimentConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_threshold(const ExperimentConfig& cfg, const std::filesystem::path& out,
                  unsigned workers, std::ostream& log);
int cmd_sweep(const ExperimentConfig& cfg, const std::filesystem::path& out, unsigned workers,
              std::ostream& log);

}  // namespace expcli

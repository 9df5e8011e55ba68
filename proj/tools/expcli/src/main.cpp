#include <CLI11.hpp>

#include <iostream>

#include "ddalab/dda.hpp"
#include "ddalab/parallel.hpp"
#include "ddalab/snapshot.hpp"
#include "expcli/commands.hpp"
#include "expcli/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Discrete data assimilation experiments for Lorenz and 2D Navier-Stokes"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::optional<unsigned> workers;
  std::optional<int> seed_count;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "INI configuration file")->required();
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
  };
  auto add_parallel = [&](CLI::App* sub) {
    sub->add_option("--workers", workers, "worker threads (0 = all cores)");
    sub->add_option("--seed-count", seed_count, "reference seeds per probe")
        ->check(CLI::PositiveNumber);
  };

  auto* bounds = app.add_subcommand("bounds", "print the analytic constants for a configuration");
  auto* run = app.add_subcommand("run", "one assimilation run with the first seed");
  auto* threshold = app.add_subcommand("threshold", "bisect for the critical observation interval");
  auto* sweep = app.add_subcommand("sweep", "verdict grid over the h and lambda axes");
  for (auto* s : {bounds, run, threshold, sweep}) add_common(s);
  for (auto* s : {threshold, sweep}) add_parallel(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? expcli::kOk : expcli::kConfigError;
  }

  try {
    expcli::ExperimentConfig cfg = expcli::load_config(config_path);
    if (workers) cfg.workers = static_cast<int>(*workers);
    if (seed_count) cfg.seed_count = *seed_count;
    expcli::validate(cfg);
    const unsigned w = ddalab::resolve_workers(static_cast<unsigned>(cfg.workers));

    if (*bounds) return expcli::cmd_bounds(cfg, out_dir, std::cout);
    if (*run) return expcli::cmd_run(cfg, out_dir, std::cout);
    if (*threshold) return expcli::cmd_threshold(cfg, out_dir, w, std::cout);
    return expcli::cmd_sweep(cfg, out_dir, w, std::cout);
  } catch (const expcli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return expcli::kConfigError;
  } catch (const ddalab::dda::BracketError& e) {
    std::cerr << "config error: threshold: " << e.what() << '\n';
    return expcli::kConfigError;
  } catch (const expcli::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return expcli::kIoError;
  } catch (const ddalab::dda::CsvError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return expcli::kIoError;
  } catch (const ddalab::nse::SnapshotError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return expcli::kIoError;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return expcli::kRuntimeError;
  }
}

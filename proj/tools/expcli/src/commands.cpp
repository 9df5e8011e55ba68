#include "expcli/commands.hpp"

#include <algorithm>
#include <fstream>
#include <tuple>

#include "ddalab/parallel.hpp"
#include "ddalab/snapshot.hpp"
#include "expcli/report.hpp"

namespace expcli {

namespace fs = std::filesystem;
using ddalab::dda::format_double;
using ddalab::dda::to_string;
using ddalab::dda::Verdict;

namespace {

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  return os;
}

void close_out(std::ofstream& os, const fs::path& path) {
  os.flush();
  if (!os) throw IoError("write failed for " + path.string());
}

std::vector<std::uint64_t> seeds_of(const ExperimentConfig& cfg) {
  std::vector<std::uint64_t> s;
  for (int i = 0; i < cfg.seed_count; ++i) s.push_back(cfg.first_seed + static_cast<std::uint64_t>(i));
  return s;
}

std::string optional_count(const std::optional<std::size_t>& v) {
  return v ? std::to_string(*v) : "";
}

}  // namespace

// ---------------------------------------------------------------------------

SweepResult run_sweep(const Experiment& exp, unsigned workers) {
  const auto& cfg = exp.config();
  std::vector<double> hs = cfg.sweep.h;
  if (hs.empty()) hs.push_back(cfg.schedule.h);
  std::vector<double> lambdas = cfg.sweep.lambda;
  if (cfg.system == SystemKind::Lorenz) {
    lambdas = {0.0};
  } else if (lambdas.empty()) {
    lambdas.push_back(cfg.nse.lambda);
  }
  std::sort(hs.begin(), hs.end());
  std::sort(lambdas.begin(), lambdas.end());
  const auto seeds = seeds_of(cfg);
  exp.prepare(seeds, workers);

  std::vector<std::tuple<double, double, std::uint64_t>> jobs;
  for (double h : hs) {
    for (double l : lambdas) {
      for (auto s : seeds) jobs.emplace_back(h, l, s);
    }
  }

  SweepResult r;
  r.rows = ddalab::parallel_map(jobs.size(), workers, [&](std::size_t i) {
    const auto [h, l, s] = jobs[i];
    SweepRow row;
    row.h = h;
    row.lambda = l;
    row.seed = s;
    try {
      const auto series = exp.run(s, h, cfg.system == SystemKind::Nse2d ? std::optional(l) : std::nullopt);
      row.verdict = series.verdict;
      row.initial_error = series.initial_error();
      row.final_error = series.final_error();
      row.windows_to_converge = series.windows_to_converge(cfg.verdict.tol_rel);
    } catch (const std::exception& e) {
      row.verdict = Verdict::Undecided;
      row.failure = e.what();
    }
    return row;
  });

  for (std::size_t i = 0; i < r.rows.size(); i += seeds.size()) {
    std::vector<Verdict> vs;
    for (std::size_t k = 0; k < seeds.size(); ++k) vs.push_back(r.rows[i + k].verdict);
    r.cells.push_back({r.rows[i].h, r.rows[i].lambda, ddalab::dda::majority_verdict(vs)});
  }
  r.anomalies = ddalab::dda::monotone_anomalies(r.cells);
  return r;
}

ddalab::dda::ThresholdResult run_threshold(const Experiment& exp, unsigned workers) {
  const auto& cfg = exp.config();
  exp.prepare(seeds_of(cfg), workers);
  ddalab::dda::ThresholdConfig tc;
  tc.n_seeds = cfg.seed_count;
  tc.first_seed = cfg.first_seed;
  tc.resolution = cfg.threshold.resolution;
  tc.workers = workers;
  const ddalab::dda::Prober prober = [&exp](double h, std::uint64_t seed) {
    return exp.run(seed, h).verdict;
  };
  return ddalab::dda::threshold_search(prober, cfg.threshold.h_lo, cfg.threshold.h_hi, tc);
}

void write_sweep_csv(std::ostream& os, const SweepResult& r, const ExperimentConfig& cfg) {
  os << "# schema=ddalab.sweep/1\n";
  write_metadata_header(os, cfg);
  os << "row,h,lambda,seed,verdict,initial_error,final_error,reduction,windows_to_converge,failure\n";
  for (const auto& row : r.rows) {
    const double red = row.initial_error > 0.0 ? row.final_error / row.initial_error : 0.0;
    std::string failure = row.failure;
    std::replace(failure.begin(), failure.end(), ',', ';');
    os << "run," << format_double(row.h) << ',' << format_double(row.lambda) << ','
       << row.seed << ',' << to_string(row.verdict) << ',' << format_double(row.initial_error)
       << ',' << format_double(row.final_error) << ',' << format_double(red) << ','
       << optional_count(row.windows_to_converge) << ',' << failure << '\n';
  }
  for (const auto& c : r.cells) {
    os << "summary," << format_double(c.h) << ',' << format_double(c.lambda) << ",,"
       << to_string(c.majority) << ",,,,,\n";
  }
}

void write_plot_script(std::ostream& os, const std::string& csv_name, bool has_h1,
                       const std::string& title) {
  const std::string png = fs::path(csv_name).replace_extension(".png").string();
  os << "# gnuplot script; run: gnuplot " << fs::path(csv_name).replace_extension(".gp").string()
     << "\n"
     << "set datafile separator ','\n"
     << "set datafile commentschars '#'\n"
     << "set key autotitle columnhead\n"
     << "set logscale y\n"
     << "set format y '10^{%L}'\n"
     << "set xlabel 't'\n"
     << "set ylabel 'error'\n"
     << "set title '" << title << "'\n"
     << "set terminal pngcairo size 900,600\n"
     << "set output '" << png << "'\n"
     << "plot '" << csv_name << "' using 1:2 with lines lw 1.5";
  if (has_h1) os << ", \\\n     '' using 1:3 with lines lw 1.5";
  os << '\n';
}

void write_norm_series(std::ostream& os, const std::vector<NormRow>& rows,
                       const ExperimentConfig& cfg) {
  os << "# schema=ddalab.norm_series/1\n";
  write_metadata_header(os, cfg);
  os << "t,l2,h1,h2\n";
  for (const auto& r : rows) {
    os << format_double(r.t) << ',' << format_double(r.l2) << ',' << format_double(r.h1) << ','
       << format_double(r.h2) << '\n';
  }
}

// ---------------------------------------------------------------------------

int cmd_bounds(const ExperimentConfig& cfg, const fs::path& out, std::ostream& log) {
  const BoundReport r = bound_report(cfg);
  print_report(log, r);
  ensure_dir(out);
  const fs::path path = out / "bounds.csv";
  auto os = open_out(path);
  write_report_csv(os, r, cfg);
  close_out(os, path);
  log << "wrote " << path.string() << '\n';
  return kOk;
}

int cmd_run(const ExperimentConfig& cfg, const fs::path& out, std::ostream& log) {
  const auto exp = make_experiment(cfg);
  ensure_dir(out);
  const std::uint64_t seed = cfg.first_seed;
  ddalab::dda::ErrorSeries series;
  if (cfg.system == SystemKind::Nse2d) {
    const auto& nse = static_cast<const NseExperiment&>(*exp);
    NseExperiment::Detail detail;
    series = nse.run_detailed(seed, std::nullopt, std::nullopt, detail);
    const fs::path norms = out / "reference_norms.csv";
    auto os = open_out(norms);
    write_norm_series(os, detail.reference_norms, cfg);
    close_out(os, norms);
    try {
      ddalab::nse::write_snapshot(out / "reference_t0.snap", nse.grid(), cfg.nse.nu, 0.0,
                                  detail.reference_t0);
      if (detail.final_approximation.half() != 0) {
        ddalab::nse::write_snapshot(out / "approximation_final.snap", nse.grid(), cfg.nse.nu,
                                    detail.final_time, detail.final_approximation);
      }
    } catch (const ddalab::nse::SnapshotError& e) {
      throw IoError(e.what());
    }
  } else {
    series = exp->run(seed);
  }

  const fs::path csv = out / "series.csv";
  try {
    ddalab::dda::write_csv(csv, series);
  } catch (const ddalab::dda::CsvError& e) {
    throw IoError(e.what());
  }
  const fs::path gp = out / "series.gp";
  auto os = open_out(gp);
  write_plot_script(os, "series.csv", series.has_h1,
                    to_string(cfg.system) + " assimilation error, seed " + std::to_string(seed));
  close_out(os, gp);

  const double e0 = series.initial_error();
  const double ef = series.final_error();
  log << "system " << to_string(cfg.system) << ", seed " << seed << '\n'
      << "  verdict        " << to_string(series.verdict) << '\n'
      << "  initial error  " << format_double(e0) << '\n'
      << "  final error    " << format_double(ef) << '\n'
      << "  reduction      " << format_double(e0 > 0.0 ? ef / e0 : 0.0) << '\n'
      << "  sup |u|        " << format_double(series.sup_u_norm) << '\n';
  if (series.blowup_time) log << "  blow-up at t = " << format_double(*series.blowup_time) << '\n';
  log << "wrote " << csv.string() << " and " << gp.string() << '\n';
  return series.blowup_time ? kRuntimeError : kOk;
}

int cmd_threshold(const ExperimentConfig& cfg, const fs::path& out, unsigned workers,
                  std::ostream& log) {
  const auto exp = make_experiment(cfg);
  const auto r = run_threshold(*exp, workers);
  ensure_dir(out);
  const fs::path path = out / "threshold.csv";
  auto os = open_out(path);
  os << "# schema=ddalab.threshold/1\n";
  write_metadata_header(os, cfg);
  os << "# h_conv=" << format_double(r.h_conv) << "\n# h_div=" << format_double(r.h_div) << '\n';
  os << "h,seed,verdict,majority_converged\n";
  for (const auto& p : r.probes) {
    for (std::size_t i = 0; i < p.verdicts.size(); ++i) {
      os << format_double(p.h) << ',' << cfg.first_seed + i << ',' << to_string(p.verdicts[i])
         << ',' << (p.converged ? 1 : 0) << '\n';
    }
  }
  close_out(os, path);
  log << "critical interval bracket: [" << format_double(r.h_conv) << ", "
      << format_double(r.h_div) << "] from " << r.probes.size() << " probes x "
      << cfg.seed_count << " seeds\n"
      << "wrote " << path.string() << '\n';
  return kOk;
}

int cmd_sweep(const ExperimentConfig& cfg, const fs::path& out, unsigned workers,
              std::ostream& log) {
  const auto exp = make_experiment(cfg);
  const auto r = run_sweep(*exp, workers);
  ensure_dir(out);
  const fs::path path = out / "sweep.csv";
  auto os = open_out(path);
  write_sweep_csv(os, r, cfg);
  close_out(os, path);

  for (const auto& c : r.cells) {
    log << "  h=" << format_double(c.h);
    if (cfg.system == SystemKind::Nse2d) log << " lambda=" << format_double(c.lambda);
    log << "  " << to_string(c.majority) << '\n';
  }
  std::size_t failures = 0;
  for (const auto& row : r.rows) failures += row.failure.empty() ? 0 : 1;
  if (failures) log << failures << " run(s) failed; see the failure column\n";
  for (const auto& a : r.anomalies) {
    log << "ANOMALY (" << a.rule << "): Converged at h=" << format_double(a.from.h)
        << " lambda=" << format_double(a.from.lambda) << " but Diverged at h="
        << format_double(a.to.h) << " lambda=" << format_double(a.to.lambda) << '\n';
  }
  log << "wrote " << path.string() << '\n';
  return kOk;
}

}  // namespace expcli

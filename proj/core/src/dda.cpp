#include "ddalab/dda.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <map>

#include "ddalab/parallel.hpp"

namespace ddalab::dda {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Converged: return "Converged";
    case Verdict::Diverged: return "Diverged";
    case Verdict::Undecided: return "Undecided";
  }
  return "Undecided";
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "Converged") return Verdict::Converged;
  if (s == "Diverged") return Verdict::Diverged;
  if (s == "Undecided") return Verdict::Undecided;
  throw std::invalid_argument("unknown verdict '" + s + "'");
}

std::string to_string(SampleEvent e) { return e == SampleEvent::Step ? "step" : "update"; }

double ErrorSeries::initial_error() const {
  if (samples.empty()) throw std::logic_error("ErrorSeries: no samples");
  return primary(samples.front());
}

double ErrorSeries::final_error() const {
  if (samples.empty()) throw std::logic_error("ErrorSeries: no samples");
  return primary(samples.back());
}

std::vector<ErrorSample> ErrorSeries::updates() const {
  std::vector<ErrorSample> out;
  for (const auto& s : samples) {
    if (s.event == SampleEvent::Update) out.push_back(s);
  }
  return out;
}

std::optional<std::size_t> ErrorSeries::windows_to_converge(double tol_rel) const {
  const auto ups = updates();
  if (ups.empty()) return std::nullopt;
  const double level = tol_rel * primary(ups.front());
  std::optional<std::size_t> first;
  for (std::size_t n = 0; n < ups.size(); ++n) {
    if (primary(ups[n]) < level || (level == 0.0 && primary(ups[n]) == 0.0)) {
      if (!first) first = n;
    } else {
      first.reset();
    }
  }
  return first;
}

void ErrorSeries::set_meta(const std::string& key, const std::string& value) {
  for (auto& kv : metadata) {
    if (kv.first == key) {
      kv.second = value;
      return;
    }
  }
  metadata.emplace_back(key, value);
}

std::optional<std::string> ErrorSeries::meta(const std::string& key) const {
  for (const auto& kv : metadata) {
    if (kv.first == key) return kv.second;
  }
  return std::nullopt;
}

Verdict detect_convergence(const ErrorSeries& series, const VerdictConfig& cfg,
                           std::optional<std::pair<double, double>> horizon) {
  if (series.samples.empty()) {
    throw std::invalid_argument("detect_convergence: empty series");
  }
  if (series.blowup_time) return Verdict::Diverged;
  const double e0 = series.initial_error();
  const auto [t_start, t_end] =
      horizon.value_or(std::make_pair(series.samples.front().t, series.samples.back().t));

  if (e0 == 0.0) {
    const bool all_zero = std::all_of(series.samples.begin(), series.samples.end(),
                                      [&](const ErrorSample& s) { return series.primary(s) == 0.0; });
    return all_zero ? Verdict::Converged : Verdict::Undecided;
  }

  for (const auto& s : series.samples) {
    const double e = series.primary(s);
    if (!std::isfinite(e) || e > cfg.blowup_factor * e0) return Verdict::Diverged;
  }

  // A run cut short never reaches the dwell window and so cannot converge.
  const double dwell_start = t_end - cfg.dwell_fraction * (t_end - t_start);
  if (series.samples.back().t < t_end) return Verdict::Undecided;
  bool any = false;
  for (const auto& s : series.samples) {
    if (s.t < dwell_start) continue;
    any = true;
    if (!(series.primary(s) < cfg.tol_rel * e0)) return Verdict::Undecided;
  }
  return any ? Verdict::Converged : Verdict::Undecided;
}

// ---------------------------------------------------------------------------

Verdict majority_verdict(const std::vector<Verdict>& verdicts) {
  const auto conv = std::count(verdicts.begin(), verdicts.end(), Verdict::Converged);
  const auto div = std::count(verdicts.begin(), verdicts.end(), Verdict::Diverged);
  const auto n = static_cast<long>(verdicts.size());
  if (2 * conv > n) return Verdict::Converged;
  if (2 * div > n) return Verdict::Diverged;
  return Verdict::Undecided;
}

Probe probe_h(const Prober& prober, double h, const ThresholdConfig& cfg) {
  if (cfg.n_seeds < 1) throw std::invalid_argument("threshold_search: n_seeds < 1");
  Probe p;
  p.h = h;
  p.verdicts = parallel_map(static_cast<std::size_t>(cfg.n_seeds), cfg.workers,
                            [&](std::size_t i) { return prober(h, cfg.first_seed + i); });
  p.converged = majority_verdict(p.verdicts) == Verdict::Converged;
  return p;
}

ThresholdResult threshold_search(const Prober& prober, double h_lo, double h_hi,
                                 const ThresholdConfig& cfg) {
  if (!(h_lo > 0.0) || !(h_hi > h_lo)) {
    throw BracketError("threshold_search: need 0 < h_lo < h_hi");
  }
  const double resolution = cfg.resolution > 0.0 ? cfg.resolution : (h_hi - h_lo) / 32.0;
  ThresholdResult r;
  r.probes.push_back(probe_h(prober, h_lo, cfg));
  if (!r.probes.back().converged) {
    std::ostringstream msg;
    msg << "threshold_search: h_lo = " << h_lo
        << " does not converge for a majority of seeds; lower h_lo";
    throw BracketError(msg.str());
  }
  r.probes.push_back(probe_h(prober, h_hi, cfg));
  if (r.probes.back().converged) {
    std::ostringstream msg;
    msg << "threshold_search: h_hi = " << h_hi
        << " still converges for a majority of seeds; raise h_hi";
    throw BracketError(msg.str());
  }
  double lo = h_lo, hi = h_hi;
  while (hi - lo > resolution) {
    const double mid = 0.5 * (lo + hi);
    r.probes.push_back(probe_h(prober, mid, cfg));
    (r.probes.back().converged ? lo : hi) = mid;
  }
  r.h_conv = lo;
  r.h_div = hi;
  return r;
}

// ---------------------------------------------------------------------------

BoundednessReport boundedness_monitor(const ErrorSeries& series, double bound,
                                      BoundOn kind) {
  BoundednessReport r;
  r.sup_norm = series.sup_u_norm;
  for (const auto& s : series.samples) r.sup_norm = std::max(r.sup_norm, s.u_norm);
  r.bound = bound;
  r.kind = kind;
  const double measured = kind == BoundOn::Norm ? r.sup_norm : r.sup_norm * r.sup_norm;
  r.within = !series.blowup_time && measured <= bound;
  return r;
}

std::vector<Anomaly> monotone_anomalies(const std::vector<SweepCell>& cells) {
  std::vector<Anomaly> out;
  for (const auto& a : cells) {
    if (a.majority != Verdict::Converged) continue;
    for (const auto& b : cells) {
      if (b.majority != Verdict::Diverged) continue;
      if (b.h == a.h && b.lambda > a.lambda) {
        out.push_back({a, b, "larger lambda at fixed h"});
      } else if (b.lambda == a.lambda && b.h < a.h) {
        out.push_back({a, b, "smaller h at fixed lambda"});
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  return v;
}

void write_csv(std::ostream& os, const ErrorSeries& series) {
  os << "# schema=" << kErrorSeriesSchema << '\n';
  for (const auto& [k, v] : series.metadata) {
    if (k == "schema") continue;
    os << "# " << k << '=' << v << '\n';
  }
  os << "# sup_u_norm=" << format_double(series.sup_u_norm) << '\n';
  os << (series.has_h1 ? "t,err_l2,err_h1,event,u_norm\n" : "t,err_l2,event,u_norm\n");
  for (const auto& s : series.samples) {
    os << format_double(s.t) << ',' << format_double(s.err_l2) << ',';
    if (series.has_h1) os << (s.err_h1 ? format_double(*s.err_h1) : "") << ',';
    os << to_string(s.event) << ',' << format_double(s.u_norm) << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const ErrorSeries& series) {
  std::ofstream os(path);
  if (!os) throw CsvError("cannot open " + path.string() + " for writing");
  write_csv(os, series);
  if (!os.flush()) throw CsvError("write failed for " + path.string());
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

ErrorSeries read_csv(std::istream& is) {
  ErrorSeries series;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  bool schema_seen = false;
  std::size_t columns = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fail = [&](const std::string& what) {
      throw CsvError("line " + std::to_string(lineno) + ": " + what);
    };
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) fail("metadata line without '='");
      const std::string key = line.substr(2, eq - 2);
      const std::string value = line.substr(eq + 1);
      if (key == "schema") {
        if (value != kErrorSeriesSchema) fail("unsupported schema '" + value + "'");
        schema_seen = true;
      } else if (key == "sup_u_norm") {
        series.sup_u_norm = parse_double(value);
      } else {
        series.metadata.emplace_back(key, value);
      }
      continue;
    }
    if (!header_seen) {
      if (!schema_seen) fail("missing schema line");
      if (line == "t,err_l2,err_h1,event,u_norm") {
        series.has_h1 = true;
        columns = 5;
      } else if (line == "t,err_l2,event,u_norm") {
        columns = 4;
      } else {
        fail("unexpected header '" + line + "'");
      }
      header_seen = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != columns) fail("expected " + std::to_string(columns) + " fields");
    try {
      ErrorSample s;
      std::size_t c = 0;
      s.t = parse_double(f[c++]);
      s.err_l2 = parse_double(f[c++]);
      if (series.has_h1) {
        if (!f[c].empty()) s.err_h1 = parse_double(f[c]);
        ++c;
      }
      const std::string& ev = f[c++];
      if (ev == "step") {
        s.event = SampleEvent::Step;
      } else if (ev == "update") {
        s.event = SampleEvent::Update;
      } else {
        fail("unknown event '" + ev + "'");
      }
      s.u_norm = parse_double(f[c++]);
      series.samples.push_back(s);
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }
  if (!header_seen) throw CsvError("no header row");
  if (auto v = series.meta("verdict")) series.verdict = verdict_from_string(*v);
  if (auto b = series.meta("blowup_time")) series.blowup_time = parse_double(*b);
  return series;
}

ErrorSeries read_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw CsvError("cannot open " + path.string());
  return read_csv(is);
}

}  // namespace ddalab::dda

#include "expcli/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>

namespace expcli {

namespace {

using ddalab::dda::format_double;
namespace pt = boost::property_tree;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& path, const std::string& v) {
  try {
    return ddalab::dda::parse_double(trim(v));
  } catch (const std::invalid_argument&) {
    throw ConfigError(path, "expected a number, got '" + v + "'");
  }
}

template <class Int>
Int to_int(const std::string& path, const std::string& v) {
  const std::string s = trim(v);
  Int out{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ConfigError(path, "expected an integer, got '" + v + "'");
  }
  return out;
}

std::vector<double> to_list(const std::string& path, const std::string& v) {
  std::vector<double> out;
  const std::string s = trim(v);
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(path, item));
  return out;
}

std::string from_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_double(v[i]);
  }
  return out;
}

struct Field {
  std::string section;
  std::string key;
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const std::string&, const std::string&)> set;
  // Sections that belong to a single system are only written for it.
  std::optional<SystemKind> only_for;
};

#define DOUBLE_FIELD(sec, name, member, sys)                                      \
  Field {                                                                         \
    sec, name, [](const ExperimentConfig& c) { return format_double(c.member); }, \
        [](ExperimentConfig& c, const std::string& p, const std::string& v) {     \
          c.member = to_double(p, v);                                             \
        },                                                                        \
        sys                                                                       \
  }

#define INT_FIELD(sec, name, member, sys)                                          \
  Field {                                                                          \
    sec, name, [](const ExperimentConfig& c) { return std::to_string(c.member); }, \
        [](ExperimentConfig& c, const std::string& p, const std::string& v) {      \
          c.member = to_int<decltype(c.member)>(p, v);                             \
        },                                                                         \
        sys                                                                        \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    const std::optional<SystemKind> any;
    const std::optional<SystemKind> lorenz = SystemKind::Lorenz;
    const std::optional<SystemKind> nse = SystemKind::Nse2d;
    std::vector<Field> f;
    f.push_back({"experiment", "system",
                 [](const ExperimentConfig& c) { return to_string(c.system); },
                 [](ExperimentConfig&, const std::string&, const std::string&) {
                   // Handled before the other fields; see parse_config.
                 },
                 any});
    f.push_back(INT_FIELD("experiment", "seed_count", seed_count, any));
    f.push_back(INT_FIELD("experiment", "first_seed", first_seed, any));
    f.push_back(INT_FIELD("experiment", "workers", workers, any));
    f.push_back(DOUBLE_FIELD("experiment", "spinup", spinup, any));
    f.push_back(INT_FIELD("experiment", "sample_stride", sample_stride, any));

    f.push_back(DOUBLE_FIELD("lorenz", "sigma", lorenz.sigma, lorenz));
    f.push_back(DOUBLE_FIELD("lorenz", "b", lorenz.b, lorenz));
    f.push_back(DOUBLE_FIELD("lorenz", "r", lorenz.r, lorenz));
    f.push_back({"lorenz", "observe",
                 [](const ExperimentConfig& c) { return c.lorenz.observe; },
                 [](ExperimentConfig& c, const std::string&, const std::string& v) {
                   c.lorenz.observe = trim(v);
                 },
                 lorenz});

    f.push_back(INT_FIELD("nse2d", "n", nse.n, nse));
    f.push_back(DOUBLE_FIELD("nse2d", "length", nse.length, nse));
    f.push_back(DOUBLE_FIELD("nse2d", "nu", nse.nu, nse));
    f.push_back(DOUBLE_FIELD("nse2d", "forcing_norm", nse.forcing_norm, nse));
    f.push_back(DOUBLE_FIELD("nse2d", "forcing_k2_min", nse.forcing_k2_min, nse));
    f.push_back(DOUBLE_FIELD("nse2d", "forcing_k2_max", nse.forcing_k2_max, nse));
    f.push_back(INT_FIELD("nse2d", "forcing_seed", nse.forcing_seed, nse));
    f.push_back(DOUBLE_FIELD("nse2d", "lambda", nse.lambda, nse));
    f.push_back(DOUBLE_FIELD("nse2d", "c", nse.c, nse));
    f.push_back(DOUBLE_FIELD("nse2d", "init_h1", nse.init_h1, nse));
    f.push_back(INT_FIELD("nse2d", "init_max_mode", nse.init_max_mode, nse));

    f.push_back({"integrator", "scheme",
                 [](const ExperimentConfig& c) {
                   return std::string(ddalab::to_string(c.integrator.scheme));
                 },
                 [](ExperimentConfig& c, const std::string& p, const std::string& v) {
                   const std::string s = trim(v);
                   if (s == "RK4") {
                     c.integrator.scheme = ddalab::Scheme::RK4;
                   } else if (s == "IFRK4") {
                     c.integrator.scheme = ddalab::Scheme::IFRK4;
                   } else {
                     throw ConfigError(p, "expected RK4 or IFRK4, got '" + v + "'");
                   }
                 },
                 any});
    f.push_back(DOUBLE_FIELD("integrator", "dt", integrator.dt, any));

    f.push_back({"schedule", "kind",
                 [](const ExperimentConfig& c) -> std::string {
                   switch (c.schedule.kind) {
                     case ScheduleKind::Uniform: return "uniform";
                     case ScheduleKind::RandomGaps: return "random_gaps";
                     case ScheduleKind::Explicit: return "explicit";
                   }
                   return "uniform";
                 },
                 [](ExperimentConfig& c, const std::string& p, const std::string& v) {
                   const std::string s = trim(v);
                   if (s == "uniform") {
                     c.schedule.kind = ScheduleKind::Uniform;
                   } else if (s == "random_gaps") {
                     c.schedule.kind = ScheduleKind::RandomGaps;
                   } else if (s == "explicit") {
                     c.schedule.kind = ScheduleKind::Explicit;
                   } else {
                     throw ConfigError(p, "expected uniform, random_gaps or explicit, got '" + v + "'");
                   }
                 },
                 any});
    f.push_back(DOUBLE_FIELD("schedule", "h", schedule.h, any));
    f.push_back(DOUBLE_FIELD("schedule", "t_end", schedule.t_end, any));
    f.push_back({"schedule", "times",
                 [](const ExperimentConfig& c) { return from_list(c.schedule.times); },
                 [](ExperimentConfig& c, const std::string& p, const std::string& v) {
                   c.schedule.times = to_list(p, v);
                 },
                 any});

    f.push_back({"eta", "kind",
                 [](const ExperimentConfig& c) {
                   return std::string(c.eta.kind == EtaKind::Zero ? "zero" : "random");
                 },
                 [](ExperimentConfig& c, const std::string& p, const std::string& v) {
                   const std::string s = trim(v);
                   if (s == "zero") {
                     c.eta.kind = EtaKind::Zero;
                   } else if (s == "random") {
                     c.eta.kind = EtaKind::Random;
                   } else {
                     throw ConfigError(p, "expected zero or random, got '" + v + "'");
                   }
                 },
                 any});
    f.push_back(DOUBLE_FIELD("eta", "norm", eta.norm, any));
    f.push_back(INT_FIELD("eta", "seed", eta.seed, any));

    f.push_back(DOUBLE_FIELD("verdict", "tol_rel", verdict.tol_rel, any));
    f.push_back(DOUBLE_FIELD("verdict", "blowup_factor", verdict.blowup_factor, any));
    f.push_back(DOUBLE_FIELD("verdict", "dwell_fraction", verdict.dwell_fraction, any));

    f.push_back(DOUBLE_FIELD("threshold", "h_lo", threshold.h_lo, any));
    f.push_back(DOUBLE_FIELD("threshold", "h_hi", threshold.h_hi, any));
    f.push_back(DOUBLE_FIELD("threshold", "resolution", threshold.resolution, any));

    f.push_back({"sweep", "h", [](const ExperimentConfig& c) { return from_list(c.sweep.h); },
                 [](ExperimentConfig& c, const std::string& p, const std::string& v) {
                   c.sweep.h = to_list(p, v);
                 },
                 any});
    f.push_back({"sweep", "lambda",
                 [](const ExperimentConfig& c) { return from_list(c.sweep.lambda); },
                 [](ExperimentConfig& c, const std::string& p, const std::string& v) {
                   c.sweep.lambda = to_list(p, v);
                 },
                 any});
    return f;
  }();
  return table;
}

#undef DOUBLE_FIELD
#undef INT_FIELD

bool applies(const Field& f, SystemKind kind) { return !f.only_for || *f.only_for == kind; }

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field, what);
}

std::string got(double v) { return " (got " + format_double(v) + ")"; }

}  // namespace

std::string to_string(SystemKind k) { return k == SystemKind::Lorenz ? "lorenz" : "nse2d"; }

ExperimentConfig default_config(SystemKind kind) {
  ExperimentConfig c;
  c.system = kind;
  if (kind == SystemKind::Nse2d) {
    c.integrator.scheme = ddalab::Scheme::IFRK4;
    c.integrator.dt = 0.02;
    c.schedule.h = 0.5;
    c.schedule.t_end = 100.0;
    c.seed_count = 3;
    c.threshold.h_lo = 0.5;
    c.threshold.h_hi = 20.0;
  }
  return c;
}

ExperimentConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream is(text);
    pt::ini_parser::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("<config>", std::string("INI syntax error: ") + e.message() +
                                       " at line " + std::to_string(e.line()));
  }

  SystemKind kind = SystemKind::Lorenz;
  if (auto sys = tree.get_optional<std::string>("experiment.system")) {
    const std::string s = trim(*sys);
    if (s == "lorenz") {
      kind = SystemKind::Lorenz;
    } else if (s == "nse2d") {
      kind = SystemKind::Nse2d;
    } else {
      throw ConfigError("experiment.system", "expected lorenz or nse2d, got '" + *sys + "'");
    }
  }
  ExperimentConfig cfg = default_config(kind);

  for (const auto& [section, body] : tree) {
    if (!body.data().empty()) {
      throw ConfigError(section, "key outside any section");
    }
    for (const auto& [key, value] : body) {
      const std::string path = section + "." + key;
      const auto& table = fields();
      const auto it = std::find_if(table.begin(), table.end(), [&](const Field& f) {
        return f.section == section && f.key == key;
      });
      if (it == table.end()) throw ConfigError(path, "unknown key");
      if (!applies(*it, kind)) {
        throw ConfigError(path, "section does not apply to system " + to_string(kind));
      }
      it->set(cfg, path, value.data());
    }
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& f : fields()) {
    if (!applies(f, cfg.system)) continue;
    out.emplace_back(f.section + "." + f.key, f.get(cfg));
  }
  return out;
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  std::string current;
  for (const auto& f : fields()) {
    if (!applies(f, cfg.system)) continue;
    if (f.section != current) {
      if (!current.empty()) os << '\n';
      os << '[' << f.section << "]\n";
      current = f.section;
    }
    os << f.key << " = " << f.get(cfg) << '\n';
  }
  return os.str();
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return config_entries(a) == config_entries(b);
}

void validate(const ExperimentConfig& c) {
  require(c.seed_count >= 1, "experiment.seed_count", "must be >= 1");
  require(c.spinup >= 0.0 && std::isfinite(c.spinup), "experiment.spinup", "must be >= 0" + got(c.spinup));
  require(c.sample_stride >= 0, "experiment.sample_stride", "must be >= 0");

  if (c.system == SystemKind::Lorenz) {
    require(c.lorenz.sigma > 0.0, "lorenz.sigma", "must be > 0" + got(c.lorenz.sigma));
    require(c.lorenz.b > 1.0, "lorenz.b",
            "must be > 1: the attractor bound K has denominator 4(b - 1)" + got(c.lorenz.b));
    require(c.lorenz.r > 0.0, "lorenz.r", "must be > 0" + got(c.lorenz.r));
    const std::string& o = c.lorenz.observe;
    require(!o.empty(), "lorenz.observe", "must name at least one of x, y, z");
    for (std::size_t i = 0; i < o.size(); ++i) {
      require(o[i] == 'x' || o[i] == 'y' || o[i] == 'z', "lorenz.observe",
              "unknown component '" + std::string(1, o[i]) + "' (use x, y, z)");
      require(o.find(o[i]) == i, "lorenz.observe", "component listed twice");
    }
    require(c.integrator.scheme == ddalab::Scheme::RK4, "integrator.scheme",
            "IFRK4 needs a viscous term; use RK4 for lorenz");
  } else {
    const int n = c.nse.n;
    require(n >= 8 && (n & (n - 1)) == 0, "nse2d.n", "must be a power of two >= 8");
    require(c.nse.length > 0.0, "nse2d.length", "must be > 0" + got(c.nse.length));
    require(c.nse.nu > 0.0, "nse2d.nu", "must be > 0" + got(c.nse.nu));
    require(c.nse.forcing_norm >= 0.0, "nse2d.forcing_norm", "must be >= 0");
    require(c.nse.forcing_k2_min > 0.0, "nse2d.forcing_k2_min", "must be > 0");
    require(c.nse.forcing_k2_max >= c.nse.forcing_k2_min, "nse2d.forcing_k2_max",
            "must be >= forcing_k2_min");
    require(c.nse.lambda >= 0.0, "nse2d.lambda", "must be >= 0" + got(c.nse.lambda));
    require(c.nse.c > 0.0, "nse2d.c", "must be > 0" + got(c.nse.c));
    require(c.nse.init_h1 > 0.0, "nse2d.init_h1", "must be > 0");
    require(c.nse.init_max_mode >= 1, "nse2d.init_max_mode", "must be >= 1");
  }

  require(c.integrator.dt > 0.0 && std::isfinite(c.integrator.dt), "integrator.dt",
          "must be > 0" + got(c.integrator.dt));
  require(c.schedule.h > 0.0, "schedule.h", "must be > 0" + got(c.schedule.h));
  require(c.schedule.t_end > 0.0, "schedule.t_end", "must be > 0" + got(c.schedule.t_end));
  if (c.schedule.kind == ScheduleKind::Explicit) {
    const auto& t = c.schedule.times;
    require(t.size() >= 2, "schedule.times", "needs at least two times");
    require(t.front() == 0.0, "schedule.times", "must start at 0 (the end of spin-up)");
    for (std::size_t i = 1; i < t.size(); ++i) {
      require(t[i] > t[i - 1], "schedule.times", "must be strictly increasing");
    }
  }
  require(c.eta.norm >= 0.0, "eta.norm", "must be >= 0" + got(c.eta.norm));
  require(c.verdict.tol_rel > 0.0 && c.verdict.tol_rel < 1.0, "verdict.tol_rel",
          "must lie in (0, 1)" + got(c.verdict.tol_rel));
  require(c.verdict.blowup_factor > 1.0, "verdict.blowup_factor",
          "must be > 1" + got(c.verdict.blowup_factor));
  require(c.verdict.dwell_fraction > 0.0 && c.verdict.dwell_fraction <= 1.0,
          "verdict.dwell_fraction", "must lie in (0, 1]");
  require(c.threshold.h_lo > 0.0, "threshold.h_lo", "must be > 0");
  require(c.threshold.h_hi > c.threshold.h_lo, "threshold.h_hi", "must exceed threshold.h_lo");
  require(c.threshold.resolution >= 0.0, "threshold.resolution", "must be >= 0");
  for (double h : c.sweep.h) require(h > 0.0, "sweep.h", "entries must be > 0" + got(h));
  for (double l : c.sweep.lambda) require(l >= 0.0, "sweep.lambda", "entries must be >= 0" + got(l));
}

}  // namespace expcli

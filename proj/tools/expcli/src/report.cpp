#include "expcli/report.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>

#include "ddalab/lorenz.hpp"
#include "ddalab/nse2d.hpp"
#include "ddalab/nse_bounds.hpp"
#include "ddalab/version.hpp"

namespace expcli {

namespace {

using ddalab::dda::format_double;

double eta_norm2(const ExperimentConfig& cfg) {
  return cfg.eta.kind == EtaKind::Zero ? 0.0 : cfg.eta.norm * cfg.eta.norm;
}

void lorenz_lines(const ExperimentConfig& cfg, BoundReport& r) {
  namespace lz = ddalab::lorenz;
  const lz::Params p{cfg.lorenz.sigma, cfg.lorenz.b, cfg.lorenz.r};
  p.validate();
  const double h = cfg.schedule.h;
  const double e2 = eta_norm2(cfg);
  lz::State eta{std::sqrt(e2), 0.0, 0.0};
  const lz::Bounds b = lz::bounds(p, eta, h);
  const auto& bd = b.boundedness;
  auto add = [&r](std::string n, double v, std::string f) {
    r.lines.push_back({std::move(n), v, std::move(f)});
  };

  add("K", b.K, "b^2 (r + sigma)^2 / (4 (b - 1))");
  add("beta", b.beta, "2 (K^{1/2} - 1)");
  add("t_star", b.t_star, "smallest t > 0 with M(t) = 1");
  add("M'(0)", lz::contraction_M_prime(p, 0.0), "-M(0) + sigma K / (beta + sigma) (e^0 - e^0) = -1");
  for (double frac : {0.25, 0.5, 1.0, 2.0}) {
    add("M(" + format_double(frac) + " t_star)", lz::contraction_M(p, frac * b.t_star),
        "e^{-tau} (1 + sigma K / (beta + sigma) [(e^{(beta+1) tau} - 1) / (beta + 1)"
        " - (1 - e^{-(sigma-1) tau}) / (sigma - 1)])");
  }
  add("h", h, "configured observation interval");
  add("M(h)", lz::contraction_M(p, h), "same closed form at tau = h; < 1 guarantees contraction");
  add("|f|^2", b.forcing_norm2, "b^2 (r + sigma)^2");
  add("|eta|^2", e2, "configured initial-guess norm squared");
  add("R", b.R, "2 (K + |eta|^2), bound on |delta(t0)|^2");
  add("C1", bd.C1, "K e^{-h} + |f|^2 (1 - e^{-h})");
  add("M1", bd.M1, "|eta|^2 + C1 + K + |f|^2");
  add("sup |u|^2 bound", bd.M1 / -std::expm1(-h), "M1 / (1 - e^{-h})");
  add("M2", bd.M2, "C1 + K + |f|^2 (eventual bound, M2 / (1 - e^{-h}))");
  add("M3", bd.M3, "|eta|^2 + 3 K (bound M3 / (1 - e^{-2h}))");
  add("M4", bd.M4,
      "max(K^{1/2} + R^{1/2}, (M1' / (1 - e^{-t_star}))^{1/2}), M1' = M1 at the worst h;"
      " bounds |u| for every h");
}

void nse_lines(const ExperimentConfig& cfg, BoundReport& r) {
  namespace ns = ddalab::nse;
  const double h = cfg.schedule.h;
  const double e2 = eta_norm2(cfg);
  ns::BoundsInput in;
  in.nu = cfg.nse.nu;
  in.length = cfg.nse.length;
  in.forcing_norm = cfg.nse.forcing_norm;
  // lambda = 0 (no observation) still gets the lambda-independent lines.
  const bool observed = cfg.nse.lambda > 0.0;
  in.lambda = observed ? cfg.nse.lambda : 1.0;
  in.c = cfg.nse.c;
  const double K0 = in.forcing_norm * in.forcing_norm /
                    (std::pow(2.0 * std::numbers::pi / in.length, 2) * in.nu * in.nu);
  in.R = std::pow(std::sqrt(K0) + std::sqrt(e2), 2);
  const ns::NseBounds b = ns::bounds(in);
  auto add = [&r](std::string n, double v, std::string f) {
    r.lines.push_back({std::move(n), v, std::move(f)});
  };

  const ns::FourierGrid grid(cfg.nse.n, cfg.nse.length);
  add("lambda1", b.lambda1, "(2 pi / L)^2");
  add("|f|", in.forcing_norm, "configured forcing norm");
  add("K", b.K, "|f|^2 / (lambda1 nu^2)");
  add("c", in.c, "configured Sobolev/Agmon constant");
  add("C1", b.C1, "3 5^{5/3} 2^{-16/3} c^{8/3}");
  add("C2", b.C2, "c^2 2^{5/4}");
  add("C3", b.C3, "3 c^{8/3} 5^{5/3} 2^{-10/3}");
  add("beta", b.beta, "2 C1 nu^{-5/3} lambda1^{-1/3} K^{4/3}");
  add("||eta||^2", e2, "configured initial-guess norm squared");
  add("R", b.in.R, "(K^{1/2} + ||eta||)^2, bound on ||delta(t0)||^2");
  add("L1", b.L1, "R^{1/2} + 2 K^{1/2}");
  add("L2", b.L2, "C2 lambda1^{-1/4} (L1 / nu)^2 + C3 lambda1^{-7/12} (L1 / nu)^{8/3}");
  add("lambda", cfg.nse.lambda, "configured observation cutoff |k|^2 <= lambda");
  add("observed modes", static_cast<double>(ns::observed_mode_count(grid, cfg.nse.lambda)),
      "wavevectors with 0 < |k|^2 <= lambda inside the dealiased band");
  add("lambda one-step", b.lambda_one_step, "c^2 |f|^2 / (lambda1 nu^4)");
  add("lambda min", b.lambda_min, "9 lambda1^{-1/3} ((2 c K^{1/2} + c R^{1/2}) / nu)^{8/3}");
  add("lambda min (eta = 0)", b.lambda_min_eta0, "9 lambda1^{-5/3} (3 c |f| / nu^2)^{8/3}");
  add("h", h, "configured observation interval");
  if (observed) {
    add("g(0)", ns::g_eval(b, 0.0),
        "C2 (lambda / (nu^4 lambda1))^{1/4} L1^2 + C3 (1 / (nu^5 lambda1))^{1/3} L1^{8/3}");
    add("M'(0)", b.M_prime0, "-nu lambda + g(0)");
    add("t_star", b.t_star, "root of M(t) = 1 when M'(0) < 0, else 0");
    add("M(h)", ns::contraction_M_nse(b, h),
        "e^{-nu lambda h} (1 + int_0^h g(s) e^{nu lambda s} ds)");
    add("m(h)", ns::majorant_m(b, h),
        "(1 - L2 lambda^{-3/4}) e^{-nu lambda h} + L2 lambda^{-3/4} e^{(7 beta / 3) h}");
    try {
      add("lambda for t_star = h", ns::lambda_for_tstar(in, h),
          "smallest lambda found with m'(h) < 0");
    } catch (const ns::LambdaSearchError& e) {
      r.unavailable.emplace_back("lambda for t_star = h", e.what());
    }
  } else {
    r.unavailable.emplace_back("M(h), t_star", "lambda = 0 observes nothing");
  }
  const double m5 = ns::boundedness_M5(e2, b.K);
  add("M5", m5, "||eta||^2 + 3 K");
  add("sup ||u||^2 bound", m5 / -std::expm1(-in.nu * b.lambda1 * h),
      "M5 / (1 - e^{-nu lambda1 h})");
}

}  // namespace

const BoundLine* BoundReport::find(const std::string& name) const {
  for (const auto& l : lines) {
    if (l.name == name) return &l;
  }
  return nullptr;
}

BoundReport bound_report(const ExperimentConfig& cfg) {
  validate(cfg);
  BoundReport r;
  r.system = cfg.system;
  if (cfg.system == SystemKind::Lorenz) {
    lorenz_lines(cfg, r);
  } else {
    nse_lines(cfg, r);
  }
  return r;
}

void print_report(std::ostream& os, const BoundReport& r) {
  std::size_t width = 0;
  for (const auto& l : r.lines) width = std::max(width, l.name.size());
  os << "bounds for " << to_string(r.system) << '\n';
  for (const auto& l : r.lines) {
    os << "  " << std::left << std::setw(static_cast<int>(width)) << l.name << " = "
       << std::setw(24) << format_double(l.value) << "  [" << l.formula << "]\n";
  }
  for (const auto& [name, why] : r.unavailable) {
    os << "  " << std::left << std::setw(static_cast<int>(width)) << name
       << " = unavailable (" << why << ")\n";
  }
}

void write_metadata_header(std::ostream& os, const ExperimentConfig& cfg) {
  os << "# ddalab_version=" << ddalab::kVersion << '\n';
  for (const auto& [k, v] : config_entries(cfg)) os << "# config." << k << '=' << v << '\n';
}

void write_report_csv(std::ostream& os, const BoundReport& r, const ExperimentConfig& cfg) {
  os << "# schema=ddalab.bounds/1\n";
  write_metadata_header(os, cfg);
  os << "quantity,value,formula\n";
  auto quote = [](const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
      if (ch == '"') out += '"';
      out += ch;
    }
    return out + "\"";
  };
  for (const auto& l : r.lines) {
    os << quote(l.name) << ',' << format_double(l.value) << ',' << quote(l.formula) << '\n';
  }
  for (const auto& [name, why] : r.unavailable) {
    os << quote(name) << ",," << quote("unavailable: " + why) << '\n';
  }
}

}  // namespace expcli

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "expcli/config.hpp"

namespace expcli {

/// One evaluated quantity with the formula that produced it.
struct BoundLine {
  std::string name;
  double value;
  std::string formula;
};

struct BoundReport {
  SystemKind system;
  std::vector<BoundLine> lines;
  /// Quantities that could not be evaluated, with the reason.
  std::vector<std::pair<std::string, std::string>> unavailable;

  const BoundLine* find(const std::string& name) const;
};

/// Every analytic quantity for the configured system. Interval-dependent
/// entries use schedule.h; NSE entries use nse2d.lambda and nse2d.c.
BoundReport bound_report(const ExperimentConfig& cfg);

/// Aligned table: name, value, formula.
void print_report(std::ostream& os, const BoundReport& r);
/// quantity,value,formula rows under the shared metadata header.
void write_report_csv(std::ostream& os, const BoundReport& r, const ExperimentConfig& cfg);

/// "# key=value" lines carrying the code version and the full configuration.
void write_metadata_header(std::ostream& os, const ExperimentConfig& cfg);

}  // namespace expcli

#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace rescomp {

/// Named scalar or curve results plus the estimator metadata (parameters,
/// seeds, descriptors) needed to reproduce them.
struct MeasureReport {
  std::string name;
  std::map<std::string, double> scalars;
  std::map<std::string, std::vector<std::pair<double, double>>> curves;
  std::map<std::string, std::string> metadata;
  std::vector<std::string> flags;

  bool has_flag(const std::string& f) const;
};

std::string measure_report_to_json(const MeasureReport& r);

/// Two-column CSV (x,y) for a single curve.
void write_curve_csv(const std::vector<std::pair<double, double>>& curve,
                     const std::string& x_name, const std::string& y_name,
                     const std::string& path);

}  // namespace rescomp

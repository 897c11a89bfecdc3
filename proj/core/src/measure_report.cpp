#include "rescomp/measure_report.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "rescomp/time_series.hpp"

namespace rescomp {

bool MeasureReport::has_flag(const std::string& f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

std::string measure_report_to_json(const MeasureReport& r) {
  nlohmann::json j;
  j["name"] = r.name;
  j["scalars"] = r.scalars;
  nlohmann::json curves = nlohmann::json::object();
  for (const auto& [key, curve] : r.curves) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& [x, y] : curve) pts.push_back({x, y});
    curves[key] = pts;
  }
  j["curves"] = curves;
  j["metadata"] = r.metadata;
  j["flags"] = r.flags;
  return j.dump(2);
}

void write_curve_csv(const std::vector<std::pair<double, double>>& curve,
                     const std::string& x_name, const std::string& y_name,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << x_name << ',' << y_name << '\n';
  for (const auto& [x, y] : curve)
    out << format_double(x) << ',' << format_double(y) << '\n';
}

}  // namespace rescomp

#include "rescomp/time_series.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rescomp {

TimeSeries::TimeSeries(std::vector<std::string> names, Eigen::MatrixXd data)
    : channels(std::move(names)), values(std::move(data)) {
  if (static_cast<Eigen::Index>(channels.size()) != values.cols())
    throw std::invalid_argument("TimeSeries: channel count does not match column count");
}

TimeSeries TimeSeries::scalar(Eigen::VectorXd data, std::string name) {
  TimeSeries ts;
  ts.channels = {std::move(name)};
  ts.values = std::move(data);
  return ts;
}

Eigen::VectorXd TimeSeries::as_vector() const {
  if (dim() != 1) throw std::invalid_argument("TimeSeries: expected a scalar series");
  return values.col(0);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const TimeSeries& ts, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (std::size_t c = 0; c < ts.channels.size(); ++c) {
    if (c) out << ',';
    out << ts.channels[c];
  }
  out << '\n';
  for (Eigen::Index t = 0; t < ts.length(); ++t) {
    for (Eigen::Index c = 0; c < ts.dim(); ++c) {
      if (c) out << ',';
      out << format_double(ts.values(t, c));
    }
    out << '\n';
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

TimeSeries read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  TimeSeries ts;
  ts.channels = split_csv_line(line);
  const std::size_t dim = ts.channels.size();
  std::vector<double> data;
  Eigen::Index rows = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != dim)
      throw std::runtime_error(path + ": row " + std::to_string(rows + 2) +
                               " has " + std::to_string(fields.size()) +
                               " fields, expected " + std::to_string(dim));
    for (const auto& f : fields) data.push_back(std::stod(f));
    ++rows;
  }
  ts.values.resize(rows, static_cast<Eigen::Index>(dim));
  for (Eigen::Index t = 0; t < rows; ++t)
    for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(dim); ++c)
      ts.values(t, c) = data[static_cast<std::size_t>(t) * dim + static_cast<std::size_t>(c)];
  return ts;
}

}  // namespace rescomp

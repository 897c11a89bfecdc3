#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace rescomp {

/// Uniformly sampled scalar or vector sequence with channel labels.
/// Row t holds the sample at step t; this is the I/O currency of the
/// whole toolkit (CSV on disk, one row per step, header = channel names).
struct TimeSeries {
  std::vector<std::string> channels;
  Eigen::MatrixXd values;  // length x dim

  TimeSeries() = default;
  TimeSeries(std::vector<std::string> names, Eigen::MatrixXd data);

  /// Wrap a single column as a scalar series.
  static TimeSeries scalar(Eigen::VectorXd data, std::string name = "u");

  Eigen::Index length() const { return values.rows(); }
  Eigen::Index dim() const { return values.cols(); }

  /// Column view of a single channel.
  Eigen::VectorXd channel(Eigen::Index c) const { return values.col(c); }

  /// Scalar convenience accessor; requires dim() == 1.
  Eigen::VectorXd as_vector() const;
};

/// CSV I/O: header with channel names, doubles in round-trip precision.
void write_csv(const TimeSeries& ts, const std::string& path);
TimeSeries read_csv(const std::string& path);

/// Round-trip formatting of a double (shortest %.17g form).
std::string format_double(double v);

}  // namespace rescomp

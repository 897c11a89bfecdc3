#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rescomp/reservoir.hpp"
#include "rescomp/time_series.hpp"

namespace rescomp::measures {

struct RankReport {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  Eigen::Index rank = 0;
  Eigen::VectorXd singular_values;
  double tolerance = 0.0;
  /// Only set by generalization_rank: implied VC interval [rank, rank+1].
  bool has_vc_interval = false;
};

/// Numerical rank of the n x m matrix whose columns are the states x(t0)
/// reached from the zero state under each input stream. Tolerance is
/// max(n,m) * sigma_max * tol_factor.
RankReport separation_rank(const Reservoir& r, const std::vector<TimeSeries>& streams,
                           Eigen::Index t0, double tol_factor = 1e-12);

/// Same rank computation over streams sampled from the input universe;
/// the rank r approximates the VC dimension within [r, r+1].
RankReport generalization_rank(const Reservoir& r, const std::vector<TimeSeries>& universe,
                               Eigen::Index t0, double tol_factor = 1e-12);

/// Normalized separation minus normalized generalization.
double quality_score(const RankReport& sep, const RankReport& gen);

}  // namespace rescomp::measures

#include "rescomp/measures/ranks.hpp"

#include <stdexcept>

namespace rescomp::measures {

namespace {

RankReport state_matrix_rank(const Reservoir& r, const std::vector<TimeSeries>& streams,
                             Eigen::Index t0, double tol_factor) {
  if (streams.empty()) throw std::invalid_argument("rank: need at least one stream");
  if (t0 < 1) throw std::invalid_argument("rank: t0 must be >= 1");
  const Eigen::Index len = streams.front().length();
  for (const auto& s : streams) {
    if (s.length() != len) throw std::invalid_argument("rank: streams of unequal length");
    if (s.length() < t0) throw std::invalid_argument("rank: stream shorter than t0");
  }
  const Eigen::Index n = r.params.n_units;
  const Eigen::Index m = static_cast<Eigen::Index>(streams.size());
  Eigen::MatrixXd state_matrix(n, m);
  for (Eigen::Index c = 0; c < m; ++c) {
    StateTrajectory traj = run(r, streams[static_cast<std::size_t>(c)], /*washout=*/0);
    state_matrix.col(c) = traj.states.row(t0 - 1).transpose();
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(state_matrix);
  RankReport rep;
  rep.rows = n;
  rep.cols = m;
  rep.singular_values = svd.singularValues();
  const double smax = rep.singular_values.size() ? rep.singular_values(0) : 0.0;
  rep.tolerance = static_cast<double>(std::max(n, m)) * smax * tol_factor;
  rep.rank = 0;
  for (Eigen::Index i = 0; i < rep.singular_values.size(); ++i)
    if (rep.singular_values(i) > rep.tolerance) ++rep.rank;
  return rep;
}

}  // namespace

RankReport separation_rank(const Reservoir& r, const std::vector<TimeSeries>& streams,
                           Eigen::Index t0, double tol_factor) {
  return state_matrix_rank(r, streams, t0, tol_factor);
}

RankReport generalization_rank(const Reservoir& r, const std::vector<TimeSeries>& universe,
                               Eigen::Index t0, double tol_factor) {
  RankReport rep = state_matrix_rank(r, universe, t0, tol_factor);
  rep.has_vc_interval = true;
  return rep;
}

double quality_score(const RankReport& sep, const RankReport& gen) {
  if (sep.cols < 1 || gen.cols < 1)
    throw std::invalid_argument("quality_score: empty rank reports");
  return static_cast<double>(sep.rank) / static_cast<double>(sep.cols) -
         static_cast<double>(gen.rank) / static_cast<double>(gen.cols);
}

}  // namespace rescomp::measures

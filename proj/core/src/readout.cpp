#include "rescomp/readout.hpp"

#include <stdexcept>

#include "rescomp/ridge.hpp"

namespace rescomp {

namespace {

Eigen::MatrixXd feature_matrix(const StateTrajectory& traj, bool uses_input,
                               const TimeSeries* inputs, Eigen::Index from) {
  const Eigen::Index t_len = traj.states.rows();
  const Eigen::Index n = traj.states.cols();
  Eigen::Index cols = n + 1;
  if (uses_input) {
    if (!inputs) throw std::invalid_argument("readout: uses_input set but no inputs given");
    if (inputs->length() != t_len)
      throw std::invalid_argument("readout: input length does not match trajectory");
    cols += inputs->dim();
  }
  Eigen::MatrixXd phi(t_len - from, cols);
  phi.block(0, 0, t_len - from, n) = traj.states.bottomRows(t_len - from);
  phi.col(n).setOnes();
  if (uses_input)
    phi.rightCols(inputs->dim()) = inputs->values.bottomRows(t_len - from);
  return phi;
}

}  // namespace

Readout train_readout(const StateTrajectory& traj, const TimeSeries& targets,
                      double ridge_lambda, bool uses_input, const TimeSeries* inputs) {
  if (ridge_lambda < 0.0) throw std::invalid_argument("train_readout: lambda must be >= 0");
  if (targets.length() != traj.states.rows())
    throw std::invalid_argument("train_readout: target length does not match trajectory");

  const Eigen::Index from = traj.washout;
  Eigen::MatrixXd phi = feature_matrix(traj, uses_input, inputs, from);
  Eigen::MatrixXd y = targets.values.bottomRows(targets.length() - from);

  RidgeSolver solver(phi);
  Readout ro;
  ro.w_out = solver.solve(y, ridge_lambda).transpose();
  ro.ridge_lambda = ridge_lambda;
  ro.uses_input = uses_input;
  ro.n_units = traj.states.cols();
  ro.input_dim = uses_input ? inputs->dim() : 0;
  ro.rank_deficient = ridge_lambda == 0.0 && solver.rank_deficient();
  return ro;
}

TimeSeries predict(const Readout& ro, const StateTrajectory& traj,
                   const TimeSeries* inputs) {
  if (traj.states.cols() != ro.n_units)
    throw std::invalid_argument("predict: trajectory width does not match readout layout");
  if (ro.uses_input) {
    if (!inputs) throw std::invalid_argument("predict: readout uses inputs but none given");
    if (inputs->dim() != ro.input_dim || inputs->length() != traj.states.rows())
      throw std::invalid_argument("predict: input layout does not match readout");
  }
  Eigen::MatrixXd phi = feature_matrix(traj, ro.uses_input, inputs, 0);
  if (phi.cols() != ro.w_out.cols())
    throw std::invalid_argument("predict: feature layout does not match readout");
  Eigen::MatrixXd out = phi * ro.w_out.transpose();
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(out.cols()));
  for (Eigen::Index c = 0; c < out.cols(); ++c) names.push_back("out_" + std::to_string(c));
  return TimeSeries(std::move(names), std::move(out));
}

}  // namespace rescomp

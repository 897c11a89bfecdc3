#pragma once

#include <Eigen/Dense>

#include "rescomp/reservoir.hpp"
#include "rescomp/time_series.hpp"

namespace rescomp {

/// Trained linear readout. Feature layout per step is [state; 1; input?],
/// so w_out has n_units + 1 (+ input_dim) columns.
struct Readout {
  Eigen::MatrixXd w_out;  // output_dim x n_features
  double ridge_lambda = 0.0;
  bool uses_input = false;
  Eigen::Index n_units = 0;
  Eigen::Index input_dim = 0;
  /// Set when lambda = 0 met a rank-deficient design (minimum-norm solution).
  bool rank_deficient = false;
};

/// Fit w_out = argmin sum ||y - w phi||^2 + lambda ||w||^2 over the
/// post-washout rows, solved by SVD. lambda = 0 gives the least-squares
/// (minimum-norm) solution.
Readout train_readout(const StateTrajectory& traj, const TimeSeries& targets,
                      double ridge_lambda, bool uses_input = false,
                      const TimeSeries* inputs = nullptr);

/// Apply the readout to every row of the trajectory (washout included;
/// consumers skip it).
TimeSeries predict(const Readout& ro, const StateTrajectory& traj,
                   const TimeSeries* inputs = nullptr);

}  // namespace rescomp

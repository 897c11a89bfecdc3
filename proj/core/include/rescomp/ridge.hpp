#pragma once

#include <Eigen/Dense>

namespace rescomp {

/// Regularized least squares min ||Phi w - y||^2 + lambda ||w||^2 via a
/// single SVD of Phi, reusable across many targets (memory-capacity and
/// capacity spectra retrain one readout per target on the same states).
/// With lambda = 0 the solution is the pseudo-inverse (minimum-norm) one.
class RidgeSolver {
 public:
  explicit RidgeSolver(const Eigen::MatrixXd& phi);

  Eigen::VectorXd solve(const Eigen::VectorXd& y, double lambda) const;
  Eigen::MatrixXd solve(const Eigen::MatrixXd& ys, double lambda) const;

  /// Numerical rank of the design matrix (singular-value cutoff).
  Eigen::Index rank() const { return rank_; }
  bool rank_deficient() const { return rank_ < sv_.size(); }

  const Eigen::VectorXd& singular_values() const { return sv_; }

 private:
  Eigen::MatrixXd u_;   // rows x r
  Eigen::MatrixXd v_;   // cols x r
  Eigen::VectorXd sv_;  // r
  Eigen::Index rank_ = 0;
};

}  // namespace rescomp

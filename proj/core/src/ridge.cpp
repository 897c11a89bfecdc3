#include "rescomp/ridge.hpp"

#include <stdexcept>

namespace rescomp {

RidgeSolver::RidgeSolver(const Eigen::MatrixXd& phi) {
  if (phi.rows() == 0 || phi.cols() == 0)
    throw std::invalid_argument("RidgeSolver: empty design matrix");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(phi, Eigen::ComputeThinU | Eigen::ComputeThinV);
  u_ = svd.matrixU();
  v_ = svd.matrixV();
  sv_ = svd.singularValues();
  const double tol = std::max(phi.rows(), phi.cols()) * sv_(0) *
                     Eigen::NumTraits<double>::epsilon();
  rank_ = 0;
  for (Eigen::Index i = 0; i < sv_.size(); ++i)
    if (sv_(i) > tol) ++rank_;
}

Eigen::VectorXd RidgeSolver::solve(const Eigen::VectorXd& y, double lambda) const {
  if (y.size() != u_.rows())
    throw std::invalid_argument("RidgeSolver: target length does not match design rows");
  Eigen::VectorXd uty = u_.transpose() * y;
  Eigen::VectorXd scaled(sv_.size());
  if (lambda > 0.0) {
    scaled = sv_.array() / (sv_.array().square() + lambda);
  } else {
    // pseudo-inverse: zero out directions below the rank cutoff
    const double tol = std::max(u_.rows(), v_.rows()) * sv_(0) *
                       Eigen::NumTraits<double>::epsilon();
    for (Eigen::Index i = 0; i < sv_.size(); ++i)
      scaled(i) = sv_(i) > tol ? 1.0 / sv_(i) : 0.0;
  }
  return v_ * (scaled.asDiagonal() * uty);
}

Eigen::MatrixXd RidgeSolver::solve(const Eigen::MatrixXd& ys, double lambda) const {
  Eigen::MatrixXd w(v_.rows(), ys.cols());
  for (Eigen::Index c = 0; c < ys.cols(); ++c) w.col(c) = solve(Eigen::VectorXd(ys.col(c)), lambda);
  return w;
}

}  // namespace rescomp

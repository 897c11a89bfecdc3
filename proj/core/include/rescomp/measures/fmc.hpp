#pragma once

#include <Eigen/Dense>

#include "rescomp/measure_report.hpp"
#include "rescomp/reservoir.hpp"

namespace rescomp::measures {

struct FmcReport {
  Eigen::VectorXd j;  // J(k) for k = 0..k_max
  double noise_variance = 0.0;
  double covariance_condition = 0.0;

  MeasureReport to_measure_report() const;
};

/// Fisher memory curve of a linear noisy reservoir with a scalar input
/// channel: J(k) = (W^k w_in)^T C^{-1} (W^k w_in) where C solves
/// C = W C W^T + eps I (fixed-point iteration to 1e-12). Requires a
/// linear reservoir with spectral radius < 1.
FmcReport fisher_memory_curve(const Reservoir& r, double noise_variance, int k_max);

}  // namespace rescomp::measures

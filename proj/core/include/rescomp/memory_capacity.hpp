#pragma once

#include "rescomp/measure_report.hpp"
#include "rescomp/reservoir.hpp"
#include "rescomp/time_series.hpp"

namespace rescomp {

struct MemoryCapacityOptions {
  int k_max = 40;
  double ridge_lambda = 1e-6;
  Eigen::Index washout = 100;
};

/// Short-term memory capacity: for each delay k train a readout on
/// [input; state] features to reconstruct the input k steps back, and
/// score it by the squared correlation coefficient on a held-out half.
/// MC_k is clamped to [0,1] (0 on a zero-variance output); MC = sum MC_k.
/// The input should be i.i.d. (caller's responsibility; the report
/// records the input descriptor).
MeasureReport memory_capacity(const Reservoir& r, const TimeSeries& input,
                              const MemoryCapacityOptions& opt = {});

/// Squared Pearson correlation, 0 when either variance vanishes.
double squared_correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace rescomp

#pragma once

#include <Eigen/Dense>

#include "rescomp/measure_report.hpp"
#include "rescomp/reservoir.hpp"
#include "rescomp/time_series.hpp"

namespace rescomp::measures {

enum class Regime { Stable, Critical, Unstable };

std::string to_string(Regime r);

struct CriticalityOptions {
  double perturbation = 1e-8;
  Eigen::Index horizon = 1000;
  int trials = 1;
  Eigen::Index warmup = 100;   // steps before the perturbation is injected
  double regime_tolerance = 0.01;
};

struct CriticalityReport {
  double lambda = 0.0;  // natural-log units per step; -inf on underflow
  double perturbation = 0.0;
  Regime regime = Regime::Stable;
  double regime_tolerance = 0.01;
  bool underflow = false;

  MeasureReport to_measure_report() const;
};

/// Perturbation-based largest-exponent estimate: duplicate the state,
/// nudge one coordinate (rotating over coordinates across trials), drive
/// both copies with identical input, and average the per-step log growth
/// of the renormalized difference.
CriticalityReport criticality_estimate(const Reservoir& r, const TimeSeries& input,
                                       const CriticalityOptions& opt = {});

}  // namespace rescomp::measures

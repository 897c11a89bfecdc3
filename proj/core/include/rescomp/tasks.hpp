#pragma once

#include <cstdint>
#include <utility>

#include "rescomp/time_series.hpp"

namespace rescomp::tasks {

struct MackeyGlassParams {
  int tau = 17;
  double a = 0.2;
  double b = 0.1;
  double dt = 1.0;
  int subsample = 1;
  int discard = 1000;
};

/// Delay-differential benchmark series, fourth-order fixed-step integration
/// of dx/dt = a x(t-tau) / (1 + x(t-tau)^10) - b x(t). History starts at a
/// constant 1.2 plus a small seeded jitter; the leading transient is
/// discarded.
TimeSeries gen_mackey_glass(Eigen::Index length, const MackeyGlassParams& p,
                            std::uint64_t seed);

struct CoupledMapsResult {
  TimeSeries driver;    // X
  TimeSeries response;  // Y
  bool clamped = false;
};

/// Unidirectionally coupled maps on [0,1]:
///   x' = g(x),  y' = (1-e) g(y) + e g(x),
///   g(z) = omega z + (1-omega) 4 z (1-z).
CoupledMapsResult gen_coupled_maps(Eigen::Index length, double coupling, double omega,
                                   std::uint64_t seed);

TimeSeries gen_iid_uniform(Eigen::Index length, int dim, double lo, double hi,
                           std::uint64_t seed);

struct PatternDetectionResult {
  TimeSeries input;
  TimeSeries target;  // 1.0 on the final symbol of the distinguished pattern
};

/// Stream of concatenated randomly chosen fixed patterns with additive
/// Gaussian noise; the target marks completions of pattern 0.
PatternDetectionResult gen_pattern_detection(Eigen::Index length, int pattern_length,
                                             int n_patterns, double noise,
                                             std::uint64_t seed);

}  // namespace rescomp::tasks

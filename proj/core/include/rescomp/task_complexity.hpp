#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rescomp/info/estimators.hpp"
#include "rescomp/time_series.hpp"

namespace rescomp::taskc {

struct OutputMemoryProfile {
  std::vector<double> a_y;  // A_Y(k) for k = 1..k_max, bits
  int k_star = 1;
  bool plateau_found = true;
};

struct InputContributionProfile {
  std::vector<double> te;  // T(k*, l) for l = 1..l_max, bits
  int l_star = 1;
  double te_at_star = 0.0;
  bool plateau_found = true;
};

struct TaskComplexityOptions {
  int k_max = 8;
  int l_max = 8;
  double epsilon = 0.01;  // plateau threshold, bits
  int bins = 8;           // discretization for continuous channels
};

struct TaskComplexityReport {
  OutputMemoryProfile output_memory;
  InputContributionProfile input_contribution;
  std::optional<double> normalized_ais;  // A_Y(k*) / H(Y^k*;Y')
  int bins = 0;
  std::int64_t samples = 0;

  std::string to_json() const;
};

/// A_Y(k) curve and the smallest history k* past which one more step of
/// output history gains at most epsilon bits.
OutputMemoryProfile output_memory_profile(const info::SymbolSeries& y, int k_max,
                                          double epsilon);

/// T_{X->Y}(k*, l) curve and the analogous input-history plateau l*.
InputContributionProfile input_contribution_profile(const info::SymbolSeries& x,
                                                    const info::SymbolSeries& y,
                                                    int k_star, int l_max, double epsilon);

/// Full report over an (input, desired output) pair; continuous channels
/// pass through equal-width discretization first.
TaskComplexityReport task_complexity(const TimeSeries& input, const TimeSeries& output,
                                     const TaskComplexityOptions& opt = {});

}  // namespace rescomp::taskc

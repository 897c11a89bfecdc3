#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "rescomp/reservoir.hpp"
#include "rescomp/time_series.hpp"

namespace rescomp::tea {

/// Leaky reservoir whose per-unit decay a_i = 2 / (1 + m_i) is driven by
/// an integer memory length m_i >= 1. The identity holds exactly after
/// every operation.
struct AdaptiveReservoir {
  Eigen::MatrixXd w;       // N x N recurrent weights
  Eigen::VectorXd w_in;    // N, scalar input channel
  Eigen::VectorXi m;       // memory lengths, >= 1
  Eigen::VectorXd a;       // decay factors, 2 / (1 + m)
  std::vector<bool> frozen;

  Eigen::Index size() const { return w.rows(); }
  void set_memory(Eigen::Index unit, int memory);
};

/// Wrap a built reservoir (scalar input) with m_i = 1 everywhere.
AdaptiveReservoir make_adaptive(const Reservoir& r);

/// x' = diag(a) W y + (I - diag(a)) y + w_in u;  y' = tanh(x').
struct AdaptiveStepResult {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
};
AdaptiveStepResult adaptive_step(const AdaptiveReservoir& r, const Eigen::VectorXd& y,
                                 double u);

struct AdaptationConfig {
  double epsilon = 0.01;        // TE improvement threshold, bits
  Eigen::Index epoch_length = 1000;
  int max_epochs = 50;
  int k = 1;                    // target history (fixed by the selection rule)
  int bins = 8;                 // equal-width bins for per-unit TE
  int stabilization_window = 3; // epochs without change before a unit freezes
  int l_max = 10;
};

struct HistorySelection {
  int l_hat = 1;
  std::vector<double> te_curve;  // T(1,l) for l = 1..l_max
  bool plateau_found = true;
};

/// Smallest source history l where the input->target transfer entropy
/// stops gaining more than epsilon per extra step of history.
HistorySelection select_input_history(const TimeSeries& input, const TimeSeries& target,
                                      double epsilon, int l_max, int bins = 8);

/// Per-unit epoch records: the unit's activation x_i and output y_i series.
struct EpochRecord {
  Eigen::MatrixXd x;  // epoch_length x N
  Eigen::MatrixXd y;  // epoch_length x N
};

/// One adaptation decision per unit: te > prev + eps grows m_i, te < prev
/// - eps shrinks it (floor 1), otherwise unchanged. Frozen units are
/// skipped. Returns this epoch's te values; `changed` reports per-unit
/// whether m_i moved.
std::vector<double> adapt_epoch(AdaptiveReservoir& r, const EpochRecord& records,
                                const std::vector<double>& previous_te, int l_hat,
                                double epsilon, int bins,
                                std::vector<bool>* changed = nullptr,
                                Eigen::Index estimate_from = 0);

struct AdaptationTraceRow {
  int epoch;
  int unit;
  double te_bits;
  int m;
  bool frozen;
};

struct PretrainReport {
  int l_hat = 1;
  int epochs_run = 0;
  bool timed_out = false;
  std::vector<AdaptationTraceRow> trace;
};

/// Pre-training: pick l_hat once, then run adaptation epochs until every
/// unit's memory length has been stable for the configured window (or the
/// epoch budget runs out, which sets the timeout flag). The reservoir's
/// decay factors are frozen afterwards.
PretrainReport pretrain(AdaptiveReservoir& r, const TimeSeries& input,
                        const TimeSeries& target, const AdaptationConfig& cfg);

/// Drive the adaptive reservoir from y(0) = 0 and record tanh outputs.
TimeSeries drive_adaptive(const AdaptiveReservoir& r, const TimeSeries& input);

}  // namespace rescomp::tea

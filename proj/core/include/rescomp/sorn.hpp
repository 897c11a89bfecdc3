#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "rescomp/time_series.hpp"

namespace rescomp::sorn {

struct SornParams {
  int n_excitatory = 100;
  int n_inhibitory = 20;  // 0.2 * N^E by convention
  double eta_stdp = 0.001;
  double eta_ip = 0.001;
  double target_rate = 0.1;      // H_IP, in (0,1)
  double te_max = 0.5;           // excitatory thresholds drawn from (0, te_max]
  double ti_max = 1.0;           // inhibitory thresholds drawn from (0, ti_max]
  double lambda_ee = 10.0;       // expected incoming EE connections per unit
  std::uint64_t seed = 0;
  /// The inhibitory update y(t+1) = Theta(W^IE x - T^I) uses x(t) as
  /// written; setting this uses the freshly computed x(t+1) instead.
  bool inhibitory_uses_new_x = false;

  void validate() const;
};

/// Binary network state plus the plastic weights. W^EE is sparse with a
/// fixed connectivity mask (plasticity never creates synapses), zero
/// diagonal, and unit row sums after each normalization.
struct SornState {
  Eigen::VectorXd x;       // excitatory activity, {0,1}^NE
  Eigen::VectorXd x_prev;  // x one step back, for STDP
  Eigen::VectorXd y;       // inhibitory activity, {0,1}^NI
  Eigen::MatrixXd w_ee;    // NE x NE, nonnegative, zero diagonal
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> ee_mask;
  Eigen::MatrixXd w_ei;    // NE x NI
  Eigen::MatrixXd w_ie;    // NI x NE
  Eigen::VectorXd t_e;     // excitatory thresholds
  Eigen::VectorXd t_i;     // inhibitory thresholds
  SornParams params;
  bool sn_zero_row_flag = false;
};

SornState sorn_init(const SornParams& params);

/// One deterministic update with external drive v^U (length NE):
/// R = W^EE x - W^EI y - T^E, x' = Theta(R + v^U), y' = Theta(W^IE x - T^I),
/// Theta(0) = 0.
void sorn_step(SornState& s, const Eigen::VectorXd& drive);

/// STDP on existing EE connections:
/// dW_ij = eta (x_i(t) x_j(t-1) - x_i(t-1) x_j(t)), clipped below at 0.
void stdp_update(SornState& s);

/// Row-normalize W^EE to unit incoming sums; zero rows are left unchanged
/// and flagged.
void synaptic_normalization(SornState& s);

/// Intrinsic plasticity: T^E += eta_ip (x - H_IP), unclipped.
void ip_update(SornState& s);

/// Letter-counting benchmark: two words over disjoint 3-letter alphabets,
/// the middle letter repeated n times (total length n+2).
struct CountingTask {
  int n = 1;
  static constexpr int kAlphabet = 6;  // {a,b,c} + {d,e,f} as 0..5

  std::vector<int> word(int which) const;
  int word_length() const { return n + 2; }
  /// Best possible prediction accuracy: everything but the word-initial
  /// letter is deterministic, the initial letter is a fair coin.
  double max_accuracy() const;
};

struct CountingSequence {
  std::vector<int> symbols;  // concatenated words
  TimeSeries one_hot;        // length x 6
};

CountingSequence counting_task_generate(const CountingTask& task, int n_words,
                                        std::uint64_t seed);

struct PlasticityFlags {
  bool stdp = true;
  bool sn = true;
  bool ip = true;
};

struct SornPhases {
  Eigen::Index plastic_steps = 50000;
  Eigen::Index readout_steps = 5000;
  Eigen::Index test_steps = 5000;
};

struct SornEvalReport {
  double accuracy = 0.0;
  double normalized_performance = 0.0;
  double max_achievable = 1.0;
  bool all_silent = false;
  /// Excitatory activity statistics collected over the plastic phase tail.
  double mean_rate = 0.0;
  double rate_std = 0.0;
  double mean_pairwise_correlation = 0.0;
};

/// Three-phase protocol: plastic driving (rules in the order
/// step -> STDP -> SN -> IP), frozen readout training on excitatory states
/// (next-symbol one-vs-all ridge regression, argmax decoding), frozen test.
SornEvalReport sorn_train_and_eval(const SornParams& params, const CountingTask& task,
                                   const PlasticityFlags& flags, const SornPhases& phases,
                                   double ridge_lambda = 1e-4,
                                   Eigen::Index stats_window = 10000);

/// Mean rate / rate spread / mean pairwise correlation of a binary raster
/// (rows = steps, cols = units). Zero-variance units are skipped in the
/// correlation average.
struct ActivityStats {
  double mean_rate = 0.0;
  double rate_std = 0.0;
  double mean_pairwise_correlation = 0.0;
};

ActivityStats activity_statistics(const Eigen::MatrixXd& raster);

/// Symbol -> drive mapping: each symbol excites a dedicated subset of
/// units (size NE/10, disjoint while units last, seeded permutation).
Eigen::MatrixXd make_input_map(int n_excitatory, int alphabet, std::uint64_t seed);

}  // namespace rescomp::sorn

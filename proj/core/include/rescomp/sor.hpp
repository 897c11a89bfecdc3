#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "rescomp/time_series.hpp"

namespace rescomp::sor {

enum class LearningRule { Som, NeuralGas };

/// Exponential interpolation from initial to final over horizon steps,
/// constant at final afterwards.
struct Schedule {
  double initial = 0.1;
  double final = 0.01;
  Eigen::Index horizon = 10000;

  double at(Eigen::Index n) const;
};

struct SorParams {
  int n_units = 100;
  int input_dim = 1;
  double alpha = 1.0;  // input distance scale
  double beta = 1.0;   // recurrent distance scale
  double gamma = 1.0;  // leak in (0,1]
  int grid_rows = 0;   // 0 = near-square grid chosen automatically
  int grid_cols = 0;
  Schedule eta;        // learning rate eta(n)
  Schedule bh;         // neighborhood width b_h(n)
  LearningRule rule = LearningRule::Som;
  std::uint64_t seed = 0;

  void validate() const;
  std::pair<int, int> grid() const;  // resolved (rows, cols)
};

/// Radial-basis reservoir: column i of v_in / v holds unit i's input and
/// recurrent weight vectors; x is the activation vector in [0,1]^N.
struct SorState {
  Eigen::MatrixXd v_in;  // input_dim x n_units
  Eigen::MatrixXd v;     // n_units x n_units
  Eigen::VectorXd x;     // activations in [0,1]
};

SorState sor_init(const SorParams& p);

/// x~_i = exp(-alpha ||v_in_i - u||^2 - beta ||v_i - x(n-1)||^2),
/// x(n) = (1-gamma) x(n-1) + gamma x~(n).
void sor_step(SorState& s, const SorParams& p, const Eigen::VectorXd& u);

/// Index of the maximal activation; ties break to the lowest index.
Eigen::Index bmu(const SorState& s);

/// Move every unit's concatenated weight vector toward [u; x] with gain
/// eta(n) h(i,n). SOM: h = exp(-d_grid(i,bmu)^2 / b_h(n)^2) with Manhattan
/// grid distance; NeuralGas: h = exp(-rank_i / b_h(n)) with rank 0 = BMU.
void sor_learn_step(SorState& s, const SorParams& p, const Eigen::VectorXd& u,
                    Eigen::Index n);

/// Unsupervised fold of sor_step + sor_learn_step over the input.
SorState sor_train(const TimeSeries& inputs, const SorParams& p);

/// Drive a frozen network from the zero activation and record activations.
TimeSeries sor_run(const SorState& trained, const SorParams& p, const TimeSeries& inputs);

/// Layer-by-layer training: each layer trains on the frozen activations of
/// the previous one (first per_layer_steps samples), then feeds its full
/// activation sequence upward.
std::vector<SorState> stack_hierarchy(const std::vector<SorParams>& layers,
                                      const TimeSeries& inputs,
                                      Eigen::Index per_layer_steps);

}  // namespace rescomp::sor

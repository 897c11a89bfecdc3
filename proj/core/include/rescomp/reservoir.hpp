#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "rescomp/time_series.hpp"

namespace rescomp {

enum class Nonlinearity { Tanh, Linear };

std::string to_string(Nonlinearity f);
Nonlinearity nonlinearity_from_string(const std::string& s);

struct ReservoirParams {
  int n_units = 100;
  int input_dim = 1;
  double spectral_radius = 0.95;
  double input_scaling = 1.0;
  double connection_density = 0.1;   // fraction of nonzero recurrent entries, in (0,1]
  Nonlinearity nonlinearity = Nonlinearity::Tanh;
  double leak_rate = 1.0;            // in (0,1]; 1 = plain update
  std::uint64_t seed = 0;

  void validate() const;
};

/// Fixed random network: immutable after construction, safe to share
/// across concurrent trial runners.
struct Reservoir {
  Eigen::MatrixXd w_in;   // n_units x input_dim
  Eigen::MatrixXd w_res;  // n_units x n_units
  ReservoirParams params;

  /// Wrap explicit matrices (delay lines, hand-built topologies). No
  /// spectral rescaling is applied; params are taken as given.
  static Reservoir from_matrices(ReservoirParams params, Eigen::MatrixXd w_in,
                                 Eigen::MatrixXd w_res);
};

/// States collected while driving a reservoir. Row t is the state after
/// consuming input t. Washout rows are recorded, not deleted; consumers
/// skip them.
struct StateTrajectory {
  Eigen::MatrixXd states;  // T x n_units
  Eigen::Index washout = 0;
};

/// Largest eigenvalue magnitude (dense QR eigendecomposition).
double spectral_radius(const Eigen::MatrixXd& m);

/// Draw a sparse uniform recurrent matrix and a dense uniform input matrix,
/// rescaled so the measured spectral radius hits params.spectral_radius.
/// Identical seeds produce bit-identical matrices.
Reservoir build_reservoir(const ReservoirParams& params);

/// One update: x' = (1-leak) x + leak f(w_res x + w_in u).
/// With leak = 1 this is the plain state map.
Eigen::VectorXd step(const Reservoir& r, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& u);

/// Iterate step over an input series from x0, recording every state.
StateTrajectory run(const Reservoir& r, const TimeSeries& inputs,
                    const Eigen::VectorXd& x0, Eigen::Index washout);

/// run() starting from the zero state.
StateTrajectory run(const Reservoir& r, const TimeSeries& inputs,
                    Eigen::Index washout);

struct FadingMemoryReport {
  Eigen::VectorXd distances;  // ||xa_t - xb_t|| per step
  bool converged = false;
  double tolerance = 1e-6;
};

/// Drive the same input from two initial states and track their distance.
FadingMemoryReport fading_memory_check(const Reservoir& r, const TimeSeries& input,
                                       const Eigen::VectorXd& x0a,
                                       const Eigen::VectorXd& x0b,
                                       Eigen::Index horizon, double tolerance = 1e-6);

/// JSON document {params, w_in (row-major), w_res (row-major), format_version}.
std::string reservoir_to_json(const Reservoir& r);
Reservoir reservoir_from_json(const std::string& text);
void save_reservoir(const Reservoir& r, const std::string& path);
Reservoir load_reservoir(const std::string& path);

}  // namespace rescomp

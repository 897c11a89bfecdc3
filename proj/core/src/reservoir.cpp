#include "rescomp/reservoir.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

#include "rescomp/rng.hpp"

namespace rescomp {

std::string to_string(Nonlinearity f) {
  return f == Nonlinearity::Tanh ? "tanh" : "linear";
}

Nonlinearity nonlinearity_from_string(const std::string& s) {
  if (s == "tanh") return Nonlinearity::Tanh;
  if (s == "linear") return Nonlinearity::Linear;
  throw std::invalid_argument("unknown nonlinearity: " + s);
}

void ReservoirParams::validate() const {
  if (n_units < 1) throw std::invalid_argument("ReservoirParams: n_units must be >= 1");
  if (input_dim < 1) throw std::invalid_argument("ReservoirParams: input_dim must be >= 1");
  if (spectral_radius < 0.0)
    throw std::invalid_argument("ReservoirParams: spectral_radius must be >= 0");
  if (!(connection_density > 0.0 && connection_density <= 1.0))
    throw std::invalid_argument("ReservoirParams: connection_density must be in (0,1]");
  if (!(leak_rate > 0.0 && leak_rate <= 1.0))
    throw std::invalid_argument("ReservoirParams: leak_rate must be in (0,1]");
}

Reservoir Reservoir::from_matrices(ReservoirParams params, Eigen::MatrixXd w_in,
                                   Eigen::MatrixXd w_res) {
  if (w_res.rows() != params.n_units || w_res.cols() != params.n_units)
    throw std::invalid_argument("Reservoir::from_matrices: w_res shape mismatch");
  if (w_in.rows() != params.n_units || w_in.cols() != params.input_dim)
    throw std::invalid_argument("Reservoir::from_matrices: w_in shape mismatch");
  return Reservoir{std::move(w_in), std::move(w_res), params};
}

double spectral_radius(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("spectral_radius: matrix not square");
  if (m.size() == 0) return 0.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("spectral_radius: eigenvalue computation did not converge");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Reservoir build_reservoir(const ReservoirParams& params) {
  params.validate();
  const int n = params.n_units;
  Rng rng(params.seed);

  Eigen::MatrixXd w_res = Eigen::MatrixXd::Zero(n, n);
  if (params.spectral_radius > 0.0) {
    double measured = 0.0;
    int attempts = 0;
    for (;;) {
      w_res.setZero();
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (unit_uniform(rng) < params.connection_density)
            w_res(i, j) = uniform(rng, -1.0, 1.0);
      measured = spectral_radius(w_res);
      if (measured > 0.0) break;
      // nonzero target needs a scalable draw; nilpotent/zero draws cannot be rescaled
      if (++attempts >= 100)
        throw std::runtime_error(
            "build_reservoir: 100 draws in a row had zero spectral radius");
    }
    w_res *= params.spectral_radius / measured;
  }
  // spectral_radius == 0 leaves w_res all zero: no rescaling can hit a zero
  // radius from a nonzero draw.

  Eigen::MatrixXd w_in(n, params.input_dim);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < params.input_dim; ++j)
      w_in(i, j) = uniform(rng, -params.input_scaling, params.input_scaling);

  return Reservoir{std::move(w_in), std::move(w_res), params};
}

Eigen::VectorXd step(const Reservoir& r, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& u) {
  if (x.size() != r.params.n_units)
    throw std::invalid_argument("step: state dimension mismatch");
  if (u.size() != r.params.input_dim)
    throw std::invalid_argument("step: input dimension mismatch");
  Eigen::VectorXd pre = r.w_res * x + r.w_in * u;
  if (r.params.nonlinearity == Nonlinearity::Tanh) pre = pre.array().tanh();
  const double leak = r.params.leak_rate;
  if (leak == 1.0) return pre;
  return (1.0 - leak) * x + leak * pre;
}

StateTrajectory run(const Reservoir& r, const TimeSeries& inputs,
                    const Eigen::VectorXd& x0, Eigen::Index washout) {
  const Eigen::Index t_len = inputs.length();
  if (t_len == 0) throw std::invalid_argument("run: empty input");
  if (washout >= t_len) throw std::invalid_argument("run: washout must be < input length");
  if (inputs.dim() != r.params.input_dim)
    throw std::invalid_argument("run: input dimension mismatch");

  StateTrajectory traj;
  traj.states.resize(t_len, r.params.n_units);
  traj.washout = washout;
  Eigen::VectorXd x = x0;
  for (Eigen::Index t = 0; t < t_len; ++t) {
    x = step(r, x, inputs.values.row(t).transpose());
    traj.states.row(t) = x.transpose();
  }
  return traj;
}

StateTrajectory run(const Reservoir& r, const TimeSeries& inputs, Eigen::Index washout) {
  return run(r, inputs, Eigen::VectorXd::Zero(r.params.n_units), washout);
}

FadingMemoryReport fading_memory_check(const Reservoir& r, const TimeSeries& input,
                                       const Eigen::VectorXd& x0a,
                                       const Eigen::VectorXd& x0b,
                                       Eigen::Index horizon, double tolerance) {
  if (horizon < 1) throw std::invalid_argument("fading_memory_check: horizon must be >= 1");
  if (input.length() < horizon)
    throw std::invalid_argument("fading_memory_check: input shorter than horizon");
  FadingMemoryReport rep;
  rep.tolerance = tolerance;
  rep.distances.resize(horizon);
  Eigen::VectorXd xa = x0a, xb = x0b;
  for (Eigen::Index t = 0; t < horizon; ++t) {
    const Eigen::VectorXd u = input.values.row(t).transpose();
    xa = step(r, xa, u);
    xb = step(r, xb, u);
    rep.distances(t) = (xa - xb).norm();
  }
  rep.converged = rep.distances(horizon - 1) < tolerance;
  return rep;
}

}  // namespace rescomp

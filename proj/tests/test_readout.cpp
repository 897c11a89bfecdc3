#include <doctest.h>

#include <Eigen/Dense>

#include "rescomp/readout.hpp"
#include "rescomp/reservoir.hpp"
#include "rescomp/rng.hpp"
#include "rescomp/tasks.hpp"

using namespace rescomp;

namespace {

StateTrajectory random_trajectory(int t_len, int n_units, std::uint64_t seed,
                                  Eigen::Index washout = 0) {
  Rng rng(seed);
  Eigen::MatrixXd states(t_len, n_units);
  for (int t = 0; t < t_len; ++t)
    for (int i = 0; i < n_units; ++i) states(t, i) = uniform(rng, -1.0, 1.0);
  return StateTrajectory{std::move(states), washout};
}

// closed-form normal equations (Phi^T Phi + lambda I)^-1 Phi^T y
Eigen::VectorXd normal_equations_oracle(const Eigen::MatrixXd& phi,
                                        const Eigen::VectorXd& y, double lambda) {
  const Eigen::MatrixXd gram =
      phi.transpose() * phi +
      lambda * Eigen::MatrixXd::Identity(phi.cols(), phi.cols());
  return gram.inverse() * (phi.transpose() * y);
}

}  // namespace

TEST_CASE("readout recovers an exactly representable target") {
  const StateTrajectory traj = random_trajectory(200, 6, 3);
  TimeSeries targets = TimeSeries::scalar(traj.states.col(3));
  const Readout ro = train_readout(traj, targets, 0.0);
  for (int i = 0; i < 6; ++i)
    CHECK(ro.w_out(0, i) == doctest::Approx(i == 3 ? 1.0 : 0.0).epsilon(1e-8));
  CHECK(ro.w_out(0, 6) == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("constant target on silent states lands in the bias weight") {
  StateTrajectory traj{Eigen::MatrixXd::Zero(50, 4), 0};
  TimeSeries targets = TimeSeries::scalar(Eigen::VectorXd::Constant(50, 2.5));
  const Readout ro = train_readout(traj, targets, 0.0);
  CHECK(ro.w_out(0, 4) == doctest::Approx(2.5));
  CHECK(ro.rank_deficient);
  for (int i = 0; i < 4; ++i) CHECK(ro.w_out(0, i) == doctest::Approx(0.0));
}

TEST_CASE("ridge solution matches the normal-equations oracle") {
  const StateTrajectory traj = random_trajectory(80, 5, 7);
  Rng rng(8);
  Eigen::VectorXd y(80);
  for (int t = 0; t < 80; ++t) y(t) = uniform(rng, -1.0, 1.0);

  const Readout ro = train_readout(traj, TimeSeries::scalar(y), 0.1);

  Eigen::MatrixXd phi(80, 6);
  phi.leftCols(5) = traj.states;
  phi.col(5).setOnes();
  const Eigen::VectorXd expected = normal_equations_oracle(phi, y, 0.1);
  CHECK((ro.w_out.row(0).transpose() - expected).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("washout rows are excluded from the regression") {
  StateTrajectory traj = random_trajectory(100, 3, 11, /*washout=*/40);
  // poison the washout rows; they must not affect the fit
  StateTrajectory poisoned = traj;
  poisoned.states.topRows(40).setConstant(1e6);
  Rng rng(12);
  Eigen::VectorXd y(100);
  for (int t = 0; t < 100; ++t) y(t) = uniform(rng, -1.0, 1.0);
  const Readout a = train_readout(traj, TimeSeries::scalar(y), 0.01);
  const Readout b = train_readout(poisoned, TimeSeries::scalar(y), 0.01);
  CHECK((a.w_out - b.w_out).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("predict: zero weights give zero output") {
  const StateTrajectory traj = random_trajectory(30, 4, 13);
  Readout ro;
  ro.w_out = Eigen::MatrixXd::Zero(1, 5);
  ro.n_units = 4;
  const TimeSeries out = predict(ro, traj);
  CHECK(out.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("predict: bias-only readout is a constant series") {
  const StateTrajectory traj = random_trajectory(30, 4, 14);
  Readout ro;
  ro.w_out = Eigen::MatrixXd::Zero(1, 5);
  ro.w_out(0, 4) = 3.25;
  ro.n_units = 4;
  const TimeSeries out = predict(ro, traj);
  CHECK((out.values.array() - 3.25).abs().maxCoeff() == 0.0);
}

TEST_CASE("train-then-predict reproduces the least-squares residual") {
  const StateTrajectory traj = random_trajectory(60, 4, 15);
  Rng rng(16);
  Eigen::VectorXd y(60);
  for (int t = 0; t < 60; ++t) y(t) = uniform(rng, -1.0, 1.0);

  const Readout ro = train_readout(traj, TimeSeries::scalar(y), 0.0);
  const TimeSeries pred = predict(ro, traj);
  const double residual = (pred.values.col(0) - y).squaredNorm();

  Eigen::MatrixXd phi(60, 5);
  phi.leftCols(4) = traj.states;
  phi.col(4).setOnes();
  const Eigen::VectorXd w = normal_equations_oracle(phi, y, 1e-12);
  const double oracle_residual = (phi * w - y).squaredNorm();
  CHECK(residual == doctest::Approx(oracle_residual).epsilon(1e-6));
}

TEST_CASE("optional input features participate in the fit") {
  const Reservoir r = build_reservoir([] {
    ReservoirParams p;
    p.n_units = 8;
    p.seed = 17;
    return p;
  }());
  TimeSeries input = tasks::gen_iid_uniform(300, 1, -1.0, 1.0, 18);
  const StateTrajectory traj = run(r, input, 10);
  // target IS the input: with the raw-input feature the fit is exact
  const Readout ro = train_readout(traj, input, 0.0, /*uses_input=*/true, &input);
  const TimeSeries pred = predict(ro, traj, &input);
  const double err = (pred.values.col(0).tail(290) - input.values.col(0).tail(290))
                         .cwiseAbs()
                         .maxCoeff();
  CHECK(err < 1e-8);
}

TEST_CASE("layout mismatches are rejected") {
  const StateTrajectory traj = random_trajectory(30, 4, 19);
  TimeSeries targets = TimeSeries::scalar(Eigen::VectorXd::Zero(29));
  CHECK_THROWS_AS(train_readout(traj, targets, 0.0), std::invalid_argument);

  Readout ro;
  ro.w_out = Eigen::MatrixXd::Zero(1, 7);
  ro.n_units = 6;
  CHECK_THROWS_AS(predict(ro, traj), std::invalid_argument);
}

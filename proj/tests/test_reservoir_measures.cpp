#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "rescomp/measures/criticality.hpp"
#include "rescomp/measures/fmc.hpp"
#include "rescomp/measures/ipc.hpp"
#include "rescomp/measures/ranks.hpp"
#include "rescomp/memory_capacity.hpp"
#include "rescomp/reservoir.hpp"
#include "rescomp/rng.hpp"
#include "rescomp/tasks.hpp"

using namespace rescomp;
using namespace rescomp::measures;

namespace {

ReservoirParams make_params(int n, double rho, Nonlinearity f, std::uint64_t seed,
                            double density = 0.2) {
  ReservoirParams p;
  p.n_units = n;
  p.input_dim = 1;
  p.spectral_radius = rho;
  p.connection_density = density;
  p.nonlinearity = f;
  p.seed = seed;
  return p;
}

// rank oracle independent of the SVD route: Gaussian elimination with
// partial pivoting, counting pivots above a tolerance
Eigen::Index elimination_rank(Eigen::MatrixXd m, double tol) {
  Eigen::Index rank = 0;
  const Eigen::Index rows = m.rows(), cols = m.cols();
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < cols && row < rows; ++col) {
    Eigen::Index pivot = row;
    for (Eigen::Index i = row + 1; i < rows; ++i)
      if (std::abs(m(i, col)) > std::abs(m(pivot, col))) pivot = i;
    if (std::abs(m(pivot, col)) <= tol) continue;
    m.row(pivot).swap(m.row(row));
    for (Eigen::Index i = row + 1; i < rows; ++i)
      m.row(i) -= (m(i, col) / m(row, col)) * m.row(row);
    ++rank;
    ++row;
  }
  return rank;
}

}  // namespace

// ------------------------------------------------------------------ ranks

TEST_CASE("separation rank: identical streams collapse to rank 1") {
  const Reservoir r = build_reservoir(make_params(50, 0.9, Nonlinearity::Tanh, 1));
  const TimeSeries stream = tasks::gen_iid_uniform(50, 1, -1.0, 1.0, 2);
  std::vector<TimeSeries> streams(8, stream);
  const RankReport rep = separation_rank(r, streams, 50);
  CHECK(rep.rank == 1);
}

TEST_CASE("separation rank: distinct random streams are fully separated") {
  const Reservoir r = build_reservoir(make_params(50, 0.9, Nonlinearity::Tanh, 3));
  std::vector<TimeSeries> streams;
  for (int i = 0; i < 10; ++i)
    streams.push_back(tasks::gen_iid_uniform(50, 1, -1.0, 1.0, 100 + i));
  const RankReport rep = separation_rank(r, streams, 50);
  CHECK(rep.rank == 10);

  // independent elimination oracle on the same state matrix
  Eigen::MatrixXd m(50, 10);
  for (int i = 0; i < 10; ++i) {
    const StateTrajectory traj = run(r, streams[static_cast<std::size_t>(i)], 0);
    m.col(i) = traj.states.row(49).transpose();
  }
  CHECK(elimination_rank(m, rep.tolerance) == 10);
}

TEST_CASE("separation rank: a single stream gives rank 1 (0 when silent)") {
  const Reservoir r = build_reservoir(make_params(20, 0.9, Nonlinearity::Tanh, 4));
  std::vector<TimeSeries> one{tasks::gen_iid_uniform(30, 1, -1.0, 1.0, 5)};
  CHECK(separation_rank(r, one, 30).rank == 1);

  std::vector<TimeSeries> silent{TimeSeries::scalar(Eigen::VectorXd::Zero(30))};
  CHECK(separation_rank(r, silent, 30).rank == 0);
}

TEST_CASE("ranks reject unequal stream lengths") {
  const Reservoir r = build_reservoir(make_params(10, 0.9, Nonlinearity::Tanh, 6));
  std::vector<TimeSeries> streams{tasks::gen_iid_uniform(30, 1, -1.0, 1.0, 7),
                                  tasks::gen_iid_uniform(29, 1, -1.0, 1.0, 8)};
  CHECK_THROWS_AS(separation_rank(r, streams, 29), std::invalid_argument);
}

TEST_CASE("rank is invariant under stream permutation") {
  const Reservoir r = build_reservoir(make_params(30, 0.9, Nonlinearity::Tanh, 9));
  std::vector<TimeSeries> streams;
  for (int i = 0; i < 6; ++i)
    streams.push_back(tasks::gen_iid_uniform(40, 1, -1.0, 1.0, 200 + i));
  const Eigen::Index forward = separation_rank(r, streams, 40).rank;
  std::reverse(streams.begin(), streams.end());
  CHECK(separation_rank(r, streams, 40).rank == forward);
}

TEST_CASE("generalization rank: noisy variants of one stream stay low-rank") {
  const Reservoir r = build_reservoir(make_params(50, 0.5, Nonlinearity::Tanh, 10));
  const TimeSeries base = tasks::gen_iid_uniform(50, 1, -1.0, 1.0, 11);
  std::vector<TimeSeries> universe;
  for (int i = 0; i < 30; ++i) {
    TimeSeries noisy = base;
    const TimeSeries jitter = tasks::gen_iid_uniform(50, 1, -1.0, 1.0, 300 + i);
    noisy.values += 1e-2 * jitter.values;
    universe.push_back(std::move(noisy));
  }
  // cutoff above the noise floor; the contraction leaves a steep spectrum
  const RankReport rep = generalization_rank(r, universe, 50, /*tol_factor=*/1e-6);
  CHECK(rep.has_vc_interval);
  CHECK(rep.singular_values(1) / rep.singular_values(0) < 0.05);
  CHECK(rep.rank < 15);  // well below s = 30
  CHECK(rep.rank >= 1);
}

TEST_CASE("generalization rank: exact copies of one stream give rank 1") {
  const Reservoir r = build_reservoir(make_params(30, 0.5, Nonlinearity::Tanh, 44));
  const TimeSeries base = tasks::gen_iid_uniform(40, 1, -1.0, 1.0, 45);
  std::vector<TimeSeries> universe(12, base);
  CHECK(generalization_rank(r, universe, 40).rank == 1);
}

TEST_CASE("quality score arithmetic") {
  RankReport sep, gen;
  sep.rank = 10;
  sep.cols = 10;
  gen.rank = 1;
  gen.cols = 10;
  CHECK(quality_score(sep, gen) == doctest::Approx(0.9));
  gen.rank = 10;
  CHECK(quality_score(sep, gen) == doctest::Approx(0.0));
  sep.rank = 5;
  gen.rank = 8;
  CHECK(quality_score(sep, gen) == doctest::Approx(-0.3));
}

// -------------------------------------------------------------------- IPC

TEST_CASE("legendre polynomials satisfy the recurrence values") {
  CHECK(legendre(0, 0.3) == doctest::Approx(1.0));
  CHECK(legendre(1, 0.3) == doctest::Approx(0.3));
  CHECK(legendre(2, 0.3) == doctest::Approx(0.5 * (3 * 0.09 - 1)));
  CHECK(legendre(3, -0.7) == doctest::Approx(0.5 * (5 * std::pow(-0.7, 3) - 3 * -0.7)));
}

TEST_CASE("legendre basis enumerates all products up to total degree") {
  const auto basis = legendre_basis(2, 1, 3);
  // degree 1: {1,2,3}; degree 2: squares {1,2,3} + pairs {12,13,23}
  CHECK(basis.size() == 9);
  for (const auto& fn : basis) CHECK(fn.total_degree() <= 2);
}

TEST_CASE("IPC: the identity function is recoverable from driven states") {
  const Reservoir r = build_reservoir(make_params(20, 0.9, Nonlinearity::Tanh, 12));
  const TimeSeries input = tasks::gen_iid_uniform(5000, 1, -1.0, 1.0, 13);
  IpcBasisFunction identity;
  identity.terms = {{0, 1}};  // z(t) = u(t)
  const IpcReport rep = ipc(r, input, {identity});
  CHECK(rep.capacities.front().second > 0.95);
}

TEST_CASE("IPC: without input weights every capacity vanishes") {
  Reservoir r = build_reservoir(make_params(20, 0.9, Nonlinearity::Tanh, 14));
  r.w_in.setZero();
  const TimeSeries input = tasks::gen_iid_uniform(3000, 1, -1.0, 1.0, 15);
  const IpcReport rep = ipc(r, input, legendre_basis(2, 1, 5));
  for (const auto& [name, c] : rep.capacities) CHECK(c < 0.05);
  CHECK(rep.total < 0.2);
}

TEST_CASE("IPC: degree-1 total matches memory capacity on a linear reservoir") {
  const Reservoir r = build_reservoir(make_params(20, 0.9, Nonlinearity::Linear, 16));
  const TimeSeries input = tasks::gen_iid_uniform(8000, 1, -1.0, 1.0, 17);

  const auto basis = legendre_basis(1, 1, 40);
  const IpcReport rep = ipc(r, input, basis);

  MemoryCapacityOptions opt;
  opt.k_max = 40;
  const double mc = memory_capacity(r, input, opt).scalars.at("mc_total");
  CHECK(rep.total == doctest::Approx(mc).epsilon(0.10));
}

TEST_CASE("IPC: capacities stay in [0,1] and the total respects the unit bound") {
  const Reservoir r = build_reservoir(make_params(20, 0.95, Nonlinearity::Tanh, 18));
  const TimeSeries input = tasks::gen_iid_uniform(5000, 1, -1.0, 1.0, 19);
  const IpcReport rep = ipc(r, input, legendre_basis(2, 1, 15));
  for (const auto& [name, c] : rep.capacities) {
    CHECK(c >= 0.0);
    CHECK(c <= 1.0);
  }
  CHECK(rep.total <= 20.0 * 1.05);
}

TEST_CASE("IPC rejects out-of-range input and empty bases") {
  const Reservoir r = build_reservoir(make_params(5, 0.9, Nonlinearity::Tanh, 20));
  TimeSeries bad = tasks::gen_iid_uniform(500, 1, -1.0, 1.0, 21);
  bad.values(3, 0) = 1.5;
  CHECK_THROWS_AS(ipc(r, bad, legendre_basis(1, 1, 2)), std::invalid_argument);
  const TimeSeries ok = tasks::gen_iid_uniform(500, 1, -1.0, 1.0, 22);
  CHECK_THROWS_AS(ipc(r, ok, {}), std::invalid_argument);
}

// -------------------------------------------------------------------- FMC

TEST_CASE("FMC: zero recurrence has the closed-form curve") {
  ReservoirParams p = make_params(5, 0.0, Nonlinearity::Linear, 23);
  const Reservoir r = build_reservoir(p);
  const double eps = 0.05;
  const FmcReport rep = fisher_memory_curve(r, eps, 4);
  CHECK(rep.j(0) == doctest::Approx(r.w_in.col(0).squaredNorm() / eps).epsilon(1e-9));
  for (int k = 1; k <= 4; ++k) CHECK(rep.j(k) == doctest::Approx(0.0));
}

TEST_CASE("FMC: zero input weights give a flat zero curve") {
  Reservoir r = build_reservoir(make_params(5, 0.8, Nonlinearity::Linear, 24));
  r.w_in.setZero();
  const FmcReport rep = fisher_memory_curve(r, 0.01, 6);
  CHECK(rep.j.cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("FMC matches a Monte-Carlo Fisher-information oracle") {
  const Reservoir r = build_reservoir(make_params(5, 0.8, Nonlinearity::Linear, 25));
  const double eps = 0.01;
  const FmcReport rep = fisher_memory_curve(r, eps, 5);

  // oracle: stationary covariance from a long noise-driven simulation of
  // the actual network map, pulse response from driving the network with
  // a unit impulse; J(k) = r_k^T C_hat^-1 r_k
  const Eigen::Index n = 5;
  Rng rng(26);
  std::normal_distribution<double> gauss(0.0, std::sqrt(eps));
  const long t_total = 600000, t_burn = 2000;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(n);
  long samples = 0;
  for (long t = 0; t < t_total; ++t) {
    Eigen::VectorXd noise(n);
    for (Eigen::Index i = 0; i < n; ++i) noise(i) = gauss(rng);
    x = r.w_res * x + noise;
    if (t >= t_burn) {
      acc += x * x.transpose();
      mean += x;
      ++samples;
    }
  }
  mean /= static_cast<double>(samples);
  const Eigen::MatrixXd c_hat =
      acc / static_cast<double>(samples) - mean * mean.transpose();

  // pulse response through run(): input 1 then zeros
  Eigen::VectorXd pulse = Eigen::VectorXd::Zero(7);
  pulse(0) = 1.0;
  const StateTrajectory traj = run(r, TimeSeries::scalar(pulse), 0);

  const Eigen::MatrixXd c_inv = c_hat.inverse();
  for (int k = 0; k <= 5; ++k) {
    const Eigen::VectorXd r_k = traj.states.row(k).transpose();
    const double j_oracle = r_k.dot(c_inv * r_k);
    CHECK(rep.j(k) == doctest::Approx(j_oracle).epsilon(0.05));
  }
}

TEST_CASE("FMC refuses nonlinear or unstable reservoirs") {
  const Reservoir tanh_r = build_reservoir(make_params(5, 0.8, Nonlinearity::Tanh, 27));
  CHECK_THROWS_AS(fisher_memory_curve(tanh_r, 0.01, 3), std::invalid_argument);
  const Reservoir wild = build_reservoir(make_params(5, 1.2, Nonlinearity::Linear, 28));
  CHECK_THROWS_AS(fisher_memory_curve(wild, 0.01, 3), std::invalid_argument);
}

TEST_CASE("FMC curve is non-increasing for a scaled orthogonal matrix") {
  // rotation-like normal matrix: J(k) must decay monotonically
  const Eigen::Index n = 4;
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  q << 0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0;
  ReservoirParams p = make_params(static_cast<int>(n), 0.9, Nonlinearity::Linear, 29);
  Reservoir r = build_reservoir(p);
  const Reservoir normal_r = Reservoir::from_matrices(p, r.w_in, 0.9 * q);
  const FmcReport rep = fisher_memory_curve(normal_r, 0.01, 8);
  for (int k = 1; k <= 8; ++k) CHECK(rep.j(k) <= rep.j(k - 1) + 1e-9);
}

// ------------------------------------------------------------ criticality

TEST_CASE("criticality: linear contraction recovers ln rho") {
  const Reservoir r = build_reservoir(make_params(50, 0.5, Nonlinearity::Linear, 30));
  TimeSeries zero_input = TimeSeries::scalar(Eigen::VectorXd::Zero(5200));
  CriticalityOptions opt;
  opt.horizon = 5000;
  opt.trials = 3;
  opt.warmup = 100;
  const CriticalityReport rep = criticality_estimate(r, zero_input, opt);
  CHECK(rep.lambda == doctest::Approx(std::log(0.5)).epsilon(0.015));
  CHECK(rep.regime == Regime::Stable);
}

TEST_CASE("criticality: linear expansion recovers ln 2") {
  const Reservoir r = build_reservoir(make_params(50, 2.0, Nonlinearity::Linear, 31));
  TimeSeries zero_input = TimeSeries::scalar(Eigen::VectorXd::Zero(5200));
  CriticalityOptions opt;
  opt.horizon = 5000;
  opt.trials = 3;
  opt.warmup = 100;
  const CriticalityReport rep = criticality_estimate(r, zero_input, opt);
  CHECK(rep.lambda == doctest::Approx(std::log(2.0)).epsilon(0.015));
  CHECK(rep.regime == Regime::Unstable);
}

TEST_CASE("criticality: zero recurrence erases the perturbation") {
  const Reservoir r = build_reservoir(make_params(20, 0.0, Nonlinearity::Linear, 32));
  TimeSeries input = tasks::gen_iid_uniform(1200, 1, -1.0, 1.0, 33);
  CriticalityOptions opt;
  opt.horizon = 1000;
  const CriticalityReport rep = criticality_estimate(r, input, opt);
  CHECK(rep.underflow);
  CHECK(std::isinf(rep.lambda));
  CHECK(rep.lambda < 0);
}

TEST_CASE("criticality: exponent ordering across spectral radii") {
  TimeSeries zero_input = TimeSeries::scalar(Eigen::VectorXd::Zero(2200));
  CriticalityOptions opt;
  opt.horizon = 2000;
  opt.trials = 2;
  double lambdas[3];
  int idx = 0;
  ReservoirParams unit = make_params(40, 1.0, Nonlinearity::Linear, 34);
  const Reservoir base = build_reservoir(unit);
  for (double rho : {0.5, 1.0, 2.0}) {
    Reservoir r = base;
    r.w_res *= rho;
    r.params.spectral_radius = rho;
    lambdas[idx++] = criticality_estimate(r, zero_input, opt).lambda;
  }
  CHECK(lambdas[0] < lambdas[1]);
  CHECK(lambdas[1] < lambdas[2]);
}

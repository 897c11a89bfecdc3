#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "rescomp/reservoir.hpp"
#include "rescomp/rng.hpp"
#include "rescomp/tasks.hpp"
#include "rescomp/te_adaptation.hpp"

using namespace rescomp;
using namespace rescomp::tea;

namespace {

AdaptiveReservoir small_adaptive(std::uint64_t seed, int n = 10, double rho = 0.9) {
  ReservoirParams p;
  p.n_units = n;
  p.input_dim = 1;
  p.spectral_radius = rho;
  p.connection_density = 0.3;
  p.seed = seed;
  return make_adaptive(build_reservoir(p));
}

}  // namespace

TEST_CASE("decay factors follow 2/(1+m) exactly") {
  AdaptiveReservoir r = small_adaptive(1);
  CHECK(r.a.maxCoeff() == 1.0);  // m = 1 everywhere
  r.set_memory(3, 3);
  CHECK(r.a(3) == doctest::Approx(0.5));
  r.set_memory(3, 7);
  CHECK(r.a(3) == doctest::Approx(0.25));
  CHECK_THROWS_AS(r.set_memory(0, 0), std::invalid_argument);
  for (Eigen::Index i = 0; i < r.size(); ++i)
    CHECK(r.a(i) == doctest::Approx(2.0 / (1.0 + r.m(i))));
}

TEST_CASE("adaptive step with unit memory is the plain reservoir update") {
  const AdaptiveReservoir r = small_adaptive(2);
  Rng rng(3);
  Eigen::VectorXd y(r.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = uniform(rng, -0.9, 0.9);
  const double u = 0.4;
  const AdaptiveStepResult res = adaptive_step(r, y, u);
  const Eigen::VectorXd expected_x = r.w * y + r.w_in * u;
  CHECK((res.x - expected_x).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((res.y - expected_x.array().tanh().matrix()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("adaptive step blends in self-memory when m grows") {
  AdaptiveReservoir r = small_adaptive(4);
  r.w.setZero();
  r.w_in.setZero();
  for (Eigen::Index i = 0; i < r.size(); ++i) r.set_memory(i, 3);  // a = 0.5
  Eigen::VectorXd y = Eigen::VectorXd::Constant(r.size(), 0.6);
  const AdaptiveStepResult res = adaptive_step(r, y, 0.0);
  CHECK((res.x - 0.5 * y).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("select_input_history: lag-1 copy plateaus immediately") {
  Rng rng(5);
  Eigen::VectorXd u(60000), v(60000);
  for (Eigen::Index t = 0; t < 60000; ++t) u(t) = unit_uniform(rng) < 0.5 ? 0.0 : 1.0;
  v(0) = 0.0;
  for (Eigen::Index t = 1; t < 60000; ++t) v(t) = u(t - 1);
  const auto sel = select_input_history(TimeSeries::scalar(u), TimeSeries::scalar(v),
                                        0.01, 5, 2);
  CHECK(sel.l_hat == 1);
  CHECK(sel.plateau_found);
  CHECK(sel.te_curve[0] == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("select_input_history: independent target needs no history") {
  Rng rng(6);
  Eigen::VectorXd u(40000), v(40000);
  for (Eigen::Index t = 0; t < 40000; ++t) {
    u(t) = unit_uniform(rng) < 0.5 ? 0.0 : 1.0;
    v(t) = unit_uniform(rng) < 0.5 ? 0.0 : 1.0;
  }
  const auto sel = select_input_history(TimeSeries::scalar(u), TimeSeries::scalar(v),
                                        0.01, 5, 2);
  CHECK(sel.l_hat == 1);
  for (double te : sel.te_curve) CHECK(te < 0.01);
}

TEST_CASE("select_input_history: XOR of two lags needs l = 2") {
  Rng rng(7);
  Eigen::VectorXd u(80000), v(80000);
  for (Eigen::Index t = 0; t < 80000; ++t) u(t) = unit_uniform(rng) < 0.5 ? 0.0 : 1.0;
  v(0) = 0.0;
  v(1) = 0.0;
  for (Eigen::Index t = 2; t < 80000; ++t)
    v(t) = (u(t - 1) != u(t - 2)) ? 1.0 : 0.0;
  const auto sel = select_input_history(TimeSeries::scalar(u), TimeSeries::scalar(v),
                                        0.01, 6, 2);
  CHECK(sel.l_hat == 2);
  CHECK(sel.te_curve[0] < 0.05);                              // T(1,1) ~ 0
  CHECK(sel.te_curve[1] == doctest::Approx(1.0).epsilon(0.02));  // T(1,2) = 1 bit
}

TEST_CASE("adapt_epoch applies the increase / decrease / dead-zone rules") {
  AdaptiveReservoir r = small_adaptive(8, 3);
  EpochRecord rec;
  Rng rng(9);
  rec.x.resize(400, 3);
  rec.y.resize(400, 3);
  for (Eigen::Index t = 0; t < 400; ++t)
    for (int i = 0; i < 3; ++i) {
      rec.x(t, i) = uniform(rng, -1.0, 1.0);
      rec.y(t, i) = uniform(rng, -1.0, 1.0);
    }
  // fabricate previous values so each unit hits a different branch
  std::vector<bool> changed;
  const std::vector<double> te_now = adapt_epoch(r, rec, {0.0, 0.0, 0.0}, 1, 1e9, 8,
                                                 &changed);
  CHECK(changed == std::vector<bool>{false, false, false});  // dead zone swallows all

  std::vector<double> prev{te_now[0] - 1.0, te_now[1] + 1.0, te_now[2]};
  AdaptiveReservoir r2 = small_adaptive(8, 3);
  r2.set_memory(1, 4);
  adapt_epoch(r2, rec, prev, 1, 0.01, 8, &changed);
  CHECK(r2.m(0) == 2);  // te rose by 1 bit: increase
  CHECK(r2.m(1) == 3);  // te fell: decrease
  CHECK(r2.m(2) == 1);  // within the dead zone: unchanged
  CHECK(changed == std::vector<bool>{true, true, false});

  // decrease clamps at 1
  AdaptiveReservoir r3 = small_adaptive(8, 3);
  adapt_epoch(r3, rec, {1e9, 1e9, 1e9}, 1, 0.01, 8, &changed);
  CHECK(r3.m.minCoeff() == 1);
}

TEST_CASE("frozen units never change") {
  AdaptiveReservoir r = small_adaptive(10, 3);
  r.frozen[1] = true;
  r.set_memory(1, 5);
  EpochRecord rec;
  rec.x = Eigen::MatrixXd::Random(300, 3);
  rec.y = Eigen::MatrixXd::Random(300, 3);
  adapt_epoch(r, rec, {-1e9, -1e9, -1e9}, 1, 0.01, 8, nullptr);  // huge te gain
  CHECK(r.m(0) == 2);
  CHECK(r.m(1) == 5);  // frozen
  CHECK(r.m(2) == 2);
}

TEST_CASE("pretrain with an infinite dead zone freezes everything at m = 1") {
  AdaptiveReservoir r = small_adaptive(11, 8);
  const TimeSeries input = tasks::gen_iid_uniform(20000, 1, -0.9, 0.9, 12);
  Eigen::VectorXd target = input.values.col(0);
  AdaptationConfig cfg;
  cfg.epsilon = 1e18;
  cfg.epoch_length = 500;
  cfg.max_epochs = 20;
  cfg.stabilization_window = 3;
  const PretrainReport rep = pretrain(r, input, TimeSeries::scalar(target), cfg);
  CHECK_FALSE(rep.timed_out);
  CHECK(r.m.maxCoeff() == 1);
  for (bool f : r.frozen) CHECK(f);
  // baseline epoch + S stable epochs
  CHECK(rep.epochs_run == 1 + cfg.stabilization_window);
}

TEST_CASE("pretrain with a zero epoch budget times out untouched") {
  AdaptiveReservoir r = small_adaptive(13, 6);
  const Eigen::VectorXi m_before = r.m;
  const TimeSeries input = tasks::gen_iid_uniform(5000, 1, -0.9, 0.9, 14);
  AdaptationConfig cfg;
  cfg.max_epochs = 0;
  const PretrainReport rep = pretrain(r, input, input, cfg);
  CHECK(rep.timed_out);
  CHECK(r.m == m_before);
}

TEST_CASE("input-decoupled units show no spurious memory drift") {
  // zero input weights: unit statistics are stationary across epochs, so
  // with epsilon above the estimator noise floor m_i must not wander
  ReservoirParams p;
  p.n_units = 10;
  p.input_dim = 1;
  p.spectral_radius = 0.9;
  p.connection_density = 0.3;
  p.seed = 15;
  Reservoir base = build_reservoir(p);
  base.w_in.setZero();
  AdaptiveReservoir r = make_adaptive(base);

  const TimeSeries input = tasks::gen_iid_uniform(30000, 1, -1.0, 1.0, 16);
  AdaptationConfig cfg;
  cfg.epsilon = 0.05;
  cfg.epoch_length = 1000;
  cfg.max_epochs = 11;  // baseline + 10 adaptation epochs
  cfg.stabilization_window = 1000;  // never freeze during the window
  pretrain(r, input, input, cfg);
  CHECK(r.m.maxCoeff() == 1);
  CHECK(r.m.minCoeff() == 1);
}

TEST_CASE("pretrain trace rows are consistent and deterministic") {
  const TimeSeries input = tasks::gen_iid_uniform(30000, 1, -0.9, 0.9, 17);
  Eigen::VectorXd shifted(input.length());
  shifted(0) = 0.0;
  shifted.tail(input.length() - 1) = input.values.col(0).head(input.length() - 1);

  AdaptationConfig cfg;
  cfg.epoch_length = 800;
  cfg.max_epochs = 6;
  cfg.stabilization_window = 2;

  AdaptiveReservoir r1 = small_adaptive(18, 6);
  const PretrainReport a = pretrain(r1, input, TimeSeries::scalar(shifted), cfg);
  AdaptiveReservoir r2 = small_adaptive(18, 6);
  const PretrainReport b = pretrain(r2, input, TimeSeries::scalar(shifted), cfg);

  CHECK(a.l_hat == b.l_hat);
  CHECK(a.trace.size() == b.trace.size());
  CHECK(r1.m == r2.m);
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].te_bits == b.trace[i].te_bits);
    CHECK(a.trace[i].m == b.trace[i].m);
  }
  // invariant held throughout
  for (Eigen::Index i = 0; i < r1.size(); ++i)
    CHECK(r1.a(i) == doctest::Approx(2.0 / (1.0 + r1.m(i))));
}

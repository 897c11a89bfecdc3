#include <doctest.h>

#include <cmath>

#include "rescomp/info/estimators.hpp"
#include "rescomp/tasks.hpp"

using namespace rescomp;
using namespace rescomp::tasks;

// ----------------------------------------------------------- mackey-glass

TEST_CASE("mackey-glass stays within the chaotic attractor's range") {
  const TimeSeries ts = gen_mackey_glass(20000, {}, 1);
  CHECK(ts.values.minCoeff() > 0.0);
  CHECK(ts.values.maxCoeff() < 2.0);
  // the series actually oscillates
  CHECK(ts.values.maxCoeff() - ts.values.minCoeff() > 0.3);
}

TEST_CASE("mackey-glass with a = 0 decays exponentially") {
  MackeyGlassParams p;
  p.a = 0.0;
  p.discard = 0;
  const TimeSeries ts = gen_mackey_glass(200, p, 2);
  // dx/dt = -b x: strictly decreasing, ratio close to exp(-b)
  for (Eigen::Index t = 1; t < ts.length(); ++t) CHECK(ts.values(t, 0) < ts.values(t - 1, 0));
  const double ratio = ts.values(100, 0) / ts.values(99, 0);
  CHECK(ratio == doctest::Approx(std::exp(-0.1)).epsilon(1e-6));
}

TEST_CASE("mackey-glass is deterministic by seed") {
  const TimeSeries a = gen_mackey_glass(500, {}, 3);
  const TimeSeries b = gen_mackey_glass(500, {}, 3);
  const TimeSeries c = gen_mackey_glass(500, {}, 4);
  CHECK(a.values == b.values);
  CHECK(a.values != c.values);
}

TEST_CASE("mackey-glass rejects fractional tau/dt") {
  MackeyGlassParams p;
  p.dt = 0.3;
  CHECK_THROWS_AS(gen_mackey_glass(10, p, 5), std::invalid_argument);
}

// ------------------------------------------------------------ coupled maps

TEST_CASE("coupled maps: zero coupling leaves the response autonomous") {
  const auto res = gen_coupled_maps(50000, 0.0, 0.3, 6);
  info::DiscretizationSpec spec;
  spec.bins = 4;
  const auto x = info::discretize(res.driver.values.col(0), spec);
  const auto y = info::discretize(res.response.values.col(0), spec);
  CHECK(info::transfer_entropy(x, y).value_bits < 0.01);
}

TEST_CASE("coupled maps: full coupling with omega 0 copies the driver map") {
  const auto res = gen_coupled_maps(2000, 1.0, 0.0, 7);
  // y_{t+1} = 4 x_t (1 - x_t)
  for (Eigen::Index t = 0; t + 1 < 2000; ++t) {
    const double x = res.driver.values(t, 0);
    CHECK(res.response.values(t + 1, 0) == doctest::Approx(4.0 * x * (1.0 - x)));
  }
}

TEST_CASE("coupled maps match a direct iteration oracle at e = 0.5") {
  const double e = 0.5, omega = 0.4;
  const auto res = gen_coupled_maps(1000, e, omega, 8);
  auto g = [omega](double z) { return omega * z + (1.0 - omega) * 4.0 * z * (1.0 - z); };
  for (Eigen::Index t = 0; t + 1 < 1000; ++t) {
    const double expected =
        (1.0 - e) * g(res.response.values(t, 0)) + e * g(res.driver.values(t, 0));
    CHECK(res.response.values(t + 1, 0) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("coupled maps stay in the unit interval without clamping") {
  for (double omega : {0.0, 0.3, 0.7, 1.0}) {
    const auto res = gen_coupled_maps(1000000, 0.6, omega, 9);
    CHECK_FALSE(res.clamped);
    CHECK(res.response.values.minCoeff() >= 0.0);
    CHECK(res.response.values.maxCoeff() <= 1.0);
  }
}

// ------------------------------------------------------------ iid uniform

TEST_CASE("iid uniform validates its range") {
  CHECK_THROWS_AS(gen_iid_uniform(10, 1, 1.0, 1.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(gen_iid_uniform(10, 1, 2.0, -2.0, 10), std::invalid_argument);
}

TEST_CASE("iid uniform sample mean matches the CLT bound") {
  const TimeSeries ts = gen_iid_uniform(100000, 1, -1.0, 1.0, 11);
  CHECK(std::abs(ts.values.mean()) < 0.01);
  CHECK(ts.values.minCoeff() >= -1.0);
  CHECK(ts.values.maxCoeff() < 1.0);
}

TEST_CASE("iid uniform is deterministic by seed") {
  CHECK(gen_iid_uniform(100, 2, 0.0, 1.0, 12).values ==
        gen_iid_uniform(100, 2, 0.0, 1.0, 12).values);
}

// ------------------------------------------------------- pattern detection

TEST_CASE("pattern detection: a single noiseless pattern fires periodically") {
  const auto res = gen_pattern_detection(60, 5, 1, 0.0, 13);
  for (Eigen::Index t = 0; t < 60; ++t) {
    const bool expected = (t % 5) == 4;
    CHECK(res.target.values(t, 0) == (expected ? 1.0 : 0.0));
  }
}

TEST_CASE("pattern detection: class balance tracks the pattern count") {
  const int n_patterns = 4, pattern_length = 5;
  const Eigen::Index length = 10000 * pattern_length;
  const auto res = gen_pattern_detection(length, pattern_length, n_patterns, 0.1, 14);
  const double fires = res.target.values.sum();
  const double patterns_total = static_cast<double>(length) / pattern_length;
  const double expected = patterns_total / n_patterns;
  CHECK(fires > expected * 0.9);
  CHECK(fires < expected * 1.1);
}

TEST_CASE("pattern detection is deterministic by seed") {
  const auto a = gen_pattern_detection(500, 4, 3, 0.2, 15);
  const auto b = gen_pattern_detection(500, 4, 3, 0.2, 15);
  CHECK(a.input.values == b.input.values);
  CHECK(a.target.values == b.target.values);
}

#include "rescomp/tasks.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rescomp/rng.hpp"

namespace rescomp::tasks {

namespace {

double mg_deriv(double x, double x_delayed, double a, double b) {
  const double xp = std::pow(x_delayed, 10.0);
  return a * x_delayed / (1.0 + xp) - b * x;
}

}  // namespace

TimeSeries gen_mackey_glass(Eigen::Index length, const MackeyGlassParams& p,
                            std::uint64_t seed) {
  if (length < 1) throw std::invalid_argument("gen_mackey_glass: length must be >= 1");
  if (p.dt <= 0.0) throw std::invalid_argument("gen_mackey_glass: dt must be > 0");
  const double steps_per_tau = p.tau / p.dt;
  if (std::abs(steps_per_tau - std::round(steps_per_tau)) > 1e-9)
    throw std::invalid_argument("gen_mackey_glass: tau/dt must be integral");
  const int delay_steps = static_cast<int>(std::round(steps_per_tau));
  if (p.subsample < 1) throw std::invalid_argument("gen_mackey_glass: subsample must be >= 1");

  Rng rng(seed);
  const double x0 = 1.2 + uniform(rng, -0.01, 0.01);

  const Eigen::Index total =
      (length * p.subsample) + p.discard + delay_steps + 1;
  std::vector<double> x(static_cast<std::size_t>(total));
  for (int i = 0; i <= delay_steps; ++i) x[static_cast<std::size_t>(i)] = x0;

  const double h = p.dt;
  for (Eigen::Index t = delay_steps; t + 1 < total; ++t) {
    const double xt = x[static_cast<std::size_t>(t)];
    const double xd0 = x[static_cast<std::size_t>(t - delay_steps)];
    const double xd1 = x[static_cast<std::size_t>(t - delay_steps + 1)];
    const double xd_half = 0.5 * (xd0 + xd1);
    const double k1 = mg_deriv(xt, xd0, p.a, p.b);
    const double k2 = mg_deriv(xt + 0.5 * h * k1, xd_half, p.a, p.b);
    const double k3 = mg_deriv(xt + 0.5 * h * k2, xd_half, p.a, p.b);
    const double k4 = mg_deriv(xt + h * k3, xd1, p.a, p.b);
    x[static_cast<std::size_t>(t + 1)] = xt + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }

  Eigen::VectorXd out(length);
  const Eigen::Index start = delay_steps + p.discard;
  for (Eigen::Index i = 0; i < length; ++i)
    out(i) = x[static_cast<std::size_t>(start + i * p.subsample)];
  return TimeSeries::scalar(std::move(out), "mackey_glass");
}

CoupledMapsResult gen_coupled_maps(Eigen::Index length, double coupling, double omega,
                                   std::uint64_t seed) {
  if (length < 1) throw std::invalid_argument("gen_coupled_maps: length must be >= 1");
  if (coupling < 0.0 || coupling > 1.0)
    throw std::invalid_argument("gen_coupled_maps: coupling must be in [0,1]");

  auto g = [omega](double z) { return omega * z + (1.0 - omega) * 4.0 * z * (1.0 - z); };

  Rng rng(seed);
  double x = unit_uniform(rng);
  double y = unit_uniform(rng);

  CoupledMapsResult res;
  Eigen::VectorXd xs(length), ys(length);
  const Eigen::Index transient = 100;
  for (Eigen::Index t = 0; t < transient + length; ++t) {
    const double gx = g(x);
    const double gy = g(y);
    double xn = gx;
    double yn = (1.0 - coupling) * gy + coupling * gx;
    if (xn < 0.0 || xn > 1.0) {
      xn = std::clamp(xn, 0.0, 1.0);
      res.clamped = true;
    }
    if (yn < 0.0 || yn > 1.0) {
      yn = std::clamp(yn, 0.0, 1.0);
      res.clamped = true;
    }
    x = xn;
    y = yn;
    if (t >= transient) {
      xs(t - transient) = x;
      ys(t - transient) = y;
    }
  }
  res.driver = TimeSeries::scalar(std::move(xs), "x");
  res.response = TimeSeries::scalar(std::move(ys), "y");
  return res;
}

TimeSeries gen_iid_uniform(Eigen::Index length, int dim, double lo, double hi,
                           std::uint64_t seed) {
  if (length < 1) throw std::invalid_argument("gen_iid_uniform: length must be >= 1");
  if (dim < 1) throw std::invalid_argument("gen_iid_uniform: dim must be >= 1");
  if (!(lo < hi)) throw std::invalid_argument("gen_iid_uniform: lo must be < hi");
  Rng rng(seed);
  Eigen::MatrixXd values(length, dim);
  for (Eigen::Index t = 0; t < length; ++t)
    for (int c = 0; c < dim; ++c) values(t, c) = uniform(rng, lo, hi);
  std::vector<std::string> names;
  for (int c = 0; c < dim; ++c) names.push_back("u" + std::to_string(c));
  return TimeSeries(std::move(names), std::move(values));
}

PatternDetectionResult gen_pattern_detection(Eigen::Index length, int pattern_length,
                                             int n_patterns, double noise,
                                             std::uint64_t seed) {
  if (length < 1) throw std::invalid_argument("gen_pattern_detection: length must be >= 1");
  if (pattern_length < 2)
    throw std::invalid_argument("gen_pattern_detection: pattern_length must be >= 2");
  if (n_patterns < 1)
    throw std::invalid_argument("gen_pattern_detection: n_patterns must be >= 1");
  if (noise < 0.0) throw std::invalid_argument("gen_pattern_detection: noise must be >= 0");

  Rng rng(seed);
  std::vector<Eigen::VectorXd> patterns;
  patterns.reserve(static_cast<std::size_t>(n_patterns));
  for (int pidx = 0; pidx < n_patterns; ++pidx) {
    Eigen::VectorXd pat(pattern_length);
    for (int i = 0; i < pattern_length; ++i) pat(i) = uniform(rng, -1.0, 1.0);
    patterns.push_back(std::move(pat));
  }

  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, n_patterns - 1);
  Eigen::VectorXd input(length), target = Eigen::VectorXd::Zero(length);
  Eigen::Index t = 0;
  while (t < length) {
    const int chosen = pick(rng);
    const auto& pat = patterns[static_cast<std::size_t>(chosen)];
    for (int i = 0; i < pattern_length && t < length; ++i, ++t) {
      input(t) = pat(i) + (noise > 0.0 ? noise * gauss(rng) : 0.0);
      if (chosen == 0 && i == pattern_length - 1) target(t) = 1.0;
    }
  }
  PatternDetectionResult res;
  res.input = TimeSeries::scalar(std::move(input), "u");
  res.target = TimeSeries::scalar(std::move(target), "y");
  return res;
}

}  // namespace rescomp::tasks

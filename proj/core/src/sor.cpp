#include "rescomp/sor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rescomp/rng.hpp"

namespace rescomp::sor {

double Schedule::at(Eigen::Index n) const {
  if (initial <= 0.0 || final <= 0.0) throw std::invalid_argument("Schedule: values must be > 0");
  if (horizon <= 0) return final;
  const double frac = std::min<double>(1.0, static_cast<double>(n) / static_cast<double>(horizon));
  return initial * std::pow(final / initial, frac);
}

void SorParams::validate() const {
  if (n_units < 1) throw std::invalid_argument("SorParams: n_units must be >= 1");
  if (input_dim < 1) throw std::invalid_argument("SorParams: input_dim must be >= 1");
  if (alpha < 0.0 || beta < 0.0)
    throw std::invalid_argument("SorParams: distance scales must be >= 0");
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw std::invalid_argument("SorParams: gamma must be in (0,1]");
  if (eta.initial < eta.final || bh.initial < bh.final)
    throw std::invalid_argument("SorParams: schedules must be non-increasing");
}

std::pair<int, int> SorParams::grid() const {
  if (grid_rows > 0 && grid_cols > 0) {
    if (grid_rows * grid_cols < n_units)
      throw std::invalid_argument("SorParams: grid smaller than n_units");
    return {grid_rows, grid_cols};
  }
  const int rows = std::max(1, static_cast<int>(std::floor(std::sqrt(n_units))));
  const int cols = (n_units + rows - 1) / rows;
  return {rows, cols};
}

SorState sor_init(const SorParams& p) {
  p.validate();
  Rng rng(p.seed);
  SorState s;
  s.v_in.resize(p.input_dim, p.n_units);
  for (int i = 0; i < p.n_units; ++i)
    for (int d = 0; d < p.input_dim; ++d) s.v_in(d, i) = unit_uniform(rng);
  s.v.resize(p.n_units, p.n_units);
  for (int i = 0; i < p.n_units; ++i)
    for (int d = 0; d < p.n_units; ++d) s.v(d, i) = unit_uniform(rng);
  s.x = Eigen::VectorXd::Zero(p.n_units);
  return s;
}

void sor_step(SorState& s, const SorParams& p, const Eigen::VectorXd& u) {
  if (u.size() != p.input_dim) throw std::invalid_argument("sor_step: input dimension mismatch");
  if (s.x.size() != p.n_units) throw std::invalid_argument("sor_step: state dimension mismatch");
  Eigen::VectorXd activation(p.n_units);
  for (int i = 0; i < p.n_units; ++i) {
    const double din = (s.v_in.col(i) - u).squaredNorm();
    const double drec = (s.v.col(i) - s.x).squaredNorm();
    activation(i) = std::exp(-p.alpha * din - p.beta * drec);
  }
  s.x = (1.0 - p.gamma) * s.x + p.gamma * activation;
}

Eigen::Index bmu(const SorState& s) {
  if (s.x.size() == 0) throw std::invalid_argument("bmu: empty state");
  if (!s.x.allFinite()) throw std::invalid_argument("bmu: non-finite activation");
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < s.x.size(); ++i)
    if (s.x(i) > s.x(best)) best = i;  // strict: ties keep the lowest index
  return best;
}

namespace {

int manhattan(const std::pair<int, int>& grid, int a, int b) {
  const int cols = grid.second;
  const int ra = a / cols, ca = a % cols;
  const int rb = b / cols, cb = b % cols;
  return std::abs(ra - rb) + std::abs(ca - cb);
}

}  // namespace

void sor_learn_step(SorState& s, const SorParams& p, const Eigen::VectorXd& u,
                    Eigen::Index n) {
  const double eta = p.eta.at(n);
  if (eta == 0.0) return;
  const double width = p.bh.at(n);
  const int nu = p.n_units;

  Eigen::VectorXd h(nu);
  if (p.rule == LearningRule::Som) {
    const auto grid = p.grid();
    const int best = static_cast<int>(bmu(s));
    for (int i = 0; i < nu; ++i) {
      const double d = manhattan(grid, i, best);
      h(i) = std::exp(-(d * d) / (width * width));
    }
  } else {
    // NeuralGas: rank in descending activation order, rank 0 = BMU
    std::vector<int> order(static_cast<std::size_t>(nu));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&s](int a, int b) { return s.x(a) > s.x(b); });
    for (int rank = 0; rank < nu; ++rank)
      h(order[static_cast<std::size_t>(rank)]) = std::exp(-rank / width);
  }

  for (int i = 0; i < nu; ++i) {
    const double gain = eta * h(i);
    if (gain == 0.0) continue;
    s.v_in.col(i) += gain * (u - s.v_in.col(i));
    s.v.col(i) += gain * (s.x - s.v.col(i));
  }
}

SorState sor_train(const TimeSeries& inputs, const SorParams& p) {
  SorState s = sor_init(p);
  for (Eigen::Index n = 0; n < inputs.length(); ++n) {
    const Eigen::VectorXd u = inputs.values.row(n).transpose();
    sor_step(s, p, u);
    sor_learn_step(s, p, u, n);
  }
  return s;
}

TimeSeries sor_run(const SorState& trained, const SorParams& p, const TimeSeries& inputs) {
  SorState s = trained;
  s.x.setZero();
  Eigen::MatrixXd states(inputs.length(), p.n_units);
  for (Eigen::Index n = 0; n < inputs.length(); ++n) {
    sor_step(s, p, inputs.values.row(n).transpose());
    states.row(n) = s.x.transpose();
  }
  std::vector<std::string> names;
  for (int i = 0; i < p.n_units; ++i) names.push_back("x" + std::to_string(i));
  return TimeSeries(std::move(names), std::move(states));
}

std::vector<SorState> stack_hierarchy(const std::vector<SorParams>& layers,
                                      const TimeSeries& inputs,
                                      Eigen::Index per_layer_steps) {
  if (layers.empty()) throw std::invalid_argument("stack_hierarchy: no layers");
  if (per_layer_steps < 0)
    throw std::invalid_argument("stack_hierarchy: per_layer_steps must be >= 0");

  std::vector<SorState> trained;
  trained.reserve(layers.size());
  TimeSeries current = inputs;
  for (std::size_t li = 0; li < layers.size(); ++li) {
    const SorParams& p = layers[li];
    const int expected = li == 0 ? static_cast<int>(inputs.dim())
                                 : layers[li - 1].n_units;
    if (p.input_dim != expected)
      throw std::invalid_argument("stack_hierarchy: layer " + std::to_string(li) +
                                  " input_dim does not match previous layer");

    SorState s = sor_init(p);
    const Eigen::Index train_steps = std::min(per_layer_steps, current.length());
    for (Eigen::Index n = 0; n < train_steps; ++n) {
      const Eigen::VectorXd u = current.values.row(n).transpose();
      sor_step(s, p, u);
      sor_learn_step(s, p, u, n);
    }
    // freeze, then feed the full activation sequence upward
    if (li + 1 < layers.size()) current = sor_run(s, p, current);
    trained.push_back(std::move(s));
  }
  return trained;
}

}  // namespace rescomp::sor

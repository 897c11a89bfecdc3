#include "rescomp/memory_capacity.hpp"

#include <stdexcept>

#include "rescomp/ridge.hpp"

namespace rescomp {

double squared_correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size() || a.size() < 2)
    throw std::invalid_argument("squared_correlation: length mismatch or too short");
  const double n = static_cast<double>(a.size());
  const double ma = a.mean(), mb = b.mean();
  const Eigen::VectorXd da = a.array() - ma, db = b.array() - mb;
  const double va = da.squaredNorm() / n, vb = db.squaredNorm() / n;
  if (va <= 0.0 || vb <= 0.0) return 0.0;
  const double cov = da.dot(db) / n;
  return (cov * cov) / (va * vb);
}

MeasureReport memory_capacity(const Reservoir& r, const TimeSeries& input,
                              const MemoryCapacityOptions& opt) {
  if (input.dim() != 1)
    throw std::invalid_argument("memory_capacity: input must be a scalar series");
  if (opt.k_max < 1) throw std::invalid_argument("memory_capacity: k_max must be >= 1");
  const Eigen::Index t_len = input.length();
  // every delay target needs t - k >= 0; start all regressions at the same step
  const Eigen::Index t0 = std::max<Eigen::Index>(opt.washout, opt.k_max);
  const Eigen::Index usable = t_len - t0;
  if (opt.k_max >= usable)
    throw std::invalid_argument("memory_capacity: k_max >= usable length after washout");

  StateTrajectory traj = run(r, input, /*washout=*/0);
  const Eigen::VectorXd v = input.values.col(0);
  const Eigen::Index n = r.params.n_units;

  // features [x(t); 1; v(t)] for t in [t0, T)
  Eigen::MatrixXd phi(usable, n + 2);
  phi.block(0, 0, usable, n) = traj.states.bottomRows(usable);
  phi.col(n).setOnes();
  phi.col(n + 1) = v.tail(usable);

  const Eigen::Index n_train = usable / 2;
  const Eigen::Index n_test = usable - n_train;
  RidgeSolver solver(phi.topRows(n_train));
  const Eigen::MatrixXd phi_test = phi.bottomRows(n_test);

  MeasureReport rep;
  rep.name = "memory_capacity";
  double total = 0.0;
  auto& curve = rep.curves["mc_k"];
  curve.reserve(static_cast<std::size_t>(opt.k_max));
  for (int k = 1; k <= opt.k_max; ++k) {
    // target v(t - k) aligned with feature row t
    Eigen::VectorXd target(usable);
    for (Eigen::Index i = 0; i < usable; ++i) target(i) = v(t0 + i - k);
    const Eigen::VectorXd w = solver.solve(Eigen::VectorXd(target.head(n_train)),
                                           opt.ridge_lambda);
    const Eigen::VectorXd pred = phi_test * w;
    double mc_k = squared_correlation(Eigen::VectorXd(target.tail(n_test)), pred);
    mc_k = std::min(1.0, std::max(0.0, mc_k));
    curve.emplace_back(static_cast<double>(k), mc_k);
    total += mc_k;
  }
  rep.scalars["mc_total"] = total;
  rep.metadata["k_max"] = std::to_string(opt.k_max);
  rep.metadata["ridge_lambda"] = format_double(opt.ridge_lambda);
  rep.metadata["washout"] = std::to_string(t0);
  rep.metadata["samples"] = std::to_string(usable);
  rep.metadata["split"] = "train/test halves";
  rep.metadata["input_channel"] = input.channels.empty() ? "" : input.channels[0];
  if (usable < 20 * static_cast<Eigen::Index>(opt.k_max)) rep.flags.push_back("low_sample");
  return rep;
}

}  // namespace rescomp

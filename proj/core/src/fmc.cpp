#include "rescomp/measures/fmc.hpp"

#include <stdexcept>

namespace rescomp::measures {

MeasureReport FmcReport::to_measure_report() const {
  MeasureReport rep;
  rep.name = "fisher_memory_curve";
  auto& curve = rep.curves["j_k"];
  for (Eigen::Index k = 0; k < j.size(); ++k)
    curve.emplace_back(static_cast<double>(k), j(k));
  rep.scalars["j_0"] = j.size() ? j(0) : 0.0;
  rep.metadata["noise_variance"] = format_double(noise_variance);
  rep.metadata["covariance_condition"] = format_double(covariance_condition);
  return rep;
}

FmcReport fisher_memory_curve(const Reservoir& r, double noise_variance, int k_max) {
  if (r.params.nonlinearity != Nonlinearity::Linear)
    throw std::invalid_argument("fisher_memory_curve: requires a linear reservoir");
  if (r.params.input_dim != 1)
    throw std::invalid_argument("fisher_memory_curve: requires a scalar input channel");
  if (noise_variance <= 0.0)
    throw std::invalid_argument("fisher_memory_curve: noise variance must be > 0");
  if (k_max < 0) throw std::invalid_argument("fisher_memory_curve: k_max must be >= 0");
  const double rho = spectral_radius(r.w_res);
  if (rho >= 1.0)
    throw std::invalid_argument(
        "fisher_memory_curve: spectral radius >= 1, no stationary covariance");

  const Eigen::Index n = r.params.n_units;
  const Eigen::MatrixXd& w = r.w_res;
  const Eigen::MatrixXd eps_eye = noise_variance * Eigen::MatrixXd::Identity(n, n);

  Eigen::MatrixXd c = eps_eye;
  for (int iter = 0; iter < 100000; ++iter) {
    Eigen::MatrixXd next = w * c * w.transpose() + eps_eye;
    const double delta = (next - c).cwiseAbs().maxCoeff();
    c = std::move(next);
    if (delta < 1e-12 * std::max(1.0, c.cwiseAbs().maxCoeff())) break;
  }

  Eigen::LDLT<Eigen::MatrixXd> ldlt(c);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("fisher_memory_curve: covariance factorization failed");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c);
  const Eigen::VectorXd evals = es.eigenvalues();

  FmcReport rep;
  rep.noise_variance = noise_variance;
  rep.covariance_condition = evals(n - 1) / evals(0);
  rep.j.resize(k_max + 1);
  Eigen::VectorXd q = r.w_in.col(0);
  for (int k = 0; k <= k_max; ++k) {
    rep.j(k) = q.dot(ldlt.solve(q));
    q = w * q;
  }
  return rep;
}

}  // namespace rescomp::measures

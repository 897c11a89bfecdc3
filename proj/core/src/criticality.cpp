#include "rescomp/measures/criticality.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rescomp::measures {

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Stable: return "stable";
    case Regime::Critical: return "critical";
    case Regime::Unstable: return "unstable";
  }
  return "stable";
}

MeasureReport CriticalityReport::to_measure_report() const {
  MeasureReport rep;
  rep.name = "criticality";
  rep.scalars["lambda"] = lambda;
  rep.metadata["perturbation"] = format_double(perturbation);
  rep.metadata["regime"] = to_string(regime);
  rep.metadata["regime_tolerance"] = format_double(regime_tolerance);
  if (underflow) rep.flags.push_back("perturbation_underflow");
  return rep;
}

CriticalityReport criticality_estimate(const Reservoir& r, const TimeSeries& input,
                                       const CriticalityOptions& opt) {
  if (opt.horizon < 10)
    throw std::invalid_argument("criticality_estimate: horizon must be >= 10");
  if (opt.trials < 1) throw std::invalid_argument("criticality_estimate: trials must be >= 1");
  if (opt.perturbation <= 0.0)
    throw std::invalid_argument("criticality_estimate: perturbation must be > 0");
  if (input.length() < opt.warmup + opt.horizon)
    throw std::invalid_argument("criticality_estimate: input shorter than warmup + horizon");

  const Eigen::Index n = r.params.n_units;
  const double delta = opt.perturbation;

  CriticalityReport rep;
  rep.perturbation = delta;
  rep.regime_tolerance = opt.regime_tolerance;

  double lambda_sum = 0.0;
  bool underflow = false;
  for (int trial = 0; trial < opt.trials && !underflow; ++trial) {
    Eigen::VectorXd xa = Eigen::VectorXd::Zero(n);
    for (Eigen::Index t = 0; t < opt.warmup; ++t)
      xa = step(r, xa, input.values.row(t).transpose());
    Eigen::VectorXd xb = xa;
    xb(trial % n) += delta;

    double log_growth = 0.0;
    for (Eigen::Index t = 0; t < opt.horizon; ++t) {
      const Eigen::VectorXd u = input.values.row(opt.warmup + t).transpose();
      xa = step(r, xa, u);
      xb = step(r, xb, u);
      Eigen::VectorXd d = xb - xa;
      const double norm = d.norm();
      if (norm == 0.0) {
        underflow = true;
        break;
      }
      log_growth += std::log(norm / delta);
      // renormalize so the difference stays infinitesimal relative to saturation
      xb = xa + d * (delta / norm);
    }
    lambda_sum += log_growth / static_cast<double>(opt.horizon);
  }

  rep.underflow = underflow;
  rep.lambda = underflow ? -std::numeric_limits<double>::infinity()
                         : lambda_sum / static_cast<double>(opt.trials);
  if (rep.lambda < -opt.regime_tolerance)
    rep.regime = Regime::Stable;
  else if (rep.lambda > opt.regime_tolerance)
    rep.regime = Regime::Unstable;
  else
    rep.regime = Regime::Critical;
  return rep;
}

}  // namespace rescomp::measures

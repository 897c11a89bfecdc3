#include "rescomp/measures/ipc.hpp"

#include <algorithm>
#include <stdexcept>

#include "rescomp/ridge.hpp"

namespace rescomp::measures {

int IpcBasisFunction::total_degree() const {
  int d = 0;
  for (const auto& [delay, degree] : terms) d += degree;
  return d;
}

int IpcBasisFunction::max_delay() const {
  int m = 0;
  for (const auto& [delay, degree] : terms) m = std::max(m, delay);
  return m;
}

std::string IpcBasisFunction::descriptor() const {
  std::string s;
  for (const auto& [delay, degree] : terms) {
    if (!s.empty()) s += '*';
    s += std::to_string(delay) + ":" + std::to_string(degree);
  }
  return s;
}

double legendre(int degree, double z) {
  // Bonnet recurrence
  if (degree == 0) return 1.0;
  if (degree == 1) return z;
  double pm1 = 1.0, p = z;
  for (int d = 2; d <= degree; ++d) {
    const double next = ((2.0 * d - 1.0) * z * p - (d - 1.0) * pm1) / d;
    pm1 = p;
    p = next;
  }
  return p;
}

namespace {

void enumerate(int max_degree, int min_delay, int max_delay, int next_delay,
               IpcBasisFunction& current, std::vector<IpcBasisFunction>& out) {
  const int used = current.total_degree();
  for (int delay = next_delay; delay <= max_delay; ++delay) {
    for (int degree = 1; degree + used <= max_degree; ++degree) {
      current.terms.emplace_back(delay, degree);
      out.push_back(current);
      enumerate(max_degree, min_delay, max_delay, delay + 1, current, out);
      current.terms.pop_back();
    }
  }
}

}  // namespace

std::vector<IpcBasisFunction> legendre_basis(int max_degree, int min_delay, int max_delay) {
  if (max_degree < 1) throw std::invalid_argument("legendre_basis: max_degree must be >= 1");
  if (min_delay > max_delay) throw std::invalid_argument("legendre_basis: empty delay range");
  std::vector<IpcBasisFunction> out;
  IpcBasisFunction current;
  enumerate(max_degree, min_delay, max_delay, min_delay, current, out);
  // group by total degree, then lexicographic; stable and readable output order
  std::stable_sort(out.begin(), out.end(),
                   [](const IpcBasisFunction& a, const IpcBasisFunction& b) {
                     return a.total_degree() < b.total_degree();
                   });
  return out;
}

MeasureReport IpcReport::to_measure_report() const {
  MeasureReport rep;
  rep.name = "ipc";
  rep.scalars["ipc_total"] = total;
  rep.scalars["n_basis"] = static_cast<double>(capacities.size());
  auto& curve = rep.curves["capacity"];
  for (std::size_t i = 0; i < capacities.size(); ++i)
    curve.emplace_back(static_cast<double>(i), capacities[i].second);
  rep.metadata["basis"] = basis_descriptor;
  rep.metadata["input"] = input_descriptor;
  rep.metadata["samples"] = std::to_string(samples);
  return rep;
}

IpcReport ipc(const Reservoir& r, const TimeSeries& input,
              const std::vector<IpcBasisFunction>& basis, const IpcOptions& opt) {
  if (basis.empty()) throw std::invalid_argument("ipc: empty basis");
  if (input.dim() != 1) throw std::invalid_argument("ipc: input must be a scalar series");
  const Eigen::VectorXd u = input.values.col(0);
  if ((u.array().abs() >= 1.0).any())
    throw std::invalid_argument("ipc: input values must lie in (-1,1)");

  int max_delay = 0;
  for (const auto& z : basis) max_delay = std::max(max_delay, z.max_delay());
  const Eigen::Index t0 = std::max<Eigen::Index>(opt.washout, max_delay);
  const Eigen::Index t_len = input.length();
  if (t_len - t0 < 4) throw std::invalid_argument("ipc: input too short");
  const Eigen::Index usable = t_len - t0;

  StateTrajectory traj = run(r, input, /*washout=*/0);
  const Eigen::Index n = r.params.n_units;

  // readouts combine states only (plus a bias column)
  Eigen::MatrixXd phi(usable, n + 1);
  phi.block(0, 0, usable, n) = traj.states.bottomRows(usable);
  phi.col(n).setOnes();

  const Eigen::Index n_train = usable / 2;
  const Eigen::Index n_test = usable - n_train;
  RidgeSolver solver(phi.topRows(n_train));
  const Eigen::MatrixXd phi_test = phi.bottomRows(n_test);

  IpcReport rep;
  rep.samples = usable;
  rep.input_descriptor = "scalar, " + std::to_string(t_len) + " steps, range (-1,1)";
  rep.basis_descriptor = "legendre products, " + std::to_string(basis.size()) + " functions";
  rep.capacities.reserve(basis.size());

  Eigen::VectorXd z(usable);
  for (const auto& fn : basis) {
    for (Eigen::Index i = 0; i < usable; ++i) {
      const Eigen::Index t = t0 + i;
      double v = 1.0;
      for (const auto& [delay, degree] : fn.terms) v *= legendre(degree, u(t - delay));
      z(i) = v;
    }
    const double denom = z.tail(n_test).squaredNorm() / static_cast<double>(n_test);
    double capacity = 0.0;
    if (denom > 0.0) {
      const Eigen::VectorXd w = solver.solve(Eigen::VectorXd(z.head(n_train)),
                                             opt.ridge_lambda);
      const double mse = (phi_test * w - z.tail(n_test)).squaredNorm() /
                         static_cast<double>(n_test);
      capacity = std::clamp(1.0 - mse / denom, 0.0, 1.0);
    }
    rep.capacities.emplace_back(fn.descriptor(), capacity);
    rep.total += capacity;
  }
  return rep;
}

}  // namespace rescomp::measures

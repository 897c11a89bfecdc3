#pragma once

#include <string>
#include <vector>

#include "rescomp/measure_report.hpp"
#include "rescomp/reservoir.hpp"
#include "rescomp/time_series.hpp"

namespace rescomp::measures {

/// One target function z(t) = prod_i P_{degree_i}(u(t - delay_i)), a product
/// of Legendre polynomials of delayed inputs.
struct IpcBasisFunction {
  std::vector<std::pair<int, int>> terms;  // (delay, degree), degree >= 1

  int total_degree() const;
  int max_delay() const;
  std::string descriptor() const;  // "delay:degree" terms joined by '*'
};

/// All products with total degree <= max_degree over delays in [min_delay,
/// max_delay], distinct delays per product.
std::vector<IpcBasisFunction> legendre_basis(int max_degree, int min_delay, int max_delay);

/// Legendre polynomial P_d on [-1,1].
double legendre(int degree, double z);

struct IpcOptions {
  double ridge_lambda = 1e-6;
  Eigen::Index washout = 100;
};

struct IpcReport {
  std::vector<std::pair<std::string, double>> capacities;  // descriptor -> capacity
  double total = 0.0;
  std::string basis_descriptor;
  std::string input_descriptor;
  Eigen::Index samples = 0;

  MeasureReport to_measure_report() const;
};

/// Information processing capacity: per basis function, train a linear
/// readout on states only and report 1 - MSE/<z^2> on the held-out half,
/// clamped to [0,1]. The input must lie in (-1,1) (i.i.d. uniform by
/// construction of the measure).
IpcReport ipc(const Reservoir& r, const TimeSeries& input,
              const std::vector<IpcBasisFunction>& basis, const IpcOptions& opt = {});

}  // namespace rescomp::measures

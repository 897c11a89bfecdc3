#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

namespace rescomp::info {

enum class Discretization { EqualWidth, EqualFrequency, None };

struct DiscretizationSpec {
  Discretization scheme = Discretization::EqualWidth;
  int bins = 8;
  std::optional<std::pair<double, double>> range;  // equal_width only; default observed min/max
};

/// Integer symbol stream over 0..alphabet-1.
struct SymbolSeries {
  std::vector<int> symbols;
  int alphabet = 0;
  bool degenerate = false;  // constant input hit a data-driven scheme

  std::size_t size() const { return symbols.size(); }
};

/// Map a real-valued channel to symbols. Equal-width bin edges are uniform
/// over the range, values on the upper edge map into the last bin.
/// Equal-frequency edges come from sorted sample quantiles.
SymbolSeries discretize(const Eigen::VectorXd& x, const DiscretizationSpec& spec);

/// Wrap an already-symbolic (nonnegative integer valued) sequence.
SymbolSeries to_symbols(const std::vector<int>& x);

}  // namespace rescomp::info

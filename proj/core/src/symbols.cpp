#include "rescomp/info/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rescomp::info {

namespace {

SymbolSeries equal_width(const Eigen::VectorXd& x, const DiscretizationSpec& spec) {
  double lo, hi;
  if (spec.range) {
    lo = spec.range->first;
    hi = spec.range->second;
  } else {
    lo = x.minCoeff();
    hi = x.maxCoeff();
  }
  SymbolSeries out;
  out.alphabet = spec.bins;
  out.symbols.resize(static_cast<std::size_t>(x.size()));
  if (hi <= lo) {
    out.degenerate = true;  // constant series: everything in bin 0
    std::fill(out.symbols.begin(), out.symbols.end(), 0);
    return out;
  }
  const double width = (hi - lo) / spec.bins;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    int b = static_cast<int>(std::floor((x(i) - lo) / width));
    b = std::clamp(b, 0, spec.bins - 1);  // upper edge folds into the last bin
    out.symbols[static_cast<std::size_t>(i)] = b;
  }
  return out;
}

SymbolSeries equal_frequency(const Eigen::VectorXd& x, const DiscretizationSpec& spec) {
  const Eigen::Index n = x.size();
  std::vector<double> sorted(x.data(), x.data() + n);
  std::sort(sorted.begin(), sorted.end());

  SymbolSeries out;
  out.alphabet = spec.bins;
  out.symbols.resize(static_cast<std::size_t>(n));
  if (sorted.front() == sorted.back()) {
    out.degenerate = true;
    std::fill(out.symbols.begin(), out.symbols.end(), 0);
    return out;
  }
  // interior edges at the empirical quantiles; ties share a bin
  std::vector<double> edges(static_cast<std::size_t>(spec.bins - 1));
  for (int j = 1; j < spec.bins; ++j) {
    const auto idx = static_cast<std::size_t>(
        static_cast<long long>(j) * n / spec.bins);
    edges[static_cast<std::size_t>(j - 1)] = sorted[idx];
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    // bin = number of edges <= value: an edge value starts its own bin,
    // so ties never straddle a boundary
    const auto it = std::upper_bound(edges.begin(), edges.end(), x(i));
    out.symbols[static_cast<std::size_t>(i)] = static_cast<int>(it - edges.begin());
  }
  return out;
}

}  // namespace

SymbolSeries discretize(const Eigen::VectorXd& x, const DiscretizationSpec& spec) {
  if (x.size() == 0) throw std::invalid_argument("discretize: empty series");
  if (!x.allFinite()) throw std::invalid_argument("discretize: non-finite values");
  if (spec.scheme == Discretization::None) {
    SymbolSeries out;
    out.symbols.resize(static_cast<std::size_t>(x.size()));
    int max_sym = 0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double v = x(i);
      if (v < 0.0 || v != std::floor(v))
        throw std::invalid_argument("discretize: scheme none requires nonnegative integers");
      out.symbols[static_cast<std::size_t>(i)] = static_cast<int>(v);
      max_sym = std::max(max_sym, static_cast<int>(v));
    }
    out.alphabet = max_sym + 1;
    return out;
  }
  if (spec.bins < 2) throw std::invalid_argument("discretize: bins must be >= 2");
  return spec.scheme == Discretization::EqualWidth ? equal_width(x, spec)
                                                   : equal_frequency(x, spec);
}

SymbolSeries to_symbols(const std::vector<int>& x) {
  SymbolSeries out;
  out.symbols = x;
  int max_sym = 0;
  for (int v : x) {
    if (v < 0) throw std::invalid_argument("to_symbols: negative symbol");
    max_sym = std::max(max_sym, v);
  }
  out.alphabet = x.empty() ? 0 : max_sym + 1;
  return out;
}

}  // namespace rescomp::info

#include "rescomp/info/prob_table.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace rescomp::info {

ProbabilityTable::ProbabilityTable(std::vector<int> radices, std::vector<std::string> labels)
    : radices_(std::move(radices)), labels_(std::move(labels)) {
  if (radices_.empty()) throw std::invalid_argument("ProbabilityTable: no dimensions");
  double log_cells = 0.0;
  for (int r : radices_) {
    if (r < 1) throw std::invalid_argument("ProbabilityTable: radix must be >= 1");
    log_cells += std::log2(static_cast<double>(r));
  }
  if (log_cells > 63.0)
    throw std::invalid_argument("ProbabilityTable: joint alphabet exceeds 2^63 cells");
}

std::uint64_t ProbabilityTable::pack(std::span<const int> symbols) const {
  if (symbols.size() != radices_.size())
    throw std::invalid_argument("ProbabilityTable: tuple arity mismatch");
  std::uint64_t key = 0;
  for (std::size_t d = 0; d < symbols.size(); ++d) {
    const int s = symbols[d];
    if (s < 0 || s >= radices_[d])
      throw std::invalid_argument("ProbabilityTable: symbol out of range");
    key = key * static_cast<std::uint64_t>(radices_[d]) + static_cast<std::uint64_t>(s);
  }
  return key;
}

void ProbabilityTable::add(std::span<const int> symbols, std::int64_t count) {
  counts_[pack(symbols)] += count;
  total_ += count;
}

double ProbabilityTable::entropy_bits(bool miller_madow) const {
  if (total_ == 0) return 0.0;
  const double n = static_cast<double>(total_);
  // summing in sorted-count order makes the result a function of the count
  // multiset alone, so tables with identical marginals cancel exactly
  std::vector<std::int64_t> counts;
  counts.reserve(counts_.size());
  for (const auto& [key, c] : counts_)
    if (c > 0) counts.push_back(c);
  std::sort(counts.begin(), counts.end());
  double h = 0.0;
  for (std::int64_t c : counts) {
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  if (miller_madow && occupied_cells() > 0)
    h += static_cast<double>(occupied_cells() - 1) / (2.0 * n * std::numbers::ln2_v<double>);
  return h;
}

double ProbabilityTable::probability(std::span<const int> symbols) const {
  if (total_ == 0) return 0.0;
  const auto it = counts_.find(pack(symbols));
  if (it == counts_.end()) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(total_);
}

}  // namespace rescomp::info

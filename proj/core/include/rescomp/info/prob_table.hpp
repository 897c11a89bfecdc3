#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace rescomp::info {

/// Joint frequency table over tuples of symbols, the backing store of all
/// plug-in entropy estimators. Keys are mixed-radix packed into 64 bits.
class ProbabilityTable {
 public:
  ProbabilityTable(std::vector<int> radices, std::vector<std::string> labels = {});

  void add(std::span<const int> symbols, std::int64_t count = 1);

  /// -sum p log2 p with 0 log 0 = 0. Optional Miller-Madow correction
  /// adds (occupied - 1) / (2 N ln 2).
  double entropy_bits(bool miller_madow = false) const;

  std::int64_t total() const { return total_; }
  std::size_t occupied_cells() const { return counts_.size(); }
  const std::vector<int>& radices() const { return radices_; }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Probability of one cell (0 for unseen tuples).
  double probability(std::span<const int> symbols) const;

 private:
  std::uint64_t pack(std::span<const int> symbols) const;

  std::vector<int> radices_;
  std::vector<std::string> labels_;
  std::unordered_map<std::uint64_t, std::int64_t> counts_;
  std::int64_t total_ = 0;
};

}  // namespace rescomp::info

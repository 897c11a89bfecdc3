#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rescomp/info/prob_table.hpp"
#include "rescomp/info/symbols.hpp"

namespace rescomp::info {

/// History lengths for embedded estimators: k past values of the target,
/// l past values of the source, and the lag between the past block and
/// the next value.
struct EmbeddingSpec {
  int k = 1;      // target history, >= 0 where applicable
  int l = 1;      // source history, >= 1
  int delay = 1;  // block-to-next lag
};

struct EstimatorOptions {
  bool miller_madow = false;
  /// Flag results whose largest table averages fewer samples per occupied cell.
  double min_samples_per_cell = 10.0;
};

struct InfoEstimate {
  double value_bits = 0.0;
  int k = 0;
  int l = 0;
  int bins = 0;
  std::int64_t samples = 0;
  std::vector<std::string> flags;
  /// Optional normalization by the joint entropy H(X;X') (exposed, not
  /// used by any acceptance path).
  std::optional<double> normalized;

  bool has_flag(const std::string& f) const;
};

std::string info_estimate_to_json(const InfoEstimate& e);

/// Plug-in Shannon entropy of a symbol stream, in bits.
double entropy_bits(const SymbolSeries& x, bool miller_madow = false);

/// I(X;Y) = H(X) + H(Y) - H(X,Y) over the joint plug-in table.
InfoEstimate mutual_information(const SymbolSeries& x, const SymbolSeries& y,
                                const EstimatorOptions& opt = {});

/// Active information storage A(X,k) = I(X^(k); X').
InfoEstimate active_information_storage(const SymbolSeries& x, int k,
                                        const EstimatorOptions& opt = {});

/// Input-conditioned storage A^U_X(k): the current input u' is conditioned
/// out of the storage estimate.
InfoEstimate input_conditioned_ais(const SymbolSeries& x, const SymbolSeries& u,
                                   int k, const EstimatorOptions& opt = {});

/// Transfer entropy T_{X->Y}(k,l) = I(X^(l); Y' | Y^(k)).
InfoEstimate transfer_entropy(const SymbolSeries& source, const SymbolSeries& target,
                              const EmbeddingSpec& spec = {},
                              const EstimatorOptions& opt = {});

}  // namespace rescomp::info

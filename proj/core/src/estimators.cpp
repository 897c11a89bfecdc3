#include "rescomp/info/estimators.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

namespace rescomp::info {

bool InfoEstimate::has_flag(const std::string& f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

std::string info_estimate_to_json(const InfoEstimate& e) {
  nlohmann::json j;
  j["value_bits"] = e.value_bits;
  j["k"] = e.k;
  j["l"] = e.l;
  j["bins"] = e.bins;
  j["samples"] = e.samples;
  j["flags"] = e.flags;
  if (e.normalized) j["normalized"] = *e.normalized;
  return j.dump();
}

double entropy_bits(const SymbolSeries& x, bool miller_madow) {
  if (x.symbols.empty()) throw std::invalid_argument("entropy: empty series");
  ProbabilityTable t({std::max(1, x.alphabet)});
  for (int s : x.symbols) {
    const int sym[1] = {s};
    t.add(sym);
  }
  return t.entropy_bits(miller_madow);
}

namespace {

void check_alphabet(const SymbolSeries& s, const char* what) {
  if (s.symbols.empty()) throw std::invalid_argument(std::string(what) + ": empty series");
  if (s.alphabet < 1) throw std::invalid_argument(std::string(what) + ": empty alphabet");
}

/// Table over concatenated blocks described by (series, block length)
/// pairs, all blocks ending at the same index n, plus optional "next"
/// values at n + delay. Builders below assemble the entropy combinations.
struct BlockSpec {
  const SymbolSeries* series;
  int block;  // number of past values, ending at the anchor index
  bool next;  // instead take the single value at anchor + delay
};

ProbabilityTable build_table(const std::vector<BlockSpec>& specs, std::size_t t_len,
                             int max_history, int delay) {
  std::vector<int> radices;
  for (const auto& sp : specs) {
    const int reps = sp.next ? 1 : sp.block;
    for (int i = 0; i < reps; ++i) radices.push_back(std::max(1, sp.series->alphabet));
  }
  ProbabilityTable table(std::move(radices));
  std::vector<int> tuple;
  // anchor n ranges so that the deepest block and the next value both exist
  const std::size_t first = static_cast<std::size_t>(max_history - 1);
  for (std::size_t n = first; n + static_cast<std::size_t>(delay) < t_len; ++n) {
    tuple.clear();
    for (const auto& sp : specs) {
      if (sp.next) {
        tuple.push_back(sp.series->symbols[n + static_cast<std::size_t>(delay)]);
      } else {
        for (int i = sp.block - 1; i >= 0; --i)
          tuple.push_back(sp.series->symbols[n - static_cast<std::size_t>(i)]);
      }
    }
    table.add(tuple);
  }
  return table;
}

void flag_low_samples(InfoEstimate& est, const ProbabilityTable& largest,
                      const EstimatorOptions& opt) {
  if (largest.total() == 0) return;
  const double per_cell = static_cast<double>(largest.total()) /
                          static_cast<double>(largest.occupied_cells());
  if (per_cell < opt.min_samples_per_cell) est.flags.push_back("low_confidence");
}

}  // namespace

InfoEstimate mutual_information(const SymbolSeries& x, const SymbolSeries& y,
                                const EstimatorOptions& opt) {
  check_alphabet(x, "mutual_information");
  check_alphabet(y, "mutual_information");
  if (x.symbols.size() != y.symbols.size())
    throw std::invalid_argument("mutual_information: length mismatch");

  ProbabilityTable px({std::max(1, x.alphabet)});
  ProbabilityTable py({std::max(1, y.alphabet)});
  ProbabilityTable pxy({std::max(1, x.alphabet), std::max(1, y.alphabet)});
  for (std::size_t i = 0; i < x.symbols.size(); ++i) {
    const int sx[1] = {x.symbols[i]};
    const int sy[1] = {y.symbols[i]};
    const int sxy[2] = {x.symbols[i], y.symbols[i]};
    px.add(sx);
    py.add(sy);
    pxy.add(sxy);
  }
  InfoEstimate est;
  est.value_bits = px.entropy_bits(opt.miller_madow) + py.entropy_bits(opt.miller_madow) -
                   pxy.entropy_bits(opt.miller_madow);
  est.k = 0;
  est.l = 0;
  est.bins = std::max(x.alphabet, y.alphabet);
  est.samples = pxy.total();
  flag_low_samples(est, pxy, opt);
  if (x.degenerate || y.degenerate) est.flags.push_back("degenerate_input");
  return est;
}

InfoEstimate active_information_storage(const SymbolSeries& x, int k,
                                        const EstimatorOptions& opt) {
  check_alphabet(x, "active_information_storage");
  if (k < 1) throw std::invalid_argument("active_information_storage: k must be >= 1");
  const std::size_t t_len = x.symbols.size();
  if (t_len < static_cast<std::size_t>(k + 1))
    throw std::invalid_argument("active_information_storage: series shorter than k+1");

  // A(X,k) = H(X^k) + H(X') - H(X^k, X'), all tables over the same anchors
  auto h_block = build_table({{&x, k, false}}, t_len, k, 1);
  auto h_next = build_table({{&x, 0, true}}, t_len, k, 1);
  auto h_joint = build_table({{&x, k, false}, {&x, 0, true}}, t_len, k, 1);

  InfoEstimate est;
  est.value_bits = h_block.entropy_bits(opt.miller_madow) +
                   h_next.entropy_bits(opt.miller_madow) -
                   h_joint.entropy_bits(opt.miller_madow);
  est.k = k;
  est.l = 0;
  est.bins = x.alphabet;
  est.samples = h_joint.total();
  // optional normalization by the joint entropy H(X^k; X')
  const double hj = h_joint.entropy_bits(opt.miller_madow);
  if (hj > 0.0) est.normalized = est.value_bits / hj;
  flag_low_samples(est, h_joint, opt);
  if (x.degenerate) est.flags.push_back("degenerate_input");
  return est;
}

InfoEstimate input_conditioned_ais(const SymbolSeries& x, const SymbolSeries& u,
                                   int k, const EstimatorOptions& opt) {
  check_alphabet(x, "input_conditioned_ais");
  check_alphabet(u, "input_conditioned_ais");
  if (k < 1) throw std::invalid_argument("input_conditioned_ais: k must be >= 1");
  if (x.symbols.size() != u.symbols.size())
    throw std::invalid_argument("input_conditioned_ais: length mismatch");
  const std::size_t t_len = x.symbols.size();
  if (t_len < static_cast<std::size_t>(k + 1))
    throw std::invalid_argument("input_conditioned_ais: series shorter than k+1");

  // A^U_X(k) = I(X^k; X' | U') = H(X^k,U') + H(U',X') - H(X^k,U',X') - H(U')
  auto h_xu = build_table({{&x, k, false}, {&u, 0, true}}, t_len, k, 1);
  auto h_ux = build_table({{&u, 0, true}, {&x, 0, true}}, t_len, k, 1);
  auto h_xux = build_table({{&x, k, false}, {&u, 0, true}, {&x, 0, true}}, t_len, k, 1);
  auto h_u = build_table({{&u, 0, true}}, t_len, k, 1);

  InfoEstimate est;
  // paired so that a next-state fully determined by the input cancels exactly
  est.value_bits = (h_xu.entropy_bits(opt.miller_madow) - h_xux.entropy_bits(opt.miller_madow)) +
                   (h_ux.entropy_bits(opt.miller_madow) - h_u.entropy_bits(opt.miller_madow));
  est.k = k;
  est.l = 0;
  est.bins = std::max(x.alphabet, u.alphabet);
  est.samples = h_xux.total();
  flag_low_samples(est, h_xux, opt);
  if (x.degenerate || u.degenerate) est.flags.push_back("degenerate_input");
  return est;
}

InfoEstimate transfer_entropy(const SymbolSeries& source, const SymbolSeries& target,
                              const EmbeddingSpec& spec, const EstimatorOptions& opt) {
  check_alphabet(source, "transfer_entropy");
  check_alphabet(target, "transfer_entropy");
  if (spec.k < 1 || spec.l < 1)
    throw std::invalid_argument("transfer_entropy: k and l must be >= 1");
  if (spec.delay < 1) throw std::invalid_argument("transfer_entropy: delay must be >= 1");
  if (source.symbols.size() != target.symbols.size())
    throw std::invalid_argument("transfer_entropy: length mismatch");
  const std::size_t t_len = target.symbols.size();
  const int max_hist = std::max(spec.k, spec.l);
  if (t_len < static_cast<std::size_t>(max_hist + spec.delay))
    throw std::invalid_argument("transfer_entropy: series too short for embedding");

  // T = H(Y^k, X^l) + H(Y^k, Y') - H(Y^k, X^l, Y') - H(Y^k)
  auto h_yx = build_table({{&target, spec.k, false}, {&source, spec.l, false}},
                          t_len, max_hist, spec.delay);
  auto h_yy = build_table({{&target, spec.k, false}, {&target, 0, true}},
                          t_len, max_hist, spec.delay);
  auto h_yxy = build_table({{&target, spec.k, false}, {&source, spec.l, false},
                            {&target, 0, true}},
                           t_len, max_hist, spec.delay);
  auto h_y = build_table({{&target, spec.k, false}}, t_len, max_hist, spec.delay);

  InfoEstimate est;
  // paired so that a constant source cancels exactly to zero
  est.value_bits = (h_yx.entropy_bits(opt.miller_madow) - h_y.entropy_bits(opt.miller_madow)) +
                   (h_yy.entropy_bits(opt.miller_madow) - h_yxy.entropy_bits(opt.miller_madow));
  est.k = spec.k;
  est.l = spec.l;
  est.bins = std::max(source.alphabet, target.alphabet);
  est.samples = h_yxy.total();
  flag_low_samples(est, h_yxy, opt);
  if (source.degenerate || target.degenerate) est.flags.push_back("degenerate_input");
  return est;
}

}  // namespace rescomp::info

#include "rescomp/task_complexity.hpp"

#include <stdexcept>

#include <json.hpp>

namespace rescomp::taskc {

OutputMemoryProfile output_memory_profile(const info::SymbolSeries& y, int k_max,
                                          double epsilon) {
  if (k_max < 1) throw std::invalid_argument("output_memory_profile: k_max must be >= 1");
  if (y.size() < static_cast<std::size_t>(k_max + 2))
    throw std::invalid_argument("output_memory_profile: insufficient data for k_max");

  OutputMemoryProfile prof;
  prof.a_y.reserve(static_cast<std::size_t>(k_max));
  for (int k = 1; k <= k_max; ++k)
    prof.a_y.push_back(info::active_information_storage(y, k).value_bits);
  for (int k = 1; k < k_max; ++k) {
    if (prof.a_y[static_cast<std::size_t>(k)] <=
        prof.a_y[static_cast<std::size_t>(k - 1)] + epsilon) {
      prof.k_star = k;
      return prof;
    }
  }
  prof.k_star = k_max;
  prof.plateau_found = false;
  return prof;
}

InputContributionProfile input_contribution_profile(const info::SymbolSeries& x,
                                                    const info::SymbolSeries& y,
                                                    int k_star, int l_max, double epsilon) {
  if (l_max < 1)
    throw std::invalid_argument("input_contribution_profile: l_max must be >= 1");
  if (x.size() != y.size())
    throw std::invalid_argument("input_contribution_profile: length mismatch");
  if (y.size() < static_cast<std::size_t>(std::max(k_star, l_max) + 2))
    throw std::invalid_argument("input_contribution_profile: insufficient data");

  InputContributionProfile prof;
  prof.te.reserve(static_cast<std::size_t>(l_max));
  for (int l = 1; l <= l_max; ++l) {
    info::EmbeddingSpec spec;
    spec.k = k_star;
    spec.l = l;
    prof.te.push_back(info::transfer_entropy(x, y, spec).value_bits);
  }
  prof.l_star = l_max;
  prof.plateau_found = false;
  for (int l = 1; l < l_max; ++l) {
    if (prof.te[static_cast<std::size_t>(l)] <=
        prof.te[static_cast<std::size_t>(l - 1)] + epsilon) {
      prof.l_star = l;
      prof.plateau_found = true;
      break;
    }
  }
  prof.te_at_star = prof.te[static_cast<std::size_t>(prof.l_star - 1)];
  return prof;
}

TaskComplexityReport task_complexity(const TimeSeries& input, const TimeSeries& output,
                                     const TaskComplexityOptions& opt) {
  if (input.length() != output.length())
    throw std::invalid_argument("task_complexity: series lengths differ");

  info::DiscretizationSpec dspec;
  dspec.bins = opt.bins;
  const info::SymbolSeries x = info::discretize(input.as_vector(), dspec);
  const info::SymbolSeries y = info::discretize(output.as_vector(), dspec);

  TaskComplexityReport rep;
  rep.bins = opt.bins;
  rep.samples = input.length();
  rep.output_memory = output_memory_profile(y, opt.k_max, opt.epsilon);
  rep.input_contribution =
      input_contribution_profile(x, y, rep.output_memory.k_star, opt.l_max, opt.epsilon);

  const auto ais =
      info::active_information_storage(y, rep.output_memory.k_star);
  rep.normalized_ais = ais.normalized;
  return rep;
}

std::string TaskComplexityReport::to_json() const {
  nlohmann::json j;
  j["a_y"] = output_memory.a_y;
  j["k_star"] = output_memory.k_star;
  j["k_plateau_found"] = output_memory.plateau_found;
  j["te"] = input_contribution.te;
  j["l_star"] = input_contribution.l_star;
  j["te_at_star"] = input_contribution.te_at_star;
  j["l_plateau_found"] = input_contribution.plateau_found;
  if (normalized_ais) j["normalized_ais"] = *normalized_ais;
  j["bins"] = bins;
  j["samples"] = samples;
  return j.dump(2);
}

}  // namespace rescomp::taskc

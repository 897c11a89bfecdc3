#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rescomp::exp {

inline constexpr const char* kToolVersion = "0.1.0";

/// Experiment kinds the runner understands.
const std::vector<std::string>& experiment_kinds();

struct ValidationIssue {
  std::string path;     // e.g. "mc.k_max"
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  std::string to_string() const;
};

/// Schema check with precise field paths; never executes the experiment.
ValidationReport validate_spec_text(const std::string& text);
ValidationReport validate_spec_file(const std::string& path);

struct RunOptions {
  std::optional<std::string> output_dir;   // overrides spec "output_dir"
  std::optional<int> workers;              // overrides spec "workers"
  std::optional<std::uint64_t> base_seed;  // overrides spec "base_seed"
};

struct RunResult {
  std::string output_dir;
  std::size_t rows_written = 0;
  std::string spec_hash;
};

/// Execute an experiment spec: per-trial rows to trials.csv, aggregate
/// statistics to summary.json, optional curves/*.csv. Trials run
/// concurrently up to the worker count; outputs are ordered by trial
/// index, so reruns with the same seed are byte-identical.
RunResult run_experiment_file(const std::string& spec_path, const RunOptions& opt = {});
RunResult run_experiment_text(const std::string& spec_text, const RunOptions& opt = {});

/// FNV-1a 64 over the canonical (sorted-key) spec serialization.
std::string spec_hash_hex(const std::string& canonical_text);

}  // namespace rescomp::exp

// Command-line experiment runner: validates and executes experiment specs,
// and exposes one-off measure invocations on CSV inputs.

#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "rescomp/experiments.hpp"
#include "rescomp/info/estimators.hpp"
#include "rescomp/memory_capacity.hpp"
#include "rescomp/reservoir.hpp"
#include "rescomp/task_complexity.hpp"
#include "rescomp/time_series.hpp"

namespace {

rescomp::info::SymbolSeries load_channel(const std::string& path, int column, int bins) {
  const rescomp::TimeSeries ts = rescomp::read_csv(path);
  if (column < 0 || column >= ts.dim())
    throw std::invalid_argument(path + ": no column " + std::to_string(column));
  rescomp::info::DiscretizationSpec spec;
  spec.bins = bins;
  if (bins == 0) spec.scheme = rescomp::info::Discretization::None;
  return rescomp::info::discretize(ts.channel(column), spec);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reservoir computing and self-organization toolkit"};
  app.require_subcommand(1);

  // ---- run
  auto* run = app.add_subcommand("run", "execute an experiment spec");
  std::string run_spec;
  std::string run_out;
  int run_workers = 0;
  std::uint64_t run_seed = 0;
  bool run_seed_set = false;
  run->add_option("spec", run_spec, "experiment spec (JSON)")->required();
  run->add_option("--out", run_out, "output directory (overrides spec)");
  run->add_option("--workers", run_workers, "concurrent trial workers");
  run->add_option("--seed", run_seed, "base seed (overrides spec)")
      ->each([&](const std::string&) { run_seed_set = true; });

  // ---- validate
  auto* validate = app.add_subcommand("validate", "schema-check an experiment spec");
  std::string validate_spec_path;
  validate->add_option("spec", validate_spec_path, "experiment spec (JSON)")->required();

  // ---- measure
  auto* measure = app.add_subcommand("measure", "one-off measures on CSV inputs");
  measure->require_subcommand(1);

  std::string src_path, tgt_path;
  int src_col = 0, tgt_col = 0, bins = 8, hist_k = 1, hist_l = 1;

  auto* mi = measure->add_subcommand("mi", "mutual information between two channels");
  mi->add_option("--source", src_path)->required();
  mi->add_option("--target", tgt_path)->required();
  mi->add_option("--source-col", src_col);
  mi->add_option("--target-col", tgt_col);
  mi->add_option("--bins", bins, "0 = already symbolic");

  auto* ais = measure->add_subcommand("ais", "active information storage");
  ais->add_option("--input", src_path)->required();
  ais->add_option("--col", src_col);
  ais->add_option("-k", hist_k);
  ais->add_option("--bins", bins);

  auto* te = measure->add_subcommand("te", "transfer entropy source -> target");
  te->add_option("--source", src_path)->required();
  te->add_option("--target", tgt_path)->required();
  te->add_option("--source-col", src_col);
  te->add_option("--target-col", tgt_col);
  te->add_option("-k", hist_k);
  te->add_option("-l", hist_l);
  te->add_option("--bins", bins);

  std::string reservoir_path;
  int mc_k_max = 40;
  double mc_lambda = 1e-6;
  auto* mc = measure->add_subcommand("mc", "memory capacity of a stored reservoir");
  mc->add_option("--reservoir", reservoir_path, "reservoir JSON")->required();
  mc->add_option("--input", src_path, "scalar input CSV")->required();
  mc->add_option("--k-max", mc_k_max);
  mc->add_option("--ridge-lambda", mc_lambda);

  int tc_k_max = 6, tc_l_max = 6;
  double tc_eps = 0.01;
  auto* tc = measure->add_subcommand("task-complexity",
                                     "output memory and input contribution profiles");
  tc->add_option("--input", src_path)->required();
  tc->add_option("--target", tgt_path)->required();
  tc->add_option("--k-max", tc_k_max);
  tc->add_option("--l-max", tc_l_max);
  tc->add_option("--epsilon", tc_eps);
  tc->add_option("--bins", bins);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      rescomp::exp::RunOptions opt;
      if (!run_out.empty()) opt.output_dir = run_out;
      if (run_workers > 0) opt.workers = run_workers;
      if (run_seed_set) opt.base_seed = run_seed;
      const auto result = rescomp::exp::run_experiment_file(run_spec, opt);
      std::cout << "wrote " << result.rows_written << " rows to " << result.output_dir
                << " (spec " << result.spec_hash << ")\n";
      return 0;
    }
    if (*validate) {
      const auto report = rescomp::exp::validate_spec_file(validate_spec_path);
      std::cout << report.to_string();
      return report.ok() ? 0 : 1;
    }
    if (*mi) {
      const auto x = load_channel(src_path, src_col, bins);
      const auto y = load_channel(tgt_path, tgt_col, bins);
      std::cout << rescomp::info::info_estimate_to_json(
                       rescomp::info::mutual_information(x, y))
                << "\n";
      return 0;
    }
    if (*ais) {
      const auto x = load_channel(src_path, src_col, bins);
      std::cout << rescomp::info::info_estimate_to_json(
                       rescomp::info::active_information_storage(x, hist_k))
                << "\n";
      return 0;
    }
    if (*te) {
      const auto x = load_channel(src_path, src_col, bins);
      const auto y = load_channel(tgt_path, tgt_col, bins);
      rescomp::info::EmbeddingSpec spec;
      spec.k = hist_k;
      spec.l = hist_l;
      std::cout << rescomp::info::info_estimate_to_json(
                       rescomp::info::transfer_entropy(x, y, spec))
                << "\n";
      return 0;
    }
    if (*mc) {
      const rescomp::Reservoir r = rescomp::load_reservoir(reservoir_path);
      const rescomp::TimeSeries input = rescomp::read_csv(src_path);
      rescomp::MemoryCapacityOptions opt;
      opt.k_max = mc_k_max;
      opt.ridge_lambda = mc_lambda;
      std::cout << rescomp::measure_report_to_json(rescomp::memory_capacity(r, input, opt))
                << "\n";
      return 0;
    }
    if (*tc) {
      const rescomp::TimeSeries x = rescomp::read_csv(src_path);
      const rescomp::TimeSeries y = rescomp::read_csv(tgt_path);
      rescomp::taskc::TaskComplexityOptions opt;
      opt.k_max = tc_k_max;
      opt.l_max = tc_l_max;
      opt.epsilon = tc_eps;
      opt.bins = bins;
      std::cout << rescomp::taskc::task_complexity(x, y, opt).to_json() << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

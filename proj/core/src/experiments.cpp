#include "rescomp/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "rescomp/memory_capacity.hpp"
#include "rescomp/measures/criticality.hpp"
#include "rescomp/measures/fmc.hpp"
#include "rescomp/measures/ipc.hpp"
#include "rescomp/measures/ranks.hpp"
#include "rescomp/readout.hpp"
#include "rescomp/reservoir.hpp"
#include "rescomp/ridge.hpp"
#include "rescomp/rng.hpp"
#include "rescomp/sor.hpp"
#include "rescomp/sorn.hpp"
#include "rescomp/task_complexity.hpp"
#include "rescomp/tasks.hpp"
#include "rescomp/te_adaptation.hpp"
#include "rescomp/time_series.hpp"

namespace rescomp::exp {

using nlohmann::json;

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds = {
      "mc_curve",       "ipc",           "fmc",
      "ranks",          "criticality_sweep", "sorn_counting",
      "sorn_ablation",  "sor_pattern",   "te_adapt_coupled_maps",
      "te_adapt_mackey_glass", "task_complexity"};
  return kinds;
}

std::string ValidationReport::to_string() const {
  if (ok()) return "spec ok\n";
  std::string s;
  for (const auto& issue : issues) {
    s += issue.path.empty() ? "<spec>" : issue.path;
    s += ": " + issue.message + "\n";
  }
  return s;
}

std::string spec_hash_hex(const std::string& canonical_text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : canonical_text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

// ---------------------------------------------------------------- config

double jget(const json& j, const char* key, double def) {
  if (!j.is_object() || !j.contains(key)) return def;
  return j.at(key).get<double>();
}

int jget(const json& j, const char* key, int def) {
  if (!j.is_object() || !j.contains(key)) return def;
  return j.at(key).get<int>();
}

bool jget(const json& j, const char* key, bool def) {
  if (!j.is_object() || !j.contains(key)) return def;
  return j.at(key).get<bool>();
}

std::string jget(const json& j, const char* key, const char* def) {
  if (!j.is_object() || !j.contains(key)) return def;
  return j.at(key).get<std::string>();
}

json jblock(const json& j, const char* key) {
  if (j.is_object() && j.contains(key)) return j.at(key);
  return json::object();
}

std::vector<double> jlist(const json& j, const char* key, std::vector<double> def) {
  if (!j.is_object() || !j.contains(key)) return def;
  return j.at(key).get<std::vector<double>>();
}

std::vector<int> jlist(const json& j, const char* key, std::vector<int> def) {
  if (!j.is_object() || !j.contains(key)) return def;
  return j.at(key).get<std::vector<int>>();
}

ReservoirParams reservoir_params(const json& spec, const char* default_nonlinearity) {
  const json block = jblock(spec, "reservoir");
  ReservoirParams p;
  p.n_units = jget(block, "n_units", 20);
  p.input_dim = jget(block, "input_dim", 1);
  p.spectral_radius = jget(block, "spectral_radius", 0.95);
  p.input_scaling = jget(block, "input_scaling", 1.0);
  p.connection_density = jget(block, "connection_density", 0.2);
  p.nonlinearity =
      nonlinearity_from_string(jget(block, "nonlinearity", default_nonlinearity));
  p.leak_rate = jget(block, "leak_rate", 1.0);
  return p;
}

Reservoir delay_line_reservoir(const ReservoirParams& base) {
  ReservoirParams p = base;
  Eigen::MatrixXd w_res = Eigen::MatrixXd::Zero(p.n_units, p.n_units);
  for (int i = 0; i + 1 < p.n_units; ++i) w_res(i + 1, i) = p.spectral_radius;
  Eigen::MatrixXd w_in = Eigen::MatrixXd::Zero(p.n_units, 1);
  w_in(0, 0) = 1.0;
  return Reservoir::from_matrices(p, std::move(w_in), std::move(w_res));
}

// ------------------------------------------------------------------ rows

using Row = std::vector<std::pair<std::string, double>>;
using Curve = std::vector<std::pair<double, double>>;

struct TrialOutput {
  std::vector<Row> rows;
  std::vector<std::pair<std::string, Curve>> curves;  // filename stem -> points
};

Row base_row(int trial) { return Row{{"trial", static_cast<double>(trial)}}; }

void push(Row& row, const std::string& key, double value) { row.emplace_back(key, value); }

// ------------------------------------------------------------ experiments

TrialOutput run_mc_curve(const json& spec, int trial, std::uint64_t seed) {
  ReservoirParams params = reservoir_params(spec, "linear");
  params.seed = seed;
  const json input_cfg = jblock(spec, "input");
  const json mc_cfg = jblock(spec, "mc");

  const Reservoir r = jget(mc_cfg, "delay_line", false)
                          ? delay_line_reservoir(params)
                          : build_reservoir(params);
  const TimeSeries input = tasks::gen_iid_uniform(
      jget(input_cfg, "length", 4000), 1, jget(input_cfg, "lo", -1.0),
      jget(input_cfg, "hi", 1.0), mix_seed(seed, 101));

  MemoryCapacityOptions opt;
  opt.k_max = jget(mc_cfg, "k_max", 40);
  opt.ridge_lambda = jget(mc_cfg, "ridge_lambda", 1e-6);
  opt.washout = jget(mc_cfg, "washout", 100);
  const MeasureReport rep = memory_capacity(r, input, opt);

  TrialOutput out;
  Row row = base_row(trial);
  push(row, "mc_total", rep.scalars.at("mc_total"));
  out.rows.push_back(std::move(row));
  out.curves.emplace_back("trial" + std::to_string(trial) + "_mc_k",
                          rep.curves.at("mc_k"));
  return out;
}

TrialOutput run_ipc(const json& spec, int trial, std::uint64_t seed) {
  ReservoirParams params = reservoir_params(spec, "tanh");
  params.seed = seed;
  const json input_cfg = jblock(spec, "input");
  const json ipc_cfg = jblock(spec, "ipc");

  const Reservoir r = build_reservoir(params);
  const TimeSeries input = tasks::gen_iid_uniform(
      jget(input_cfg, "length", 5000), 1, -1.0, 1.0, mix_seed(seed, 102));

  const auto basis = measures::legendre_basis(jget(ipc_cfg, "max_degree", 2),
                                              jget(ipc_cfg, "min_delay", 1),
                                              jget(ipc_cfg, "max_delay", 30));
  measures::IpcOptions opt;
  opt.ridge_lambda = jget(ipc_cfg, "ridge_lambda", 1e-6);
  opt.washout = jget(ipc_cfg, "washout", 100);
  const measures::IpcReport rep = measures::ipc(r, input, basis, opt);

  double degree1 = 0.0, degree2 = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis[i].total_degree() == 1) degree1 += rep.capacities[i].second;
    if (basis[i].total_degree() == 2) degree2 += rep.capacities[i].second;
  }

  TrialOutput out;
  Row row = base_row(trial);
  push(row, "ipc_total", rep.total);
  push(row, "ipc_degree1", degree1);
  push(row, "ipc_degree2", degree2);
  push(row, "n_basis", static_cast<double>(basis.size()));
  out.rows.push_back(std::move(row));
  Curve capacities;
  for (std::size_t i = 0; i < rep.capacities.size(); ++i)
    capacities.emplace_back(static_cast<double>(i), rep.capacities[i].second);
  out.curves.emplace_back("trial" + std::to_string(trial) + "_capacity", capacities);
  return out;
}

TrialOutput run_fmc(const json& spec, int trial, std::uint64_t seed) {
  ReservoirParams params = reservoir_params(spec, "linear");
  if (params.spectral_radius >= 1.0) params.spectral_radius = 0.8;
  params.seed = seed;
  const json fmc_cfg = jblock(spec, "fmc");

  const Reservoir r = build_reservoir(params);
  const measures::FmcReport rep = measures::fisher_memory_curve(
      r, jget(fmc_cfg, "noise_variance", 0.01), jget(fmc_cfg, "k_max", 10));

  TrialOutput out;
  Row row = base_row(trial);
  push(row, "j_0", rep.j(0));
  push(row, "j_sum", rep.j.sum());
  push(row, "covariance_condition", rep.covariance_condition);
  out.rows.push_back(std::move(row));
  Curve jk;
  for (Eigen::Index k = 0; k < rep.j.size(); ++k)
    jk.emplace_back(static_cast<double>(k), rep.j(k));
  out.curves.emplace_back("trial" + std::to_string(trial) + "_j_k", jk);
  return out;
}

TrialOutput run_ranks(const json& spec, int trial, std::uint64_t seed) {
  ReservoirParams params = reservoir_params(spec, "tanh");
  if (!jblock(spec, "reservoir").contains("n_units")) params.n_units = 50;
  params.seed = seed;
  const json cfg = jblock(spec, "ranks");
  const int n_streams = jget(cfg, "n_streams", 10);
  const int n_universe = jget(cfg, "n_universe", 30);
  const double noise = jget(cfg, "universe_noise", 0.05);
  const Eigen::Index t0 = jget(cfg, "t0", 50);

  const Reservoir r = build_reservoir(params);
  std::vector<TimeSeries> streams;
  for (int i = 0; i < n_streams; ++i)
    streams.push_back(tasks::gen_iid_uniform(t0, 1, -1.0, 1.0, mix_seed(seed, 200 + i)));
  const auto sep = measures::separation_rank(r, streams, t0);

  const TimeSeries base = tasks::gen_iid_uniform(t0, 1, -1.0, 1.0, mix_seed(seed, 300));
  std::vector<TimeSeries> universe;
  for (int i = 0; i < n_universe; ++i) {
    TimeSeries noisy = base;
    const TimeSeries jitter =
        tasks::gen_iid_uniform(t0, 1, -1.0, 1.0, mix_seed(seed, 400 + i));
    noisy.values += noise * jitter.values;
    universe.push_back(std::move(noisy));
  }
  const auto gen = measures::generalization_rank(r, universe, t0);

  TrialOutput out;
  Row row = base_row(trial);
  push(row, "separation_rank", static_cast<double>(sep.rank));
  push(row, "generalization_rank", static_cast<double>(gen.rank));
  push(row, "quality_score", measures::quality_score(sep, gen));
  out.rows.push_back(std::move(row));
  return out;
}

TrialOutput run_criticality_sweep(const json& spec, int trial, std::uint64_t seed) {
  ReservoirParams params = reservoir_params(spec, "tanh");
  if (!jblock(spec, "reservoir").contains("n_units")) params.n_units = 50;
  const json cfg = jblock(spec, "criticality");
  std::vector<double> rhos = jlist(cfg, "rho_values", std::vector<double>{});
  if (rhos.empty())
    for (int i = 1; i <= 20; ++i) rhos.push_back(0.1 * i);

  measures::CriticalityOptions copt;
  copt.horizon = jget(cfg, "horizon", 1000);
  copt.trials = jget(cfg, "trials_per_estimate", 3);
  copt.perturbation = jget(cfg, "perturbation", 1e-8);
  copt.warmup = jget(cfg, "warmup", 100);

  const double input_scale = jget(cfg, "input_scale", 0.5);
  const bool zero_input = jget(cfg, "zero_input", false);
  TimeSeries input =
      tasks::gen_iid_uniform(copt.warmup + copt.horizon, 1, -1.0, 1.0, mix_seed(seed, 500));
  input.values *= zero_input ? 0.0 : input_scale;

  // one base draw per trial, rescaled per rho: the sweep compares dynamics
  // of the same matrix family
  ReservoirParams unit = params;
  unit.spectral_radius = 1.0;
  unit.seed = seed;
  const Reservoir base = build_reservoir(unit);

  TrialOutput out;
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    Reservoir r = base;
    r.params.spectral_radius = rhos[i];
    r.w_res *= rhos[i];
    const auto rep = measures::criticality_estimate(r, input, copt);
    Row row = base_row(trial);
    push(row, "rho", rhos[i]);
    push(row, "lambda", rep.lambda);
    push(row, "regime", static_cast<double>(static_cast<int>(rep.regime)));
    out.rows.push_back(std::move(row));
  }
  return out;
}

sorn::SornParams sorn_params_from(const json& spec, int n_e, std::uint64_t seed) {
  const json cfg = jblock(spec, "sorn");
  sorn::SornParams p;
  p.n_excitatory = n_e;
  p.n_inhibitory = jget(cfg, "n_inhibitory", std::max(1, n_e / 5));
  p.eta_stdp = jget(cfg, "eta_stdp", 0.001);
  p.eta_ip = jget(cfg, "eta_ip", 0.001);
  p.target_rate = jget(cfg, "target_rate", 0.1);
  p.te_max = jget(cfg, "te_max", 0.5);
  p.ti_max = jget(cfg, "ti_max", 1.0);
  p.lambda_ee = jget(cfg, "lambda_ee", 10.0);
  p.seed = seed;
  return p;
}

sorn::SornPhases sorn_phases_from(const json& spec) {
  const json cfg = jblock(spec, "sorn");
  sorn::SornPhases ph;
  ph.plastic_steps = jget(cfg, "plastic_steps", 50000);
  ph.readout_steps = jget(cfg, "readout_steps", 5000);
  ph.test_steps = jget(cfg, "test_steps", 5000);
  return ph;
}

TrialOutput run_sorn_counting(const json& spec, int trial, std::uint64_t seed) {
  const json cfg = jblock(spec, "sorn");
  const std::vector<int> n_values = jlist(cfg, "n_values", std::vector<int>{1, 2, 4, 8});
  const std::vector<int> sizes = jlist(cfg, "sizes", std::vector<int>{100});
  const bool compare_static = jget(cfg, "static_comparison", true);
  const double ridge_lambda = jget(cfg, "ridge_lambda", 1e-4);
  const sorn::SornPhases phases = sorn_phases_from(spec);

  TrialOutput out;
  for (int n_e : sizes) {
    for (std::size_t ni = 0; ni < n_values.size(); ++ni) {
      const int n = n_values[ni];
      sorn::CountingTask task;
      task.n = n;
      const std::uint64_t run_seed = mix_seed(seed, 1000 + ni * 13 + n_e);
      sorn::SornParams params = sorn_params_from(spec, n_e, run_seed);

      const auto plastic = sorn::sorn_train_and_eval(
          params, task, sorn::PlasticityFlags{true, true, true}, phases, ridge_lambda);
      Row row = base_row(trial);
      push(row, "n", n);
      push(row, "n_e", n_e);
      push(row, "stdp", 1.0);
      push(row, "sn", 1.0);
      push(row, "ip", 1.0);
      push(row, "accuracy", plastic.accuracy);
      push(row, "normalized_performance", plastic.normalized_performance);
      out.rows.push_back(std::move(row));

      if (compare_static) {
        const auto fixed = sorn::sorn_train_and_eval(
            params, task, sorn::PlasticityFlags{false, false, false}, phases, ridge_lambda);
        Row srow = base_row(trial);
        push(srow, "n", n);
        push(srow, "n_e", n_e);
        push(srow, "stdp", 0.0);
        push(srow, "sn", 0.0);
        push(srow, "ip", 0.0);
        push(srow, "accuracy", fixed.accuracy);
        push(srow, "normalized_performance", fixed.normalized_performance);
        out.rows.push_back(std::move(srow));
      }
    }
  }
  return out;
}

TrialOutput run_sorn_ablation(const json& spec, int trial, std::uint64_t seed) {
  const json cfg = jblock(spec, "sorn");
  const int n_e = jget(cfg, "n_e", 100);
  const int n = jget(cfg, "n", 4);
  const double ridge_lambda = jget(cfg, "ridge_lambda", 1e-4);
  sorn::SornPhases phases = sorn_phases_from(spec);
  phases.readout_steps = jget(cfg, "readout_steps", 200);
  phases.test_steps = jget(cfg, "test_steps", 200);
  const auto stats_window =
      static_cast<Eigen::Index>(jget(cfg, "stats_window", 10000));

  const struct {
    const char* name;
    sorn::PlasticityFlags flags;
  } arms[] = {
      {"full", {true, true, true}},
      {"no_sn", {true, false, true}},
      {"no_ip", {true, true, false}},
  };

  sorn::CountingTask task;
  task.n = n;
  TrialOutput out;
  for (const auto& arm : arms) {
    sorn::SornParams params = sorn_params_from(spec, n_e, mix_seed(seed, 2000));
    const auto rep =
        sorn::sorn_train_and_eval(params, task, arm.flags, phases, ridge_lambda, stats_window);
    Row row = base_row(trial);
    push(row, "stdp", arm.flags.stdp ? 1.0 : 0.0);
    push(row, "sn", arm.flags.sn ? 1.0 : 0.0);
    push(row, "ip", arm.flags.ip ? 1.0 : 0.0);
    push(row, "mean_rate", rep.mean_rate);
    push(row, "rate_std", rep.rate_std);
    push(row, "mean_pairwise_correlation", rep.mean_pairwise_correlation);
    out.rows.push_back(std::move(row));
  }
  return out;
}

TrialOutput run_sor_pattern(const json& spec, int trial, std::uint64_t seed) {
  const json cfg = jblock(spec, "sor");
  const json pattern_cfg = jblock(spec, "pattern");
  const Eigen::Index length = jget(pattern_cfg, "length", 4000);
  const int pattern_length = jget(pattern_cfg, "pattern_length", 5);
  const int n_patterns = jget(pattern_cfg, "n_patterns", 3);
  const double noise = jget(pattern_cfg, "noise", 0.05);

  const auto task =
      tasks::gen_pattern_detection(length, pattern_length, n_patterns, noise,
                                   mix_seed(seed, 3000));

  const int n_layers = jget(cfg, "layers", 1);
  const Eigen::Index per_layer_steps = jget(cfg, "per_layer_steps", 2000);
  std::vector<sor::SorParams> layers;
  for (int li = 0; li < n_layers; ++li) {
    sor::SorParams p;
    p.n_units = jget(cfg, "n_units", 49);
    p.input_dim = li == 0 ? 1 : p.n_units;
    p.alpha = jget(cfg, "alpha", 3.0);
    p.beta = jget(cfg, "beta", 1.0);
    p.gamma = jget(cfg, "gamma", 0.5);
    p.rule = jget(cfg, "rule", "neural_gas") == std::string("som")
                 ? sor::LearningRule::Som
                 : sor::LearningRule::NeuralGas;
    p.eta.initial = jget(cfg, "eta_initial", 0.1);
    p.eta.final = jget(cfg, "eta_final", 0.01);
    p.eta.horizon = per_layer_steps;
    p.bh.initial = jget(cfg, "bh_initial", static_cast<double>(p.n_units) / 4.0);
    p.bh.final = jget(cfg, "bh_final", 0.5);
    p.bh.horizon = per_layer_steps;
    p.seed = mix_seed(seed, 3100 + li);
    layers.push_back(p);
  }

  const auto trained = sor::stack_hierarchy(layers, task.input, per_layer_steps);
  const TimeSeries top = [&] {
    TimeSeries current = task.input;
    for (std::size_t li = 0; li < trained.size(); ++li)
      current = sor::sor_run(trained[li], layers[li], current);
    return current;
  }();

  // one-vs-all ridge classification of the binary target, split in halves
  const Eigen::Index t_len = top.length();
  const Eigen::Index half = t_len / 2;
  Eigen::MatrixXd targets = Eigen::MatrixXd::Zero(t_len, 2);
  for (Eigen::Index t = 0; t < t_len; ++t)
    targets(t, task.target.values(t, 0) > 0.5 ? 1 : 0) = 1.0;

  StateTrajectory train_traj{top.values.topRows(half), 0};
  const Readout ro = train_readout(
      train_traj,
      TimeSeries({"neg", "pos"}, targets.topRows(half)),
      jget(cfg, "ridge_lambda", 1e-4));

  StateTrajectory test_traj{top.values.bottomRows(t_len - half), 0};
  const TimeSeries scores = predict(ro, test_traj);
  Eigen::Index errors = 0;
  for (Eigen::Index t = 0; t < scores.length(); ++t) {
    const int pred = scores.values(t, 1) > scores.values(t, 0) ? 1 : 0;
    const int truth = task.target.values(half + t, 0) > 0.5 ? 1 : 0;
    if (pred != truth) ++errors;
  }

  TrialOutput out;
  Row row = base_row(trial);
  push(row, "layers", n_layers);
  push(row, "per_layer_steps", static_cast<double>(per_layer_steps));
  push(row, "error_rate",
       static_cast<double>(errors) / static_cast<double>(scores.length()));
  out.rows.push_back(std::move(row));
  return out;
}

struct TeAdaptTrialResult {
  double mse_static = 0.0;
  double mse_adapted = 0.0;
  int l_hat = 1;
  int epochs = 0;
  double mean_m = 1.0;
};

TeAdaptTrialResult te_adapt_pair(const json& spec, const TimeSeries& input,
                                 const TimeSeries& target, std::uint64_t seed) {
  ReservoirParams params = reservoir_params(spec, "tanh");
  if (!jblock(spec, "reservoir").contains("n_units")) params.n_units = 40;
  if (!jblock(spec, "reservoir").contains("connection_density"))
    params.connection_density = 0.1;
  params.seed = seed;

  const json cfg = jblock(spec, "adapt");
  tea::AdaptationConfig acfg;
  acfg.epsilon = jget(cfg, "epsilon", 0.01);
  acfg.epoch_length = jget(cfg, "epoch_length", 1000);
  acfg.max_epochs = jget(cfg, "max_epochs", 30);
  acfg.bins = jget(cfg, "bins", 8);
  acfg.stabilization_window = jget(cfg, "stabilization_window", 3);
  acfg.l_max = jget(cfg, "l_max", 10);

  const double ridge_lambda = jget(cfg, "ridge_lambda", 1e-6);
  const auto washout = static_cast<Eigen::Index>(jget(cfg, "washout", 100));
  const auto test_length = static_cast<Eigen::Index>(jget(cfg, "test_length", 1000));
  const Eigen::Index t_len = input.length();
  if (t_len <= washout + test_length + 10)
    throw std::invalid_argument("te_adapt: series too short for washout + test split");
  const Eigen::Index train_end = t_len - test_length;

  const Reservoir base = build_reservoir(params);

  auto evaluate = [&](const tea::AdaptiveReservoir& ar) {
    const TimeSeries states = tea::drive_adaptive(ar, input);
    StateTrajectory traj{states.values.topRows(train_end), washout};
    const TimeSeries train_targets =
        TimeSeries::scalar(target.values.col(0).head(train_end), "v");
    const Readout ro = train_readout(traj, train_targets, ridge_lambda);
    StateTrajectory test_traj{states.values.bottomRows(test_length), 0};
    const TimeSeries pred = predict(ro, test_traj);
    const Eigen::VectorXd err =
        pred.values.col(0) - target.values.col(0).tail(test_length);
    return err.squaredNorm() / static_cast<double>(test_length);
  };

  TeAdaptTrialResult res;
  tea::AdaptiveReservoir static_r = tea::make_adaptive(base);
  res.mse_static = evaluate(static_r);

  tea::AdaptiveReservoir adapted = tea::make_adaptive(base);
  const TimeSeries train_input =
      TimeSeries::scalar(input.values.col(0).head(train_end), "u");
  const TimeSeries train_target =
      TimeSeries::scalar(target.values.col(0).head(train_end), "v");
  const tea::PretrainReport prep = tea::pretrain(adapted, train_input, train_target, acfg);
  res.mse_adapted = evaluate(adapted);
  res.l_hat = prep.l_hat;
  res.epochs = prep.epochs_run;
  res.mean_m = adapted.m.cast<double>().mean();
  return res;
}

TrialOutput run_te_adapt_coupled_maps(const json& spec, int trial, std::uint64_t seed) {
  const json cfg = jblock(spec, "task");
  const std::vector<double> e_values =
      jlist(cfg, "e_values", std::vector<double>{0.75});
  const double omega = jget(cfg, "omega", 0.5);
  const auto length = static_cast<Eigen::Index>(jget(cfg, "length", 6000));

  TrialOutput out;
  for (std::size_t ei = 0; ei < e_values.size(); ++ei) {
    const auto maps = tasks::gen_coupled_maps(length + 1, e_values[ei], omega,
                                              mix_seed(seed, 4000 + ei));
    // one-step-ahead prediction of the response from its own history
    const TimeSeries input =
        TimeSeries::scalar(maps.response.values.col(0).head(length), "y");
    const TimeSeries target =
        TimeSeries::scalar(maps.response.values.col(0).tail(length), "y_next");
    const auto res = te_adapt_pair(spec, input, target, mix_seed(seed, 4500 + ei));

    Row row = base_row(trial);
    push(row, "e", e_values[ei]);
    push(row, "omega", omega);
    push(row, "mse_static", res.mse_static);
    push(row, "mse_adapted", res.mse_adapted);
    push(row, "l_hat", res.l_hat);
    push(row, "epochs", res.epochs);
    push(row, "mean_m", res.mean_m);
    out.rows.push_back(std::move(row));
  }
  return out;
}

TrialOutput run_te_adapt_mackey_glass(const json& spec, int trial, std::uint64_t seed) {
  const json cfg = jblock(spec, "task");
  const auto length = static_cast<Eigen::Index>(jget(cfg, "length", 6000));
  tasks::MackeyGlassParams mg;
  mg.tau = jget(cfg, "tau", 17);
  const TimeSeries series = tasks::gen_mackey_glass(length + 1, mg, mix_seed(seed, 4100));

  const TimeSeries input = TimeSeries::scalar(series.values.col(0).head(length), "x");
  const TimeSeries target = TimeSeries::scalar(series.values.col(0).tail(length), "x_next");
  const auto res = te_adapt_pair(spec, input, target, mix_seed(seed, 4600));

  TrialOutput out;
  Row row = base_row(trial);
  push(row, "mse_static", res.mse_static);
  push(row, "mse_adapted", res.mse_adapted);
  push(row, "l_hat", res.l_hat);
  push(row, "epochs", res.epochs);
  push(row, "mean_m", res.mean_m);
  out.rows.push_back(std::move(row));
  return out;
}

TrialOutput run_task_complexity(const json& spec, int trial, std::uint64_t seed) {
  const json cfg = jblock(spec, "task");
  const std::string process = jget(cfg, "process", "copy");
  const auto length = static_cast<Eigen::Index>(jget(cfg, "length", 100000));

  taskc::TaskComplexityOptions opt;
  opt.k_max = jget(cfg, "k_max", 6);
  opt.l_max = jget(cfg, "l_max", 6);
  opt.epsilon = jget(cfg, "epsilon", 0.01);
  opt.bins = jget(cfg, "bins", 2);

  Rng rng(mix_seed(seed, 5000));
  Eigen::VectorXd x(length), y(length);
  if (process == "copy") {
    for (Eigen::Index t = 0; t < length; ++t) x(t) = unit_uniform(rng) < 0.5 ? 0.0 : 1.0;
    y(0) = unit_uniform(rng) < 0.5 ? 0.0 : 1.0;
    for (Eigen::Index t = 1; t < length; ++t) y(t) = x(t - 1);
  } else if (process == "xor_lags") {
    for (Eigen::Index t = 0; t < length; ++t) x(t) = unit_uniform(rng) < 0.5 ? 0.0 : 1.0;
    y(0) = unit_uniform(rng) < 0.5 ? 0.0 : 1.0;
    y(1) = unit_uniform(rng) < 0.5 ? 0.0 : 1.0;
    for (Eigen::Index t = 2; t < length; ++t)
      y(t) = (x(t - 1) != x(t - 2)) ? 1.0 : 0.0;
  } else if (process == "iid") {
    for (Eigen::Index t = 0; t < length; ++t) {
      x(t) = unit_uniform(rng) < 0.5 ? 0.0 : 1.0;
      y(t) = unit_uniform(rng) < 0.5 ? 0.0 : 1.0;
    }
  } else if (process == "coupled_maps") {
    const auto maps = tasks::gen_coupled_maps(length, jget(cfg, "e", 0.5),
                                              jget(cfg, "omega", 0.5),
                                              mix_seed(seed, 5100));
    x = maps.driver.values.col(0);
    y = maps.response.values.col(0);
    opt.bins = jget(cfg, "bins", 8);
  } else {
    throw std::invalid_argument("task_complexity: unknown process " + process);
  }

  const auto rep = taskc::task_complexity(TimeSeries::scalar(x, "x"),
                                          TimeSeries::scalar(y, "y"), opt);
  TrialOutput out;
  Row row = base_row(trial);
  push(row, "k_star", rep.output_memory.k_star);
  push(row, "l_star", rep.input_contribution.l_star);
  push(row, "a_y_at_k_star",
       rep.output_memory.a_y[static_cast<std::size_t>(rep.output_memory.k_star - 1)]);
  push(row, "te_at_l_star", rep.input_contribution.te_at_star);
  out.rows.push_back(std::move(row));
  return out;
}

TrialOutput run_trial(const json& spec, const std::string& kind, int trial,
                      std::uint64_t seed) {
  if (kind == "mc_curve") return run_mc_curve(spec, trial, seed);
  if (kind == "ipc") return run_ipc(spec, trial, seed);
  if (kind == "fmc") return run_fmc(spec, trial, seed);
  if (kind == "ranks") return run_ranks(spec, trial, seed);
  if (kind == "criticality_sweep") return run_criticality_sweep(spec, trial, seed);
  if (kind == "sorn_counting") return run_sorn_counting(spec, trial, seed);
  if (kind == "sorn_ablation") return run_sorn_ablation(spec, trial, seed);
  if (kind == "sor_pattern") return run_sor_pattern(spec, trial, seed);
  if (kind == "te_adapt_coupled_maps") return run_te_adapt_coupled_maps(spec, trial, seed);
  if (kind == "te_adapt_mackey_glass") return run_te_adapt_mackey_glass(spec, trial, seed);
  if (kind == "task_complexity") return run_task_complexity(spec, trial, seed);
  throw std::invalid_argument("unknown experiment kind: " + kind);
}

// ------------------------------------------------------------- validation

void check_int_field(const json& j, const std::string& path, const char* key,
                     long long min_value, bool required, ValidationReport& rep) {
  const std::string full = path.empty() ? key : path + "." + key;
  if (!j.contains(key)) {
    if (required) rep.issues.push_back({full, "missing required field"});
    return;
  }
  if (!j.at(key).is_number_integer() && !j.at(key).is_number_unsigned()) {
    rep.issues.push_back({full, "expected an integer"});
    return;
  }
  if (j.at(key).get<long long>() < min_value)
    rep.issues.push_back({full, "must be >= " + std::to_string(min_value)});
}

void check_number_field(const json& j, const std::string& path, const char* key,
                        ValidationReport& rep) {
  if (!j.contains(key)) return;
  const std::string full = path.empty() ? key : path + "." + key;
  if (!j.at(key).is_number()) rep.issues.push_back({full, "expected a number"});
}

ValidationReport validate_spec_json(const json& spec) {
  ValidationReport rep;
  if (!spec.is_object()) {
    rep.issues.push_back({"", "spec must be a JSON object"});
    return rep;
  }

  const auto& kinds = experiment_kinds();
  if (!spec.contains("kind")) {
    rep.issues.push_back({"kind", "missing required field"});
  } else if (!spec.at("kind").is_string()) {
    rep.issues.push_back({"kind", "expected a string"});
  } else {
    const std::string kind = spec.at("kind").get<std::string>();
    if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end()) {
      std::string valid;
      for (const auto& k : kinds) valid += (valid.empty() ? "" : ", ") + k;
      rep.issues.push_back({"kind", "unknown experiment kind '" + kind +
                                        "' (valid kinds: " + valid + ")"});
    }
  }

  check_int_field(spec, "", "trials", 1, /*required=*/true, rep);
  check_int_field(spec, "", "base_seed", 0, /*required=*/true, rep);
  if (spec.contains("workers")) check_int_field(spec, "", "workers", 1, false, rep);
  if (spec.contains("output_dir") && !spec.at("output_dir").is_string())
    rep.issues.push_back({"output_dir", "expected a string"});

  static const std::vector<std::string> known_blocks = {
      "kind", "trials",  "base_seed", "workers", "output_dir", "export_curves",
      "reservoir", "input", "mc",     "ipc",     "fmc",        "ranks",
      "criticality", "sorn", "sor",   "pattern", "adapt",      "task"};
  for (auto it = spec.begin(); it != spec.end(); ++it) {
    if (std::find(known_blocks.begin(), known_blocks.end(), it.key()) ==
        known_blocks.end())
      rep.issues.push_back({it.key(), "unknown field"});
  }

  if (spec.contains("reservoir")) {
    const json& r = spec.at("reservoir");
    if (!r.is_object()) {
      rep.issues.push_back({"reservoir", "expected an object"});
    } else {
      check_int_field(r, "reservoir", "n_units", 1, false, rep);
      check_number_field(r, "reservoir", "spectral_radius", rep);
      check_number_field(r, "reservoir", "connection_density", rep);
      check_number_field(r, "reservoir", "leak_rate", rep);
      if (r.contains("nonlinearity")) {
        const auto& nl = r.at("nonlinearity");
        if (!nl.is_string() ||
            (nl.get<std::string>() != "tanh" && nl.get<std::string>() != "linear"))
          rep.issues.push_back({"reservoir.nonlinearity", "expected \"tanh\" or \"linear\""});
      }
    }
  }
  if (spec.contains("input")) {
    const json& blk = spec.at("input");
    if (!blk.is_object()) {
      rep.issues.push_back({"input", "expected an object"});
    } else {
      check_int_field(blk, "input", "length", 2, false, rep);
      check_number_field(blk, "input", "lo", rep);
      check_number_field(blk, "input", "hi", rep);
    }
  }
  if (spec.contains("mc")) {
    const json& blk = spec.at("mc");
    if (!blk.is_object()) {
      rep.issues.push_back({"mc", "expected an object"});
    } else {
      check_int_field(blk, "mc", "k_max", 1, false, rep);
      check_int_field(blk, "mc", "washout", 1, false, rep);
      check_number_field(blk, "mc", "ridge_lambda", rep);
    }
  }
  if (spec.contains("ipc")) {
    const json& blk = spec.at("ipc");
    if (!blk.is_object()) {
      rep.issues.push_back({"ipc", "expected an object"});
    } else {
      check_int_field(blk, "ipc", "max_degree", 1, false, rep);
      check_int_field(blk, "ipc", "max_delay", 1, false, rep);
    }
  }
  if (spec.contains("fmc")) {
    const json& blk = spec.at("fmc");
    if (!blk.is_object()) {
      rep.issues.push_back({"fmc", "expected an object"});
    } else {
      check_int_field(blk, "fmc", "k_max", 0, false, rep);
      check_number_field(blk, "fmc", "noise_variance", rep);
    }
  }

  return rep;
}

// ------------------------------------------------------------------ output

struct SummaryStat {
  double mean, stddev, min, max;
};

std::map<std::string, SummaryStat> summarize(const std::vector<Row>& rows) {
  std::map<std::string, std::vector<double>> columns;
  for (const auto& row : rows)
    for (const auto& [key, value] : row) columns[key].push_back(value);
  std::map<std::string, SummaryStat> stats;
  for (const auto& [key, values] : columns) {
    SummaryStat s{0.0, 0.0, values.front(), values.front()};
    for (double v : values) {
      s.mean += v;
      s.min = std::min(s.min, v);
      s.max = std::max(s.max, v);
    }
    s.mean /= static_cast<double>(values.size());
    for (double v : values) s.stddev += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(s.stddev / static_cast<double>(values.size()));
    stats[key] = s;
  }
  return stats;
}

void write_trials_csv(const std::vector<Row>& rows, const std::string& path) {
  if (rows.empty()) throw std::runtime_error("experiment produced no rows");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (std::size_t c = 0; c < rows.front().size(); ++c) {
    if (c) out << ',';
    out << rows.front()[c].first;
  }
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != rows.front().size())
      throw std::runtime_error("inconsistent row layout across trials");
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      out << format_double(row[c].second);
    }
    out << '\n';
  }
}

}  // namespace

ValidationReport validate_spec_text(const std::string& text) {
  ValidationReport rep;
  json spec;
  try {
    spec = json::parse(text);
  } catch (const json::parse_error& e) {
    rep.issues.push_back({"", std::string("parse error: ") + e.what()});
    return rep;
  }
  return validate_spec_json(spec);
}

ValidationReport validate_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ValidationReport rep;
    rep.issues.push_back({"", "cannot open spec file: " + path});
    return rep;
  }
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return validate_spec_text(text);
}

RunResult run_experiment_text(const std::string& spec_text, const RunOptions& opt) {
  const ValidationReport validation = validate_spec_text(spec_text);
  if (!validation.ok())
    throw std::invalid_argument("invalid experiment spec:\n" + validation.to_string());

  json spec = json::parse(spec_text);
  const std::string kind = spec.at("kind").get<std::string>();
  const int trials = spec.at("trials").get<int>();
  const std::uint64_t base_seed =
      opt.base_seed.value_or(spec.at("base_seed").get<std::uint64_t>());
  const int workers =
      std::max(1, opt.workers.value_or(jget(spec, "workers", 1)));
  const std::string out_dir =
      opt.output_dir.value_or(jget(spec, "output_dir", "rescomp_out"));
  const bool export_curves = jget(spec, "export_curves", true);

  std::filesystem::create_directories(out_dir);

  std::vector<TrialOutput> outputs(static_cast<std::size_t>(trials));
  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= trials) return;
      try {
        outputs[static_cast<std::size_t>(i)] =
            run_trial(spec, kind, i, mix_seed(base_seed, static_cast<std::uint64_t>(i)));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  if (workers == 1 || trials == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < std::min(workers, trials); ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  std::vector<Row> rows;
  for (const auto& trial_out : outputs)
    rows.insert(rows.end(), trial_out.rows.begin(), trial_out.rows.end());

  RunResult result;
  result.output_dir = out_dir;
  result.rows_written = rows.size();
  result.spec_hash = spec_hash_hex(spec.dump());

  write_trials_csv(rows, out_dir + "/trials.csv");

  if (export_curves) {
    bool any = false;
    for (const auto& trial_out : outputs)
      if (!trial_out.curves.empty()) any = true;
    if (any) {
      std::filesystem::create_directories(out_dir + "/curves");
      for (const auto& trial_out : outputs)
        for (const auto& [stem, curve] : trial_out.curves)
          write_curve_csv(curve, "k", "value", out_dir + "/curves/" + stem + ".csv");
    }
  }

  json summary;
  summary["kind"] = kind;
  summary["trials"] = trials;
  summary["base_seed"] = base_seed;
  summary["rows"] = rows.size();
  summary["spec_hash"] = result.spec_hash;
  summary["tool_version"] = kToolVersion;
  summary["prng"] = kRngName;
  json metrics = json::object();
  for (const auto& [key, s] : summarize(rows)) {
    metrics[key] = {{"mean", s.mean}, {"stddev", s.stddev}, {"min", s.min}, {"max", s.max}};
  }
  summary["metrics"] = metrics;
  std::ofstream sfile(out_dir + "/summary.json");
  if (!sfile) throw std::runtime_error("cannot write summary.json");
  sfile << summary.dump(2) << '\n';

  return result;
}

RunResult run_experiment_file(const std::string& spec_path, const RunOptions& opt) {
  std::ifstream in(spec_path);
  if (!in) throw std::runtime_error("cannot open spec file: " + spec_path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return run_experiment_text(text, opt);
}

}  // namespace rescomp::exp

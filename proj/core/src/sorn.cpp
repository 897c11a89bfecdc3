#include "rescomp/sorn.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "rescomp/readout.hpp"
#include "rescomp/rng.hpp"

namespace rescomp::sorn {

void SornParams::validate() const {
  if (n_excitatory < 2) throw std::invalid_argument("SornParams: n_excitatory must be >= 2");
  if (n_inhibitory < 1) throw std::invalid_argument("SornParams: n_inhibitory must be >= 1");
  if (!(target_rate > 0.0 && target_rate < 1.0))
    throw std::invalid_argument("SornParams: target_rate must be in (0,1)");
  if (te_max <= 0.0 || ti_max <= 0.0)
    throw std::invalid_argument("SornParams: threshold ranges must be positive");
  if (lambda_ee <= 0.0) throw std::invalid_argument("SornParams: lambda_ee must be > 0");
  if (eta_stdp < 0.0 || eta_ip < 0.0)
    throw std::invalid_argument("SornParams: learning rates must be >= 0");
}

SornState sorn_init(const SornParams& params) {
  params.validate();
  const int ne = params.n_excitatory;
  const int ni = params.n_inhibitory;
  Rng rng(params.seed);

  SornState s;
  s.params = params;
  s.x = Eigen::VectorXd::Zero(ne);
  s.x_prev = Eigen::VectorXd::Zero(ne);
  s.y = Eigen::VectorXd::Zero(ni);

  // sparse EE matrix: expected lambda_ee incoming connections per unit,
  // no self-recurrence, rows redrawn until they have at least one entry
  const double p_conn = std::min(1.0, params.lambda_ee / static_cast<double>(ne - 1));
  s.w_ee = Eigen::MatrixXd::Zero(ne, ne);
  s.ee_mask.setConstant(ne, ne, false);
  for (int i = 0; i < ne; ++i) {
    int incoming = 0;
    for (int attempt = 0; attempt < 1000 && incoming == 0; ++attempt) {
      for (int j = 0; j < ne; ++j) {
        if (j == i) continue;
        if (unit_uniform(rng) < p_conn) {
          s.ee_mask(i, j) = true;
          s.w_ee(i, j) = unit_uniform(rng);
          ++incoming;
        }
      }
    }
    if (incoming == 0)
      throw std::runtime_error("sorn_init: could not draw incoming connections");
  }

  s.w_ei.resize(ne, ni);
  for (int i = 0; i < ne; ++i)
    for (int j = 0; j < ni; ++j) s.w_ei(i, j) = unit_uniform(rng);
  s.w_ie.resize(ni, ne);
  for (int i = 0; i < ni; ++i)
    for (int j = 0; j < ne; ++j) s.w_ie(i, j) = unit_uniform(rng);

  // all three matrices start row-normalized
  for (int i = 0; i < ne; ++i) s.w_ee.row(i) /= s.w_ee.row(i).sum();
  for (int i = 0; i < ne; ++i) s.w_ei.row(i) /= s.w_ei.row(i).sum();
  for (int i = 0; i < ni; ++i) s.w_ie.row(i) /= s.w_ie.row(i).sum();

  // thresholds in (0, max]: 1 - u maps [0,1) onto (0,1]
  s.t_e.resize(ne);
  for (int i = 0; i < ne; ++i) s.t_e(i) = params.te_max * (1.0 - unit_uniform(rng));
  s.t_i.resize(ni);
  for (int i = 0; i < ni; ++i) s.t_i(i) = params.ti_max * (1.0 - unit_uniform(rng));
  return s;
}

void sorn_step(SornState& s, const Eigen::VectorXd& drive) {
  const int ne = s.params.n_excitatory;
  if (drive.size() != ne) throw std::invalid_argument("sorn_step: drive length mismatch");

  Eigen::VectorXd r = s.w_ee * s.x - s.w_ei * s.y - s.t_e + drive;
  Eigen::VectorXd x_new(ne);
  for (int i = 0; i < ne; ++i) x_new(i) = r(i) > 0.0 ? 1.0 : 0.0;

  const Eigen::VectorXd& x_for_inhib = s.params.inhibitory_uses_new_x ? x_new : s.x;
  Eigen::VectorXd q = s.w_ie * x_for_inhib - s.t_i;
  Eigen::VectorXd y_new(s.params.n_inhibitory);
  for (int j = 0; j < s.params.n_inhibitory; ++j) y_new(j) = q(j) > 0.0 ? 1.0 : 0.0;

  s.x_prev = s.x;
  s.x = std::move(x_new);
  s.y = std::move(y_new);
}

void stdp_update(SornState& s) {
  const double eta = s.params.eta_stdp;
  if (eta == 0.0) return;
  const int ne = s.params.n_excitatory;
  // only pairs with activity on either side of the step can change
  std::vector<int> now, before;
  for (int i = 0; i < ne; ++i) {
    if (s.x(i) > 0.5) now.push_back(i);
    if (s.x_prev(i) > 0.5) before.push_back(i);
  }
  for (int i : now)
    for (int j : before)
      if (s.ee_mask(i, j)) s.w_ee(i, j) += eta;  // x_i(t) x_j(t-1)
  for (int i : before)
    for (int j : now)
      if (s.ee_mask(i, j)) s.w_ee(i, j) = std::max(0.0, s.w_ee(i, j) - eta);  // x_i(t-1) x_j(t)
}

void synaptic_normalization(SornState& s) {
  const int ne = s.params.n_excitatory;
  for (int i = 0; i < ne; ++i) {
    const double sum = s.w_ee.row(i).sum();
    if (sum > 0.0) {
      s.w_ee.row(i) /= sum;
    } else {
      s.sn_zero_row_flag = true;
    }
  }
}

void ip_update(SornState& s) {
  s.t_e += s.params.eta_ip * (s.x.array() - s.params.target_rate).matrix();
}

std::vector<int> CountingTask::word(int which) const {
  if (which != 0 && which != 1) throw std::invalid_argument("CountingTask: word index");
  const int base = which == 0 ? 0 : 3;
  std::vector<int> w;
  w.reserve(static_cast<std::size_t>(n + 2));
  w.push_back(base);
  for (int i = 0; i < n; ++i) w.push_back(base + 1);
  w.push_back(base + 2);
  return w;
}

double CountingTask::max_accuracy() const {
  // per word of length n+2: n+1 deterministic transitions, one fair coin
  return (static_cast<double>(n) + 1.5) / static_cast<double>(n + 2);
}

CountingSequence counting_task_generate(const CountingTask& task, int n_words,
                                        std::uint64_t seed) {
  if (task.n < 1) throw std::invalid_argument("counting_task_generate: n must be >= 1");
  if (n_words < 1) throw std::invalid_argument("counting_task_generate: n_words must be >= 1");
  Rng rng(seed);
  CountingSequence seq;
  seq.symbols.reserve(static_cast<std::size_t>(n_words * task.word_length()));
  const auto w0 = task.word(0);
  const auto w1 = task.word(1);
  for (int w = 0; w < n_words; ++w) {
    const auto& word = unit_uniform(rng) < 0.5 ? w0 : w1;
    seq.symbols.insert(seq.symbols.end(), word.begin(), word.end());
  }
  const auto t_len = static_cast<Eigen::Index>(seq.symbols.size());
  Eigen::MatrixXd one_hot = Eigen::MatrixXd::Zero(t_len, CountingTask::kAlphabet);
  for (Eigen::Index t = 0; t < t_len; ++t) one_hot(t, seq.symbols[static_cast<std::size_t>(t)]) = 1.0;
  std::vector<std::string> names;
  for (int c = 0; c < CountingTask::kAlphabet; ++c) names.push_back("s" + std::to_string(c));
  seq.one_hot = TimeSeries(std::move(names), std::move(one_hot));
  return seq;
}

Eigen::MatrixXd make_input_map(int n_excitatory, int alphabet, std::uint64_t seed) {
  const int subset = std::max(1, n_excitatory / 10);
  std::vector<int> perm(static_cast<std::size_t>(n_excitatory));
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  Eigen::MatrixXd map = Eigen::MatrixXd::Zero(n_excitatory, alphabet);
  int cursor = 0;
  for (int s = 0; s < alphabet; ++s) {
    for (int i = 0; i < subset; ++i) {
      map(perm[static_cast<std::size_t>(cursor % n_excitatory)], s) = 1.0;
      ++cursor;  // wraps (overlapping subsets) only when units run out
    }
  }
  return map;
}

ActivityStats activity_statistics(const Eigen::MatrixXd& raster) {
  const Eigen::Index t_len = raster.rows();
  const Eigen::Index n = raster.cols();
  if (t_len < 2 || n < 2)
    throw std::invalid_argument("activity_statistics: raster too small");
  ActivityStats stats;
  const Eigen::VectorXd rates = raster.colwise().mean();
  stats.mean_rate = rates.mean();
  stats.rate_std =
      std::sqrt((rates.array() - stats.mean_rate).square().sum() / static_cast<double>(n));

  const Eigen::MatrixXd centered = raster.rowwise() - rates.transpose();
  const Eigen::MatrixXd cov =
      centered.transpose() * centered / static_cast<double>(t_len);
  double corr_sum = 0.0;
  Eigen::Index pairs = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (cov(i, i) <= 0.0) continue;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (cov(j, j) <= 0.0) continue;
      corr_sum += cov(i, j) / std::sqrt(cov(i, i) * cov(j, j));
      ++pairs;
    }
  }
  stats.mean_pairwise_correlation = pairs > 0 ? corr_sum / static_cast<double>(pairs) : 0.0;
  return stats;
}

SornEvalReport sorn_train_and_eval(const SornParams& params, const CountingTask& task,
                                   const PlasticityFlags& flags, const SornPhases& phases,
                                   double ridge_lambda, Eigen::Index stats_window) {
  if (phases.plastic_steps < 0 || phases.readout_steps < 10 || phases.test_steps < 10)
    throw std::invalid_argument("sorn_train_and_eval: invalid phases");

  SornState s = sorn_init(params);
  const Eigen::MatrixXd input_map =
      make_input_map(params.n_excitatory, CountingTask::kAlphabet, mix_seed(params.seed, 1));

  const Eigen::Index total_steps =
      phases.plastic_steps + phases.readout_steps + phases.test_steps;
  const int words_needed =
      static_cast<int>(total_steps / task.word_length()) + 2;
  const CountingSequence seq =
      counting_task_generate(task, words_needed, mix_seed(params.seed, 2));

  SornEvalReport rep;
  const Eigen::Index stats_from =
      std::max<Eigen::Index>(0, phases.plastic_steps - stats_window);
  Eigen::MatrixXd raster(phases.plastic_steps - stats_from, params.n_excitatory);

  Eigen::Index t = 0;
  for (; t < phases.plastic_steps; ++t) {
    const Eigen::VectorXd drive = input_map * seq.one_hot.values.row(t).transpose();
    sorn_step(s, drive);
    if (flags.stdp) stdp_update(s);
    if (flags.sn) synaptic_normalization(s);
    if (flags.ip) ip_update(s);
    if (t >= stats_from) raster.row(t - stats_from) = s.x.transpose();
  }
  if (raster.rows() >= 2) {
    const ActivityStats stats = activity_statistics(raster);
    rep.mean_rate = stats.mean_rate;
    rep.rate_std = stats.rate_std;
    rep.mean_pairwise_correlation = stats.mean_pairwise_correlation;
  }

  // frozen readout phase: predict the next symbol from x(t)
  Eigen::MatrixXd states(phases.readout_steps, params.n_excitatory);
  Eigen::MatrixXd targets = Eigen::MatrixXd::Zero(phases.readout_steps, CountingTask::kAlphabet);
  for (Eigen::Index i = 0; i < phases.readout_steps; ++i, ++t) {
    const Eigen::VectorXd drive = input_map * seq.one_hot.values.row(t).transpose();
    sorn_step(s, drive);
    states.row(i) = s.x.transpose();
    targets(i, seq.symbols[static_cast<std::size_t>(t + 1)]) = 1.0;
  }
  rep.all_silent = states.cwiseAbs().maxCoeff() == 0.0;

  StateTrajectory traj{states, /*washout=*/0};
  std::vector<std::string> names;
  for (int c = 0; c < CountingTask::kAlphabet; ++c) names.push_back("t" + std::to_string(c));
  const Readout ro = train_readout(traj, TimeSeries(names, targets), ridge_lambda);

  Eigen::Index correct = 0;
  for (Eigen::Index i = 0; i < phases.test_steps; ++i, ++t) {
    const Eigen::VectorXd drive = input_map * seq.one_hot.values.row(t).transpose();
    sorn_step(s, drive);
    Eigen::VectorXd feat(params.n_excitatory + 1);
    feat.head(params.n_excitatory) = s.x;
    feat(params.n_excitatory) = 1.0;
    const Eigen::VectorXd scores = ro.w_out * feat;
    Eigen::Index pred = 0;
    scores.maxCoeff(&pred);
    if (static_cast<int>(pred) == seq.symbols[static_cast<std::size_t>(t + 1)]) ++correct;
  }
  rep.accuracy = static_cast<double>(correct) / static_cast<double>(phases.test_steps);
  rep.max_achievable = task.max_accuracy();
  rep.normalized_performance = rep.accuracy / rep.max_achievable;
  return rep;
}

}  // namespace rescomp::sorn

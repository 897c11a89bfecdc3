#include "rescomp/te_adaptation.hpp"

#include <stdexcept>

#include "rescomp/info/estimators.hpp"

namespace rescomp::tea {

void AdaptiveReservoir::set_memory(Eigen::Index unit, int memory) {
  if (memory < 1) throw std::invalid_argument("AdaptiveReservoir: memory must be >= 1");
  m(unit) = memory;
  a(unit) = 2.0 / (1.0 + static_cast<double>(memory));
}

AdaptiveReservoir make_adaptive(const Reservoir& r) {
  if (r.params.input_dim != 1)
    throw std::invalid_argument("make_adaptive: scalar input reservoir required");
  AdaptiveReservoir ar;
  ar.w = r.w_res;
  ar.w_in = r.w_in.col(0);
  ar.m = Eigen::VectorXi::Ones(r.params.n_units);
  ar.a = Eigen::VectorXd::Ones(r.params.n_units);  // 2 / (1 + 1)
  ar.frozen.assign(static_cast<std::size_t>(r.params.n_units), false);
  return ar;
}

AdaptiveStepResult adaptive_step(const AdaptiveReservoir& r, const Eigen::VectorXd& y,
                                 double u) {
  if (y.size() != r.size()) throw std::invalid_argument("adaptive_step: state size mismatch");
  AdaptiveStepResult out;
  out.x = r.a.asDiagonal() * (r.w * y) + (1.0 - r.a.array()).matrix().asDiagonal() * y +
          r.w_in * u;
  out.y = out.x.array().tanh();
  return out;
}

HistorySelection select_input_history(const TimeSeries& input, const TimeSeries& target,
                                      double epsilon, int l_max, int bins) {
  if (l_max < 1) throw std::invalid_argument("select_input_history: l_max must be >= 1");
  if (input.length() != target.length())
    throw std::invalid_argument("select_input_history: series lengths differ");
  if (input.length() < static_cast<Eigen::Index>(l_max + 2))
    throw std::invalid_argument("select_input_history: series too short for l_max");

  info::DiscretizationSpec dspec;
  dspec.bins = bins;
  const info::SymbolSeries u = info::discretize(input.as_vector(), dspec);
  const info::SymbolSeries v = info::discretize(target.as_vector(), dspec);

  HistorySelection sel;
  sel.te_curve.reserve(static_cast<std::size_t>(l_max));
  for (int l = 1; l <= l_max; ++l) {
    info::EmbeddingSpec espec;
    espec.k = 1;
    espec.l = l;
    sel.te_curve.push_back(info::transfer_entropy(u, v, espec).value_bits);
  }
  // ascending scan: first l whose next increment is within epsilon
  for (int l = 1; l < l_max; ++l) {
    if (sel.te_curve[static_cast<std::size_t>(l)] <=
        sel.te_curve[static_cast<std::size_t>(l - 1)] + epsilon) {
      sel.l_hat = l;
      return sel;
    }
  }
  sel.l_hat = l_max;
  sel.plateau_found = false;
  return sel;
}

namespace {

std::vector<double> epoch_unit_te(const EpochRecord& records, int l_hat, int bins,
                                  Eigen::Index estimate_from) {
  info::DiscretizationSpec dspec;
  dspec.bins = bins;
  info::EmbeddingSpec espec;
  espec.k = 1;
  espec.l = l_hat;
  const Eigen::Index n = records.x.cols();
  const Eigen::Index rows = records.x.rows() - estimate_from;
  std::vector<double> te(static_cast<std::size_t>(n), 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const info::SymbolSeries xs = info::discretize(records.x.col(i).tail(rows), dspec);
    const info::SymbolSeries ys = info::discretize(records.y.col(i).tail(rows), dspec);
    te[static_cast<std::size_t>(i)] = info::transfer_entropy(xs, ys, espec).value_bits;
  }
  return te;
}

}  // namespace

std::vector<double> adapt_epoch(AdaptiveReservoir& r, const EpochRecord& records,
                                const std::vector<double>& previous_te, int l_hat,
                                double epsilon, int bins, std::vector<bool>* changed,
                                Eigen::Index estimate_from) {
  const Eigen::Index n = r.size();
  if (records.x.cols() != n || records.y.cols() != n)
    throw std::invalid_argument("adapt_epoch: record width mismatch");
  if (records.x.rows() != records.y.rows())
    throw std::invalid_argument("adapt_epoch: record length mismatch");
  if (static_cast<Eigen::Index>(previous_te.size()) != n)
    throw std::invalid_argument("adapt_epoch: previous te size mismatch");

  std::vector<double> te = epoch_unit_te(records, l_hat, bins, estimate_from);
  if (changed) changed->assign(static_cast<std::size_t>(n), false);

  for (Eigen::Index i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    if (r.frozen[idx]) continue;
    const double delta = te[idx] - previous_te[idx];
    if (delta > epsilon) {
      r.set_memory(i, r.m(i) + 1);
      if (changed) (*changed)[idx] = true;
    } else if (delta < -epsilon && r.m(i) > 1) {
      r.set_memory(i, r.m(i) - 1);
      if (changed) (*changed)[idx] = true;
    }
  }
  return te;
}

PretrainReport pretrain(AdaptiveReservoir& r, const TimeSeries& input,
                        const TimeSeries& target, const AdaptationConfig& cfg) {
  if (input.length() != target.length())
    throw std::invalid_argument("pretrain: series lengths differ");
  if (cfg.epoch_length < 10)
    throw std::invalid_argument("pretrain: epoch_length too short");

  PretrainReport rep;
  const HistorySelection sel =
      select_input_history(input, target, cfg.epsilon, cfg.l_max, cfg.bins);
  rep.l_hat = sel.l_hat;

  const Eigen::Index n = r.size();
  const Eigen::VectorXd u_series = input.as_vector();
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  Eigen::Index cursor = 0;

  std::vector<double> prev_te;
  std::vector<int> stable_epochs(static_cast<std::size_t>(n), 0);
  std::vector<bool> changed;

  if (cfg.max_epochs == 0) {
    rep.timed_out = true;
    return rep;
  }

  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    EpochRecord rec;
    rec.x.resize(cfg.epoch_length, n);
    rec.y.resize(cfg.epoch_length, n);
    for (Eigen::Index t = 0; t < cfg.epoch_length; ++t) {
      const double u = u_series(cursor);
      cursor = (cursor + 1) % u_series.size();  // wrap long adaptation runs
      const AdaptiveStepResult step = adaptive_step(r, y, u);
      rec.x.row(t) = step.x.transpose();
      rec.y.row(t) = step.y.transpose();
      y = step.y;
    }
    const Eigen::Index warmup = epoch == 0 ? cfg.epoch_length / 10 : 0;

    if (epoch == 0) {
      // baseline epoch: record TE only, nothing to compare against yet
      prev_te = epoch_unit_te(rec, sel.l_hat, cfg.bins, warmup);
      ++rep.epochs_run;
      for (Eigen::Index i = 0; i < n; ++i)
        rep.trace.push_back({epoch, static_cast<int>(i), prev_te[static_cast<std::size_t>(i)],
                             r.m(i), r.frozen[static_cast<std::size_t>(i)]});
      continue;
    }

    prev_te = adapt_epoch(r, rec, prev_te, sel.l_hat, cfg.epsilon, cfg.bins, &changed, warmup);
    ++rep.epochs_run;

    bool all_frozen = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      if (r.frozen[idx]) continue;
      stable_epochs[idx] = changed[idx] ? 0 : stable_epochs[idx] + 1;
      if (stable_epochs[idx] >= cfg.stabilization_window) r.frozen[idx] = true;
      if (!r.frozen[idx]) all_frozen = false;
    }
    for (Eigen::Index i = 0; i < n; ++i)
      rep.trace.push_back({epoch, static_cast<int>(i), prev_te[static_cast<std::size_t>(i)],
                           r.m(i), r.frozen[static_cast<std::size_t>(i)]});
    if (all_frozen) {
      std::fill(r.frozen.begin(), r.frozen.end(), true);
      return rep;
    }
  }
  rep.timed_out = true;
  std::fill(r.frozen.begin(), r.frozen.end(), true);
  return rep;
}

TimeSeries drive_adaptive(const AdaptiveReservoir& r, const TimeSeries& input) {
  const Eigen::VectorXd u = input.as_vector();
  Eigen::MatrixXd states(u.size(), r.size());
  Eigen::VectorXd y = Eigen::VectorXd::Zero(r.size());
  for (Eigen::Index t = 0; t < u.size(); ++t) {
    const AdaptiveStepResult step = adaptive_step(r, y, u(t));
    y = step.y;
    states.row(t) = y.transpose();
  }
  std::vector<std::string> names;
  for (Eigen::Index i = 0; i < r.size(); ++i) names.push_back("y" + std::to_string(i));
  return TimeSeries(std::move(names), std::move(states));
}

}  // namespace rescomp::tea

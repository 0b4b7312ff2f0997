#include "tpauc/trainer.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <fstream>

namespace tpauc {

namespace {

constexpr std::array<std::pair<TrainMode, std::string_view>, 6> kModeNames{{
    {TrainMode::Auc, "auc"},
    {TrainMode::PairwiseTpauc, "pairwise-tpauc"},
    {TrainMode::MinimaxTpauc, "minimax-tpauc"},
    {TrainMode::TruncTpauc, "trunc-tpauc"},
    {TrainMode::TruncOpauc, "trunc-opauc"},
    {TrainMode::PairwiseOpauc, "pairwise-opauc"},
}};

bool is_truncated(TrainMode m) { return m == TrainMode::TruncTpauc || m == TrainMode::TruncOpauc; }

bool all_finite(std::span<const double> xs) {
  return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

// Scores of the whole dataset split by class.
ScorePair score_dataset(const ScorerParams& model, const Dataset& ds) {
  return split_scores(ds, forward(model, ds.features()));
}

}  // namespace

std::string_view to_string(TrainMode mode) noexcept {
  for (const auto& [m, name] : kModeNames) {
    if (m == mode) return name;
  }
  return "?";
}

std::optional<TrainMode> parse_train_mode(std::string_view name) noexcept {
  for (const auto& [m, n] : kModeNames) {
    if (n == name) return m;
  }
  return std::nullopt;
}

void TrainConfig::validate() const {
  require(warmup_epochs <= epochs, "warmup_epochs must not exceed epochs");
  require(epochs >= 1, "epochs must be >= 1");
  batch.validate();
  require(lr_theta >= 0.0 && lr_a >= 0.0 && lr_b >= 0.0, "learning rates must be nonnegative");
  require(lr_decay > 0.0 && lr_decay <= 1.0, "lr_decay must lie in (0,1]");
  require(weight_decay >= 0.0, "weight_decay must be nonnegative");
}

OutputGradients mode_output_grads(TrainMode mode, std::span<const double> pos, std::span<const double> neg,
                                  const TrainConfig& cfg, const MinimaxState& state) {
  static const WeightScheme kOne = WeightScheme::constant();
  switch (mode) {
    case TrainMode::Auc:
      return weighted_square_risk_grads(pos, neg, kOne, kOne);
    case TrainMode::PairwiseTpauc:
      return weighted_square_risk_grads(pos, neg, cfg.pos_scheme(), cfg.neg_scheme());
    case TrainMode::PairwiseOpauc:
      return weighted_square_risk_grads(pos, neg, kOne, cfg.neg_scheme());
    case TrainMode::MinimaxTpauc:
      return cfg.theta_grad == ThetaGrad::Saddle
                 ? per_example_output_grads(pos, neg, cfg.pos_scheme(), cfg.neg_scheme(), state)
                 : pairwise_risk_output_grads(pos, neg, cfg.pos_scheme(), cfg.neg_scheme());
    case TrainMode::TruncTpauc:
    case TrainMode::TruncOpauc:
      break;
  }
  throw DomainError("mode_output_grads: truncated modes need hard-set flags");
}

HardFlags rank_hard_flags(const ScorePair& s, const TpaucSpec& spec, TrainMode mode) {
  require(is_truncated(mode), "rank_hard_flags: not a truncated mode");
  const HardSets hs = select_hard_sets(s, spec);
  HardFlags flags{std::vector<char>(s.n_pos(), mode == TrainMode::TruncOpauc ? 1 : 0),
                  std::vector<char>(s.n_neg(), 0)};
  if (mode == TrainMode::TruncTpauc) {
    for (std::size_t i : hs.pos_hard) flags.pos[i] = 1;
  }
  for (std::size_t j : hs.neg_hard) flags.neg[j] = 1;
  return flags;
}

OutputGradients truncated_baseline_step(std::span<const double> pos, std::span<const double> neg,
                                        std::span<const char> pos_hard, std::span<const char> neg_hard) {
  require(pos_hard.size() == pos.size() && neg_hard.size() == neg.size(), "truncated_baseline_step: flag length");
  std::vector<double> u(pos.size()), w(neg.size());
  std::size_t hp = 0, hn = 0;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    if (pos_hard[i]) {
      u[i] = 1.0;
      ++hp;
    }
  }
  for (std::size_t j = 0; j < neg.size(); ++j) {
    if (neg_hard[j]) {
      w[j] = 1.0;
      ++hn;
    }
  }
  if (hp == 0 || hn == 0) {
    return OutputGradients{0.0, std::vector<double>(pos.size(), 0.0), std::vector<double>(neg.size(), 0.0)};
  }
  const std::vector<double> zp(pos.size(), 0.0), zn(neg.size(), 0.0);
  return square_pair_objective(pos, neg, u, zp, w, zn, 1.0 / (static_cast<double>(hp) * static_cast<double>(hn)));
}

std::vector<double> evaluate(const ScorerParams& model, const Dataset& ds, std::span<const TpaucSpec> specs) {
  const ScorePair s = score_dataset(model, ds);
  std::vector<double> out;
  out.reserve(specs.size());
  for (const auto& spec : specs) out.push_back(empirical_tpauc(s, spec));
  return out;
}

TrainResult train(const Dataset& train_set, const Dataset& val_set, const ScorerParams& model,
                  const TrainConfig& cfg) {
  cfg.validate();
  require(train_set.dim() == model.dim() && val_set.dim() == model.dim(),
          "train: dataset dimension does not match the model");
  BatchSpec batch = cfg.batch;
  batch.seed = cfg.seed;
  const std::size_t steps = cfg.steps_per_epoch > 0
                                ? cfg.steps_per_epoch
                                : (train_set.n_pos() + batch.pos_per_batch - 1) / batch.pos_per_batch;

  ScorerParams params = model;
  MinimaxState state = MinimaxState::initial(std::max(cfg.pos_scheme().sup_weight(), cfg.neg_scheme().sup_weight()));
  TrainResult result{params, {}, 0, false};
  double best_val = -1.0;
  std::size_t since_best = 0;
  double lr = cfg.lr_theta;

  auto diverged = [&](const std::string& where) {
    throw TrainingDiverged("non-finite " + where + "; aborting (mode " + std::string(to_string(cfg.mode)) + ")",
                           result);
  };

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    const bool tpauc_phase = epoch >= cfg.warmup_epochs;
    const TrainMode mode = tpauc_phase ? cfg.mode : TrainMode::Auc;

    // Truncated baselines rank the whole training pool once per epoch.
    std::vector<char> row_hard;
    if (is_truncated(mode) && !cfg.rerank_per_batch) {
      const HardFlags flags = rank_hard_flags(score_dataset(params, train_set), cfg.spec, mode);
      row_hard.assign(train_set.size(), 0);
      for (std::size_t i = 0; i < flags.pos.size(); ++i) row_hard[train_set.pos_index()[i]] = flags.pos[i];
      for (std::size_t j = 0; j < flags.neg.size(); ++j) row_hard[train_set.neg_index()[j]] = flags.neg[j];
    }

    for (std::size_t step = 0; step < steps; ++step) {
      const Batch b = sample_batch(train_set, batch, epoch, step);
      std::vector<std::size_t> rows = b.pos;
      rows.insert(rows.end(), b.neg.begin(), b.neg.end());
      const FeatureMatrix x = train_set.gather(rows);
      const std::vector<double> scores = forward(params, x);
      const auto pos = std::span<const double>(scores).first(b.pos.size());
      const auto neg = std::span<const double>(scores).subspan(b.pos.size());

      OutputGradients g;
      if (is_truncated(mode)) {
        std::vector<char> ph(pos.size()), nh(neg.size());
        if (cfg.rerank_per_batch) {
          const HardFlags flags = rank_hard_flags(ScorePair({pos.begin(), pos.end()}, {neg.begin(), neg.end()}),
                                                  cfg.spec, mode);
          ph = flags.pos;
          nh = flags.neg;
        } else {
          for (std::size_t i = 0; i < ph.size(); ++i) ph[i] = row_hard[b.pos[i]];
          for (std::size_t j = 0; j < nh.size(); ++j) nh[j] = row_hard[b.neg[j]];
        }
        g = truncated_baseline_step(pos, neg, ph, nh);
      } else {
        g = mode_output_grads(mode, pos, neg, cfg, state);
      }
      if (!std::isfinite(g.value) || !all_finite(g.d_pos) || !all_finite(g.d_neg)) {
        diverged("loss at epoch " + std::to_string(epoch) + " step " + std::to_string(step));
      }

      std::vector<double> d_out = std::move(g.d_pos);
      d_out.insert(d_out.end(), g.d_neg.begin(), g.d_neg.end());
      std::vector<double> grad = backward(params, x, d_out);
      auto theta = params.values();
      for (std::size_t k = 0; k < theta.size(); ++k) theta[k] -= lr * (grad[k] + cfg.weight_decay * theta[k]);
      if (!all_finite(theta)) diverged("parameters at epoch " + std::to_string(epoch));

      if (mode == TrainMode::MinimaxTpauc) {
        const BatchStatistics st = batch_statistics(pos, neg, cfg.pos_scheme(), cfg.neg_scheme());
        state = sgda_step(st, state, cfg.lr_a, cfg.lr_b);
      }
    }
    lr *= cfg.lr_decay;

    const ScorePair train_scores = score_dataset(params, train_set);
    const PairRiskBreakdown risk = weighted_risk(train_scores, cfg.pos_scheme(), cfg.neg_scheme(), cfg.spec);
    EpochRecord rec;
    rec.epoch = epoch;
    rec.r_psi = risk.r_weighted;
    rec.r_surrogate = risk.r_truncated;
    rec.r_zero_one = risk.r_zero_one;
    rec.tpauc_val = empirical_tpauc(score_dataset(params, val_set), cfg.spec);
    rec.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    result.history.push_back(rec);
    if (!std::isfinite(rec.r_psi) || !std::isfinite(rec.r_surrogate)) diverged("risk at epoch " + std::to_string(epoch));

    if (rec.tpauc_val > best_val) {
      best_val = rec.tpauc_val;
      result.best = params;
      result.best_epoch = epoch;
      since_best = 0;
    } else if (cfg.patience > 0 && ++since_best >= cfg.patience) {
      result.early_stopped = true;
      break;
    }
  }
  return result;
}

void write_training_log(std::span<const EpochRecord> history, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write '" + path.string() + "'");
  out.precision(17);
  out << "epoch,r_psi,r_surrogate,r_zero_one,tpauc_val,wall_ms\n";
  for (const auto& r : history) {
    out << r.epoch << ',' << r.r_psi << ',' << r.r_surrogate << ',' << r.r_zero_one << ',' << r.tpauc_val << ','
        << r.wall_ms << '\n';
  }
  if (!out) throw DomainError("write failed for '" + path.string() + "'");
}

}  // namespace tpauc

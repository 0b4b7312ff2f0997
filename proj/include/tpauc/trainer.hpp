#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tpauc/data.hpp"
#include "tpauc/errors.hpp"
#include "tpauc/metrics.hpp"
#include "tpauc/minimax.hpp"
#include "tpauc/risk.hpp"
#include "tpauc/scorer.hpp"
#include "tpauc/weighting.hpp"

namespace tpauc {

enum class TrainMode {
  Auc,            // plain square-loss AUC risk
  PairwiseTpauc,  // weighted pairwise risk R_psi
  MinimaxTpauc,   // instance-wise minimax form trained by SGDA
  TruncTpauc,     // square loss on hard positives x hard negatives
  TruncOpauc,     // square loss on all positives x hard negatives
  PairwiseOpauc,  // R_psi with positive weights fixed to 1
};

std::string_view to_string(TrainMode mode) noexcept;
std::optional<TrainMode> parse_train_mode(std::string_view name) noexcept;

/// How the minimax mode differentiates through the scores.
enum class ThetaGrad {
  Saddle,    // gradient of the minimax objective at the current (a, b)
  Pairwise,  // gradient of the pairwise weighted risk r
};

struct TrainConfig {
  TrainMode mode = TrainMode::PairwiseTpauc;
  WeightScheme scheme = WeightScheme::poly(3.0);
  std::optional<WeightScheme> scheme_neg;  // negatives' weighting when it differs from `scheme`
  TpaucSpec spec{0.5, 0.5};
  std::size_t warmup_epochs = 0;
  std::size_t epochs = 100;
  BatchSpec batch = BatchSpec::with_ratio(128, 0);  // batch.seed is replaced by `seed`
  double lr_theta = 0.1;
  double lr_a = 0.1;
  double lr_b = 0.1;
  double lr_decay = 0.99;
  double weight_decay = 1e-5;
  std::uint64_t seed = 0;
  std::size_t patience = 20;         // epochs without validation improvement; 0 disables early stop
  std::size_t steps_per_epoch = 0;   // 0: ceil(n_pos / pos_per_batch)
  ThetaGrad theta_grad = ThetaGrad::Saddle;
  bool rerank_per_batch = false;     // truncated modes: rank inside each batch instead of once per epoch

  const WeightScheme& pos_scheme() const noexcept { return scheme; }
  const WeightScheme& neg_scheme() const noexcept { return scheme_neg ? *scheme_neg : scheme; }
  void validate() const;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double r_psi = 0.0;        // weighted pairwise risk on the training set
  double r_surrogate = 0.0;  // truncated square-loss risk on the training set
  double r_zero_one = 0.0;   // truncated 0-1 risk on the training set
  double tpauc_val = 0.0;    // TPAUC at cfg.spec on the validation set
  std::int64_t wall_ms = 0;
};

struct TrainResult {
  ScorerParams best;
  std::vector<EpochRecord> history;
  std::size_t best_epoch = 0;
  bool early_stopped = false;
};

/// Thrown when a loss or gradient turns non-finite; carries the run so far.
class TrainingDiverged : public DomainError {
 public:
  TrainingDiverged(const std::string& what, TrainResult partial)
      : DomainError(what), partial_(std::move(partial)) {}
  const TrainResult& partial() const noexcept { return partial_; }

 private:
  TrainResult partial_;
};

/// Warm-up epochs on the plain AUC risk, then the configured mode. Returns the
/// parameters with the best validation TPAUC.
TrainResult train(const Dataset& train_set, const Dataset& val_set, const ScorerParams& model,
                  const TrainConfig& cfg);

/// Score gradients of one step in `mode` (everything except the truncated
/// modes, which use truncated_baseline_step). `state` is read by MinimaxTpauc only.
OutputGradients mode_output_grads(TrainMode mode, std::span<const double> pos, std::span<const double> neg,
                                  const TrainConfig& cfg, const MinimaxState& state);

struct HardFlags {
  std::vector<char> pos;  // per positive: member of the hard set
  std::vector<char> neg;  // per negative
};

/// Hard-set membership for a truncated mode: TruncTpauc uses the bottom-alpha
/// positives and top-beta negatives, TruncOpauc keeps every positive.
HardFlags rank_hard_flags(const ScorePair& s, const TpaucSpec& spec, TrainMode mode);

/// Square-loss gradient over the flagged positive x flagged negative pairs,
/// normalized by (#flagged pos) * (#flagged neg). No flagged pair: zero gradient.
OutputGradients truncated_baseline_step(std::span<const double> pos, std::span<const double> neg,
                                        std::span<const char> pos_hard, std::span<const char> neg_hard);

/// TPAUC of `model` on `ds` for each spec.
std::vector<double> evaluate(const ScorerParams& model, const Dataset& ds, std::span<const TpaucSpec> specs);

void write_training_log(std::span<const EpochRecord> history, const std::filesystem::path& path);

}  // namespace tpauc

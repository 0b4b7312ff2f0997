#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "tpauc/trainer.hpp"

using namespace tpauc;

namespace {

const Dataset& train_data() {
  static const Dataset ds = gen_gaussian_features(60, 600, 2, 1.5, 1);
  return ds;
}
const Dataset& val_data() {
  static const Dataset ds = gen_gaussian_features(60, 600, 2, 1.5, 2);
  return ds;
}

TrainConfig small_config(TrainMode mode) {
  TrainConfig cfg;
  cfg.mode = mode;
  cfg.epochs = 8;
  cfg.batch = BatchSpec::with_ratio(66, 0);
  cfg.patience = 0;
  return cfg;
}

}  // namespace

TEST_CASE("mode names round-trip") {
  for (TrainMode m : {TrainMode::Auc, TrainMode::PairwiseTpauc, TrainMode::MinimaxTpauc, TrainMode::TruncTpauc,
                      TrainMode::TruncOpauc, TrainMode::PairwiseOpauc}) {
    CHECK(parse_train_mode(to_string(m)) == m);
  }
  CHECK_FALSE(parse_train_mode("sgd").has_value());
}

TEST_CASE("config validation") {
  TrainConfig cfg;
  cfg.warmup_epochs = cfg.epochs + 1;
  CHECK_THROWS(cfg.validate());
  cfg = TrainConfig{};
  cfg.lr_decay = 0.0;
  CHECK_THROWS(cfg.validate());
  cfg = TrainConfig{};
  cfg.lr_theta = -1.0;
  CHECK_THROWS(cfg.validate());
  CHECK_NOTHROW(TrainConfig{}.validate());
}

TEST_CASE("constant weighting degenerates to the plain AUC gradient") {
  const std::vector<double> pos{0.2, 0.7, 0.4}, neg{0.1, 0.5, 0.3, 0.9};
  TrainConfig cfg;
  cfg.scheme = WeightScheme::constant();
  const auto st = MinimaxState::initial(1.0);
  const auto a = mode_output_grads(TrainMode::PairwiseTpauc, pos, neg, cfg, st);
  const auto b = mode_output_grads(TrainMode::Auc, pos, neg, cfg, st);
  CHECK(a.value == b.value);
  CHECK(a.d_pos == b.d_pos);
  CHECK(a.d_neg == b.d_neg);
}

TEST_CASE("pairwise OPAUC keeps positive weights at one") {
  const std::vector<double> pos{0.2, 0.7, 0.4}, neg{0.1, 0.5, 0.3, 0.9};
  TrainConfig cfg;
  cfg.scheme = WeightScheme::poly(3.0);
  const auto st = MinimaxState::initial(1.0);
  const auto a = mode_output_grads(TrainMode::PairwiseOpauc, pos, neg, cfg, st);
  const auto b = weighted_square_risk_grads(pos, neg, WeightScheme::constant(), cfg.scheme);
  CHECK(a.value == b.value);
  CHECK(a.d_neg == b.d_neg);
  CHECK_THROWS(mode_output_grads(TrainMode::TruncTpauc, pos, neg, cfg, st));
}

TEST_CASE("truncated baseline step") {
  const ScorePair s({0.9, 0.2, 0.6, 0.4}, {0.1, 0.8, 0.3, 0.5});
  const auto flags = rank_hard_flags(s, TpaucSpec(0.5, 0.5), TrainMode::TruncTpauc);
  CHECK(flags.pos == std::vector<char>{0, 1, 0, 1});
  CHECK(flags.neg == std::vector<char>{0, 1, 0, 1});
  const auto op = rank_hard_flags(s, TpaucSpec(0.5, 0.5), TrainMode::TruncOpauc);
  CHECK(op.pos == std::vector<char>{1, 1, 1, 1});
  const auto g = truncated_baseline_step(s.pos(), s.neg(), flags.pos, flags.neg);
  double ref = 0.0;
  for (double p : {0.2, 0.4}) {
    for (double n : {0.8, 0.5}) ref += (1 - p + n) * (1 - p + n);
  }
  CHECK(g.value == doctest::Approx(ref / 4.0));
  CHECK(g.d_pos[0] == 0.0);
  CHECK(g.d_neg[2] == 0.0);
  CHECK(g.d_pos[1] < 0.0);
  const std::vector<char> none(4, 0);
  const auto z = truncated_baseline_step(s.pos(), s.neg(), none, flags.neg);
  CHECK(z.value == 0.0);
}

TEST_CASE("training is deterministic apart from wall time") {
  for (TrainMode mode : {TrainMode::PairwiseTpauc, TrainMode::MinimaxTpauc, TrainMode::TruncTpauc}) {
    const auto cfg = small_config(mode);
    const auto init = init_scorer(ScorerKind::Linear, 2, 0, 3);
    const auto a = train(train_data(), val_data(), init, cfg);
    const auto b = train(train_data(), val_data(), init, cfg);
    REQUIRE(a.history.size() == b.history.size());
    for (std::size_t e = 0; e < a.history.size(); ++e) {
      CHECK(a.history[e].r_psi == b.history[e].r_psi);
      CHECK(a.history[e].r_surrogate == b.history[e].r_surrogate);
      CHECK(a.history[e].r_zero_one == b.history[e].r_zero_one);
      CHECK(a.history[e].tpauc_val == b.history[e].tpauc_val);
    }
    CHECK(a.best == b.best);
  }
}

TEST_CASE("training reduces the weighted risk") {
  for (TrainMode mode : {TrainMode::PairwiseTpauc, TrainMode::MinimaxTpauc}) {
    auto cfg = small_config(mode);
    cfg.epochs = 50;
    // Seed 1 starts far from the separating direction.
    const auto init = init_scorer(ScorerKind::Linear, 2, 0, 1);
    const auto r = train(gen_gaussian_features(200, 2000, 2, 1.5, 1), gen_gaussian_features(200, 2000, 2, 1.5, 2),
                         init, cfg);
    double best = r.history.front().r_psi;
    for (const auto& e : r.history) best = std::min(best, e.r_psi);
    CHECK(best < 0.5 * r.history.front().r_psi);
  }
}

TEST_CASE("warm-up and early stop") {
  auto cfg = small_config(TrainMode::TruncTpauc);
  cfg.warmup_epochs = cfg.epochs;
  const auto init = init_scorer(ScorerKind::Linear, 2, 0, 3);
  auto auc_cfg = small_config(TrainMode::Auc);
  const auto a = train(train_data(), val_data(), init, cfg);
  const auto b = train(train_data(), val_data(), init, auc_cfg);
  CHECK(a.best == b.best);

  auto es = small_config(TrainMode::PairwiseTpauc);
  es.epochs = 200;
  es.patience = 3;
  const auto r = train(train_data(), val_data(), init, es);
  CHECK(r.early_stopped);
  CHECK(r.history.size() < 200);
  CHECK(r.history.size() == r.best_epoch + 4);
}

TEST_CASE("divergence raises with the partial history") {
  auto cfg = small_config(TrainMode::PairwiseTpauc);
  cfg.lr_theta = 1e300;
  cfg.lr_decay = 1.0;
  const auto init = init_scorer(ScorerKind::Mlp, 2, 4, 3);
  try {
    train(train_data(), val_data(), init, cfg);
    FAIL("expected divergence");
  } catch (const TrainingDiverged& e) {
    CHECK(e.partial().history.size() < cfg.epochs);
  }
}

TEST_CASE("evaluate and training log") {
  const auto init = init_scorer(ScorerKind::Linear, 2, 0, 3);
  const std::vector<TpaucSpec> specs{TpaucSpec(0.3, 0.3), TpaucSpec(0.5, 0.5)};
  const auto v = evaluate(init, val_data(), specs);
  const ScorePair s = split_scores(val_data(), forward(init, val_data().features()));
  CHECK(v[0] == empirical_tpauc(s, specs[0]));
  CHECK(v[1] == empirical_tpauc(s, specs[1]));
  const auto path = std::filesystem::temp_directory_path() / "tpauc_test_log.csv";
  write_training_log(std::vector<EpochRecord>{EpochRecord{}}, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "epoch,r_psi,r_surrogate,r_zero_one,tpauc_val,wall_ms");
  std::filesystem::remove(path);
  CHECK_THROWS(train(train_data(), val_data(), init_scorer(ScorerKind::Linear, 3, 0, 0), small_config(TrainMode::Auc)));
}

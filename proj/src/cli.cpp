#include "tpauc/cli.hpp"

#include <CLI11.hpp>

#include <array>
#include <iomanip>
#include <ostream>
#include <string>

#include "tpauc/data.hpp"
#include "tpauc/errors.hpp"
#include "tpauc/kernels.hpp"
#include "tpauc/metrics.hpp"
#include "tpauc/risk.hpp"
#include "tpauc/scorer.hpp"
#include "tpauc/trainer.hpp"
#include "tpauc/weighting.hpp"

namespace tpauc {

namespace {

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

/// Flag validation failure; reported with exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

WeightScheme make_scheme(const std::string& family, double gamma, bool analysis) {
  if (family == "poly") {
    if (analysis ? !(gamma > 1.0) : !(gamma > 2.0)) {
      throw UsageError(std::string("--gamma: poly weighting requires gamma > ") + (analysis ? "1" : "2"));
    }
    return analysis ? WeightScheme::poly_analysis(gamma) : WeightScheme::poly(gamma);
  }
  if (family == "exp") {
    if (!(gamma > 0.0)) throw UsageError("--gamma: exp weighting requires gamma > 0");
    return WeightScheme::exp(gamma);
  }
  throw UsageError("--weighting: expected poly or exp, got '" + family + "'");
}

void print_config(std::ostream& out, const CLI::App& sub) {
  out << "# tpauc " << sub.get_name() << '\n';
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_name() == "--help") continue;
    std::string value;
    if (opt->count() > 0) {
      if (opt->get_type_size() == 0) {
        value = "true";
      } else {
        for (const auto& r : opt->results()) value += (value.empty() ? "" : " ") + r;
      }
    } else {
      value = opt->get_type_size() == 0 ? "false" : opt->get_default_str();
    }
    std::string name = opt->get_name();
    while (!name.empty() && name.front() == '-') name.erase(name.begin());
    out << "# " << name << " = " << (value.empty() ? "(unset)" : value) << '\n';
  }
  out << "# kernels = " << kernels::isa_name(kernels::active().isa) << '\n';
}

struct GenDataArgs {
  std::string kind;
  std::size_t n_pos = 0, n_neg = 0, dim = 2;
  double sep = 2.0;
  std::uint64_t seed = 0;
  std::string out;
};

struct EvalArgs {
  std::string scores, model, data;
  double alpha = 0.3, beta = 0.3;
  bool opauc = false;
};

struct TrainArgs {
  std::string data, val, model = "linear", mode = "pairwise-tpauc", weighting = "poly";
  std::size_t hidden = 16;
  double gamma = 3.0;
  double gamma_neg = 0.0;
  double alpha = 0.5, beta = 0.5;
  std::size_t warmup = 0, epochs = 100, batch_size = 128, pos_per_batch = 0, patience = 20, steps = 0;
  double lr = 0.1, lr_a = 0.1, lr_b = 0.1, lr_decay = 0.99, weight_decay = 1e-5;
  std::uint64_t seed = 0;
  std::string theta_grad = "saddle";
  bool rerank_per_batch = false;
  std::string out_model, log, bound_trace;
};

struct BoundArgs {
  std::string scores, weighting = "poly", variant = "proof";
  double gamma = 3.0, alpha = 0.3, beta = 0.3;
  std::size_t p_grid = 99;
};

struct DualArgs {
  std::string weighting = "poly";
  double gamma = 4.0;
  std::size_t grid = 1000;
};

struct DemoArgs {
  std::uint64_t seed = 0, trials = 10000;
  std::size_t n_pos = 50, n_neg = 50;
};

void run_gen_data(const GenDataArgs& a, std::ostream& out) {
  if (a.kind == "gauss-scores") {
    const ScorePair s = gen_gaussian_scores(a.n_pos, a.n_neg, a.seed);
    save_score_csv(s, a.out);
    out << "wrote " << a.n_pos + a.n_neg << " scores to " << a.out << '\n';
  } else if (a.kind == "gauss-2d") {
    const Dataset ds = gen_gaussian_features(a.n_pos, a.n_neg, a.dim, a.sep, a.seed);
    save_csv(ds, a.out);
    out << "wrote " << ds.size() << " rows x " << ds.dim() << " features to " << a.out << '\n';
  } else {
    throw UsageError("--kind: expected gauss-scores or gauss-2d, got '" + a.kind + "'");
  }
}

void run_eval(const EvalArgs& a, std::ostream& out) {
  const TpaucSpec spec(a.alpha, a.beta);
  if (!a.scores.empty()) {
    const ScorePair s = load_score_csv(a.scores);
    out << "n_pos = " << s.n_pos() << "\nn_neg = " << s.n_neg() << '\n';
    out << "auc = " << empirical_auc(s) << '\n';
    out << "tpauc(" << a.alpha << "," << a.beta << ") = " << empirical_tpauc(s, spec) << '\n';
    if (a.opauc) out << "opauc(0," << a.beta << ") = " << empirical_opauc(s, a.beta) << '\n';
    return;
  }
  if (a.model.empty() || a.data.empty()) throw UsageError("eval: give --scores, or both --model and --data");
  const ScorerParams model = load_model(a.model);
  const Dataset ds = load_csv(a.data);
  const std::array<TpaucSpec, 4> specs{TpaucSpec(0.3, 0.3), TpaucSpec(0.4, 0.4), TpaucSpec(0.5, 0.5), spec};
  const auto values = evaluate(model, ds, specs);
  for (std::size_t k = 0; k < specs.size(); ++k) {
    out << "tpauc(" << specs[k].alpha() << "," << specs[k].beta() << ") = " << values[k] << '\n';
  }
  const ScorePair s = split_scores(ds, forward(model, ds.features()));
  out << "auc = " << empirical_auc(s) << '\n';
  if (a.opauc) out << "opauc(0," << a.beta << ") = " << empirical_opauc(s, a.beta) << '\n';
}

int run_train(const TrainArgs& a, std::ostream& out) {
  TrainConfig cfg;
  const auto mode = parse_train_mode(a.mode);
  if (!mode) throw UsageError("--mode: unknown mode '" + a.mode + "'");
  cfg.mode = *mode;
  cfg.scheme = make_scheme(a.weighting, a.gamma, false);
  if (a.gamma_neg > 0.0) cfg.scheme_neg = make_scheme(a.weighting, a.gamma_neg, false);
  cfg.spec = TpaucSpec(a.alpha, a.beta);
  cfg.warmup_epochs = a.warmup;
  cfg.epochs = a.epochs;
  cfg.batch = BatchSpec::with_ratio(a.batch_size, a.seed);
  if (a.pos_per_batch > 0) cfg.batch.pos_per_batch = a.pos_per_batch;
  if (cfg.batch.pos_per_batch >= cfg.batch.batch_size) {
    throw UsageError("--pos-per-batch: must be smaller than --batch-size");
  }
  cfg.lr_theta = a.lr;
  cfg.lr_a = a.lr_a;
  cfg.lr_b = a.lr_b;
  cfg.lr_decay = a.lr_decay;
  cfg.weight_decay = a.weight_decay;
  cfg.seed = a.seed;
  cfg.patience = a.patience;
  cfg.steps_per_epoch = a.steps;
  cfg.rerank_per_batch = a.rerank_per_batch;
  if (a.theta_grad == "saddle") {
    cfg.theta_grad = ThetaGrad::Saddle;
  } else if (a.theta_grad == "pairwise") {
    cfg.theta_grad = ThetaGrad::Pairwise;
  } else {
    throw UsageError("--theta-grad: expected saddle or pairwise");
  }
  if (a.warmup > a.epochs) throw UsageError("--warmup-epochs: must not exceed --epochs");

  const Dataset train_set = load_csv(a.data);
  const Dataset val_set = load_csv(a.val);
  const ScorerKind kind = a.model == "mlp" ? ScorerKind::Mlp : ScorerKind::Linear;
  if (a.model != "mlp" && a.model != "linear") throw UsageError("--model: expected linear or mlp");
  const ScorerParams init = init_scorer(kind, train_set.dim(), a.hidden, a.seed);

  auto write_outputs = [&](const TrainResult& r) {
    save_model(r.best, a.out_model);
    write_training_log(r.history, a.log);
    if (!a.bound_trace.empty() && !r.history.empty()) {
      std::vector<BoundTraceRow> rows;
      for (const auto& e : r.history) rows.push_back({e.epoch, e.r_psi, e.r_surrogate, e.r_zero_one});
      write_bound_trace_csv(bound_gap_trace(std::move(rows)), a.bound_trace);
    }
  };

  TrainResult result{init, {}, 0, false};
  try {
    result = train(train_set, val_set, init, cfg);
  } catch (const TrainingDiverged& e) {
    write_outputs(e.partial());
    throw;
  }
  write_outputs(result);
  out << "epochs_run = " << result.history.size() << '\n';
  out << "early_stopped = " << (result.early_stopped ? "true" : "false") << '\n';
  out << "best_epoch = " << result.best_epoch << '\n';
  const std::array<TpaucSpec, 3> specs{TpaucSpec(0.3, 0.3), TpaucSpec(0.4, 0.4), TpaucSpec(0.5, 0.5)};
  const auto values = evaluate(result.best, val_set, specs);
  for (std::size_t k = 0; k < specs.size(); ++k) {
    out << "val_tpauc(" << specs[k].alpha() << "," << specs[k].beta() << ") = " << values[k] << '\n';
  }
  return 0;
}

int run_check_bound(const BoundArgs& a, std::ostream& out) {
  const ScorePair s = load_score_csv(a.scores);
  const WeightScheme scheme = make_scheme(a.weighting, a.gamma, true);
  XiVariant variant = XiVariant::Proof;
  if (a.variant == "main") {
    variant = XiVariant::MainText;
  } else if (a.variant != "proof") {
    throw UsageError("--xi-variant: expected proof or main");
  }
  const BoundCheckReport r = check_sufficient_condition(s, scheme, TpaucSpec(a.alpha, a.beta), a.p_grid, variant);
  out << "best_margin = " << r.best_margin << '\n';
  out << "best_p = " << r.best_p << '\n';
  out << "direct_gap = " << r.direct_gap << '\n';
  out << "excluded_pairs = " << r.excluded_pairs << '\n';
  out << "holds = " << (r.indeterminate ? "indeterminate" : (r.holds ? "true" : "false")) << '\n';
  return 0;
}

int run_dual_check(const DualArgs& a, std::ostream& out) {
  const WeightScheme scheme = make_scheme(a.weighting, a.gamma, true);
  const double residual = dual_check(scheme, a.grid);
  const CalibrationReport cal = calibration_check(scheme, a.grid);
  out << "scheme = " << scheme.describe() << '\n';
  out << "max_residual = " << residual << '\n';
  out << "monotone = " << (cal.monotone ? "true" : "false") << '\n';
  out << "concave = " << (cal.concave ? "true" : "false") << '\n';
  return 0;
}

int run_demo(const DemoArgs& a, std::ostream& out) {
  const auto w = find_inconsistency(a.seed, a.trials, a.n_pos, a.n_neg);
  if (!w) {
    out << "witness = none\n";
    return 0;
  }
  out << "witness = found\ntrial = " << w->trial << '\n';
  out << "opauc(A) = " << w->opauc_a << "  opauc(B) = " << w->opauc_b << '\n';
  out << "tpauc(A) = " << w->tpauc_a << "  tpauc(B) = " << w->tpauc_b << '\n';
  out << "OPAUC prefers B while TPAUC prefers A at (alpha, beta) = (0.4, 0.6)\n";
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-way partial AUC estimation, surrogate analysis and training"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  GenDataArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "Generate synthetic scores or features");
  gen_cmd->add_option("--kind", gen.kind, "gauss-scores | gauss-2d")->required();
  gen_cmd->add_option("--n-pos", gen.n_pos, "Number of positives")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--n-neg", gen.n_neg, "Number of negatives")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--dim", gen.dim, "Feature dimension (gauss-2d)")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--sep", gen.sep, "Class separation (gauss-2d)")->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_option("--out", gen.out, "Output CSV")->required();

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate AUC / TPAUC / OPAUC");
  eval_cmd->add_option("--scores", ev.scores, "Score CSV (label,score)");
  eval_cmd->add_option("--model", ev.model, "Model file (with --data)");
  eval_cmd->add_option("--data", ev.data, "Feature CSV (with --model)");
  eval_cmd->add_option("--alpha", ev.alpha, "Positive truncation fraction")->check(CLI::Range(0.0, 1.0));
  eval_cmd->add_option("--beta", ev.beta, "Negative truncation fraction")->check(CLI::Range(0.0, 1.0));
  eval_cmd->add_flag("--opauc", ev.opauc, "Also report OPAUC over FPR [0, beta]");

  TrainArgs tr;
  auto* train_cmd = app.add_subcommand("train", "Train a scorer");
  train_cmd->add_option("--data", tr.data, "Training CSV")->required();
  train_cmd->add_option("--val", tr.val, "Validation CSV")->required();
  train_cmd->add_option("--model", tr.model, "linear | mlp");
  train_cmd->add_option("--hidden", tr.hidden, "Hidden width (mlp)")->check(CLI::PositiveNumber);
  train_cmd->add_option("--mode", tr.mode,
                        "auc | pairwise-tpauc | minimax-tpauc | trunc-tpauc | trunc-opauc | pairwise-opauc");
  train_cmd->add_option("--weighting", tr.weighting, "poly | exp");
  train_cmd->add_option("--gamma", tr.gamma, "Weighting parameter");
  train_cmd->add_option("--gamma-neg", tr.gamma_neg, "Separate parameter for negatives (0: same as --gamma)");
  train_cmd->add_option("--alpha", tr.alpha, "Positive truncation fraction")->check(CLI::Range(0.0, 1.0));
  train_cmd->add_option("--beta", tr.beta, "Negative truncation fraction")->check(CLI::Range(0.0, 1.0));
  train_cmd->add_option("--warmup-epochs", tr.warmup, "Plain AUC epochs before the TPAUC phase");
  train_cmd->add_option("--epochs", tr.epochs, "Epoch budget")->check(CLI::PositiveNumber);
  train_cmd->add_option("--batch-size", tr.batch_size, "Batch size")->check(CLI::Range(2, 1 << 20));
  train_cmd->add_option("--pos-per-batch", tr.pos_per_batch, "Positives per batch (0: batch-size/11)");
  train_cmd->add_option("--lr", tr.lr, "Scorer learning rate")->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--lr-a", tr.lr_a, "Step size of a")->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--lr-b", tr.lr_b, "Step size of b")->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--lr-decay", tr.lr_decay, "Per-epoch learning-rate factor")->check(CLI::Range(0.0, 1.0));
  train_cmd->add_option("--weight-decay", tr.weight_decay, "L2 penalty")->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--seed", tr.seed, "Random seed");
  train_cmd->add_option("--patience", tr.patience, "Early-stop patience in epochs (0: off)");
  train_cmd->add_option("--steps-per-epoch", tr.steps, "Steps per epoch (0: n_pos / pos-per-batch)");
  train_cmd->add_option("--theta-grad", tr.theta_grad, "saddle | pairwise (minimax mode)");
  train_cmd->add_flag("--rerank-per-batch", tr.rerank_per_batch, "Truncated modes: rank inside each batch");
  train_cmd->add_option("--out-model", tr.out_model, "Model output path")->required();
  train_cmd->add_option("--log", tr.log, "Training log CSV")->required();
  train_cmd->add_option("--bound-trace", tr.bound_trace, "Optional bound trace CSV");

  BoundArgs bd;
  auto* bound_cmd = app.add_subcommand("check-bound", "Check the sufficient condition R_psi >= R_truncated");
  bound_cmd->add_option("--scores", bd.scores, "Score CSV (label,score)")->required();
  bound_cmd->add_option("--weighting", bd.weighting, "poly | exp");
  bound_cmd->add_option("--gamma", bd.gamma, "Weighting parameter");
  bound_cmd->add_option("--alpha", bd.alpha, "Positive truncation fraction")->check(CLI::Range(0.0, 1.0));
  bound_cmd->add_option("--beta", bd.beta, "Negative truncation fraction")->check(CLI::Range(0.0, 1.0));
  bound_cmd->add_option("--p-grid", bd.p_grid, "Number of p values in (0,1)")->check(CLI::Range(2, 1000000));
  bound_cmd->add_option("--xi-variant", bd.variant, "proof | main");

  DualArgs du;
  auto* dual_cmd = app.add_subcommand("dual-check", "Residual of psi(phi'(v)) = v and calibration checks");
  dual_cmd->add_option("--weighting", du.weighting, "poly | exp");
  dual_cmd->add_option("--gamma", du.gamma, "Weighting parameter");
  dual_cmd->add_option("--grid", du.grid, "Grid size")->check(CLI::Range(3, 100000000));

  DemoArgs dm;
  auto* demo_cmd = app.add_subcommand("inconsistency-demo", "Search scorers ranked oppositely by OPAUC and TPAUC");
  demo_cmd->add_option("--seed", dm.seed, "Random seed");
  demo_cmd->add_option("--trials", dm.trials, "Number of random trials")->check(CLI::PositiveNumber);
  demo_cmd->add_option("--n-pos", dm.n_pos, "Positives per scorer")->check(CLI::PositiveNumber);
  demo_cmd->add_option("--n-neg", dm.n_neg, "Negatives per scorer")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    for (const CLI::App* sub : app.get_subcommands()) print_config(out, *sub);
    out << std::setprecision(10);
    if (*gen_cmd) run_gen_data(gen, out);
    if (*eval_cmd) run_eval(ev, out);
    if (*train_cmd) run_train(tr, out);
    if (*bound_cmd) run_check_bound(bd, out);
    if (*dual_cmd) run_dual_check(du, out);
    if (*demo_cmd) run_demo(dm, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return 0;
}

}  // namespace tpauc

#pragma once

// Pairwise risks over a ScorePair, all normalized by n_pos * n_neg:
//
//   truncated  R_ab  = 1/(n+ n-) * sum over hard pos x hard neg of loss(s+ - s-)
//   weighted   R_psi = 1/(n+ n-) * sum_ij psi(1 - s+_i) psi(s-_j) loss(s+_i - s-_j)
//
// and the Hoelder-type sufficient condition certifying R_psi >= R_ab.

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "tpauc/data.hpp"
#include "tpauc/metrics.hpp"
#include "tpauc/weighting.hpp"

namespace tpauc {

enum class PairLoss { Square, ZeroOne };

/// (1 - t)^2
double square_loss(double t) noexcept;
/// 1 when t <= 0 (ties are errors), else 0.
double zero_one_loss(double t) noexcept;
double pair_loss(PairLoss loss, double t) noexcept;

/// (1/(n+ n-)) * sum_ij w_pos[i] * w_neg[j] * loss(pos[i] - neg[j]).
double weighted_pair_risk(const ScorePair& s, std::span<const double> w_pos,
                          std::span<const double> w_neg, PairLoss loss);

double truncated_risk(const ScorePair& s, const TpaucSpec& spec, PairLoss loss);

struct BilevelWeights {
  std::vector<double> pos;  // 1 for the bottom floor(n+ alpha) positives, else 0
  std::vector<double> neg;  // 1 for the top floor(n- beta) negatives, else 0
};

/// Solution of the l1-constrained inner problem: indicators of the hard sets.
BilevelWeights bilevel_weights(const ScorePair& s, const TpaucSpec& spec);

struct PairRiskBreakdown {
  double r_weighted = 0.0;   // R_psi with the given loss
  double r_truncated = 0.0;  // R_ab with the given loss
  double r_zero_one = 0.0;   // R_ab with the 0-1 loss
  std::vector<double> v_pos;  // psi(1 - s+)
  std::vector<double> v_neg;  // psi(s-)
};

PairRiskBreakdown weighted_risk(const ScorePair& s, const WeightScheme& scheme, const TpaucSpec& spec,
                                PairLoss loss = PairLoss::Square);
/// Heterogeneous variant: positives weighted by pos_scheme, negatives by neg_scheme.
PairRiskBreakdown weighted_risk(const ScorePair& s, const WeightScheme& pos_scheme,
                                const WeightScheme& neg_scheme, const TpaucSpec& spec,
                                PairLoss loss = PairLoss::Square);

// ---- square-loss objective with score gradients ------------------------------

struct OutputGradients {
  double value = 0.0;
  std::vector<double> d_pos;  // d value / d s+_i
  std::vector<double> d_neg;  // d value / d s-_j
};

/// value = scale * sum_ij u_i w_j (1 - p_i + g_j)^2, where u, w are per-example
/// weights with derivatives du = du_i/dp_i and dw = dw_j/dg_j.
OutputGradients square_pair_objective(std::span<const double> pos, std::span<const double> neg,
                                      std::span<const double> u, std::span<const double> du,
                                      std::span<const double> w, std::span<const double> dw, double scale);

/// R_psi with the square loss and its gradient; u_i = psi_pos(1 - p_i), w_j = psi_neg(g_j).
/// A constant scheme yields the plain square-loss AUC risk.
OutputGradients weighted_square_risk_grads(std::span<const double> pos, std::span<const double> neg,
                                           const WeightScheme& pos_scheme, const WeightScheme& neg_scheme);

// ---- sufficient condition ------------------------------------------------------

/// Which index set carries l^2 and which carries l^q in xi_q. `Proof` averages
/// l^2 over the hard pairs and l^q over the complement; `MainText` swaps them.
enum class XiVariant { Proof, MainText };

struct BoundCheckReport {
  std::vector<double> p;    // grid, p_k = k / (p_grid + 1)
  std::vector<double> rho;  // rho_p
  std::vector<double> xi;   // xi_q, q = -p / (1 - p)
  double best_margin = 0.0;  // max_p (rho_p - xi_q)
  double best_p = 0.0;
  bool holds = false;          // best_margin >= 0 and not indeterminate
  bool indeterminate = false;  // every l^q term was excluded
  std::size_t excluded_pairs = 0;  // pairs with l < 1e-12 dropped from the l^q average
  double hard_fraction = 0.0;      // |I1| / (n+ n-); equals alpha*beta for integer-compatible sizes
  double direct_gap = 0.0;         // R_psi - R_ab, square loss
};

BoundCheckReport check_sufficient_condition(const ScorePair& s, const WeightScheme& scheme,
                                            const TpaucSpec& spec, std::size_t p_grid,
                                            XiVariant variant = XiVariant::Proof);

struct BoundTraceRow {
  std::size_t epoch;
  double r_psi;
  double r_surrogate;
  double r_zero_one;
};

struct BoundTrace {
  std::vector<BoundTraceRow> rows;
  bool bound_held_every_epoch = false;  // r_psi >= r_surrogate at every epoch
  double frac_psi_ge_surrogate = 0.0;
  double frac_psi_ge_zero_one = 0.0;
};

BoundTrace bound_gap_trace(std::span<const PairRiskBreakdown> history);
BoundTrace bound_gap_trace(std::vector<BoundTraceRow> rows);
void write_bound_trace_csv(const BoundTrace& trace, const std::filesystem::path& path);

}  // namespace tpauc

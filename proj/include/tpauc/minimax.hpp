#pragma once

// Instance-wise minimax form of the weighted square-loss risk.
//
// With v+_i = psi(1 - s+_i), v-_j = psi(s-_j) and the six class statistics
// below, the pairwise risk
//
//   r = c+ c- - 2 c- f+ + 2 c+ f- + c- f+2 + c+ f-2 - 2 f+ f-
//
// equals  min_{0<=a<=c_a} max_{0<=b<=c_b}  a.z1 + b.z2 - |b~|^2 + |a~|^2,
// where a~ = mask_a (.) a and b~ = mask_b (.) b. The objective is separable,
// so each coordinate has the closed-form optimum a_k = -z1_k / (2 mask_a_k^2),
// b_k = z2_k / (2 mask_b_k^2).

#include <array>
#include <span>

#include "tpauc/data.hpp"
#include "tpauc/risk.hpp"
#include "tpauc/weighting.hpp"

namespace tpauc {

using AVector = std::array<double, 10>;
using BVector = std::array<double, 8>;

/// Scaling patterns of a~ and b~ (also the step preconditioners of the SGDA updates).
extern const AVector kMaskA;
extern const BVector kMaskB;

struct BatchStatistics {
  double c_pos = 0.0;   // mean v+
  double c_neg = 0.0;   // mean v-
  double f_pos = 0.0;   // mean v+ s+
  double f_neg = 0.0;   // mean v- s-
  double f_pos2 = 0.0;  // mean v+ s+^2
  double f_neg2 = 0.0;  // mean v- s-^2
};

struct ZetaVectors {
  AVector zeta1{};
  BVector zeta2{};
};

struct MinimaxState {
  AVector a{};
  BVector b{};
  AVector c_a{};
  BVector c_b{};
  double v_inf = 1.0;
  double f_inf = 1.0;

  /// a = b = 0 with the box bounds implied by (v_inf, f_inf).
  static MinimaxState initial(double v_inf, double f_inf = 1.0);
  bool feasible() const noexcept;
};

BatchStatistics batch_statistics(std::span<const double> pos, std::span<const double> neg,
                                 const WeightScheme& pos_scheme, const WeightScheme& neg_scheme);
BatchStatistics batch_statistics(const ScorePair& s, const WeightScheme& scheme);

ZetaVectors zeta_vectors(const BatchStatistics& st);

/// a.z1 + b.z2 - |b~|^2 + |a~|^2
double objective(const BatchStatistics& st, const MinimaxState& state);

/// The pairwise risk r written in the six statistics.
double saddle_risk(const BatchStatistics& st);

/// Closed-form saddle point (a*, b*), boxed with bounds from (v_inf, f_inf).
MinimaxState inner_optimum(const BatchStatistics& st, double v_inf, double f_inf = 1.0);

struct AbGradient {
  AVector a{};  // z1 + 2 mask_a (.) a~   (descent direction for a)
  BVector b{};  // z2 - 2 mask_b (.) b~   (ascent direction for b)
};

AbGradient grad_ab(const BatchStatistics& st, const MinimaxState& state);

/// Clamp every coordinate into [0, c].
void project_box(MinimaxState& state) noexcept;

/// a <- P(a - eta_a g_a), b <- P(b + eta_b g_b).
MinimaxState sgda_step(const BatchStatistics& st, const MinimaxState& state, double eta_a, double eta_b);

/// d objective / d s for every score, holding (a, b) fixed.
OutputGradients per_example_output_grads(std::span<const double> pos, std::span<const double> neg,
                                         const WeightScheme& pos_scheme, const WeightScheme& neg_scheme,
                                         const MinimaxState& state);
OutputGradients per_example_output_grads(const ScorePair& s, const WeightScheme& scheme,
                                         const MinimaxState& state);

/// d r / d s through the six statistics: the gradient of the pairwise weighted
/// square risk, computed in O(n).
OutputGradients pairwise_risk_output_grads(std::span<const double> pos, std::span<const double> neg,
                                           const WeightScheme& pos_scheme, const WeightScheme& neg_scheme);

}  // namespace tpauc

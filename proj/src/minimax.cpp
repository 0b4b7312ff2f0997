#include "tpauc/minimax.hpp"

#include <algorithm>
#include <cmath>

#include "tpauc/errors.hpp"
#include "tpauc/kernels.hpp"

namespace tpauc {

namespace {
const double kR = 1.0 / std::sqrt(2.0);
}

const AVector kMaskA{kR, kR, 1.0, 1.0, 1.0, kR, kR, kR, kR, 1.0};
const BVector kMaskB{kR, 1.0, 1.0, 1.0, kR, kR, 1.0, 1.0};

MinimaxState MinimaxState::initial(double v_inf, double f_inf) {
  require(v_inf > 0.0 && f_inf > 0.0, "minimax: v_inf and f_inf must be positive");
  MinimaxState s;
  s.v_inf = v_inf;
  s.f_inf = f_inf;
  const double v = v_inf, f = f_inf;
  s.c_a = {v, v, v + f, v, f, v, f * f, v, f * f, 2.0 * f};
  s.c_b = {2.0 * v, v, f, v + f, v + f * f, v + f * f, f, f};
  return s;
}

bool MinimaxState::feasible() const noexcept {
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!(a[k] >= 0.0 && a[k] <= c_a[k])) return false;
  }
  for (std::size_t k = 0; k < b.size(); ++k) {
    if (!(b[k] >= 0.0 && b[k] <= c_b[k])) return false;
  }
  return true;
}

namespace {

struct ClassWeights {
  std::vector<double> v;   // psi
  std::vector<double> dv;  // d psi / d score
};

ClassWeights positive_weights(std::span<const double> pos, const WeightScheme& scheme) {
  ClassWeights w{std::vector<double>(pos.size()), std::vector<double>(pos.size())};
  for (std::size_t i = 0; i < pos.size(); ++i) {
    w.v[i] = scheme.psi(1.0 - pos[i]);
    w.dv[i] = -scheme.psi_prime(1.0 - pos[i]);
  }
  return w;
}

ClassWeights negative_weights(std::span<const double> neg, const WeightScheme& scheme) {
  ClassWeights w{std::vector<double>(neg.size()), std::vector<double>(neg.size())};
  for (std::size_t j = 0; j < neg.size(); ++j) {
    w.v[j] = scheme.psi(neg[j]);
    w.dv[j] = scheme.psi_prime(neg[j]);
  }
  return w;
}

// Partial derivatives of a scalar function of the six statistics.
struct StatPartials {
  double c_pos, c_neg, f_pos, f_neg, f_pos2, f_neg2;
};

OutputGradients chain_to_scores(std::span<const double> pos, std::span<const double> neg,
                                const ClassWeights& wp, const ClassWeights& wn, const StatPartials& d) {
  OutputGradients g;
  g.d_pos.resize(pos.size());
  g.d_neg.resize(neg.size());
  const double inv_p = 1.0 / static_cast<double>(pos.size());
  const double inv_n = 1.0 / static_cast<double>(neg.size());
  for (std::size_t i = 0; i < pos.size(); ++i) {
    const double s = pos[i], v = wp.v[i], dv = wp.dv[i];
    g.d_pos[i] = inv_p * (d.c_pos * dv + d.f_pos * (dv * s + v) + d.f_pos2 * (dv * s * s + 2.0 * v * s));
  }
  for (std::size_t j = 0; j < neg.size(); ++j) {
    const double s = neg[j], v = wn.v[j], dv = wn.dv[j];
    g.d_neg[j] = inv_n * (d.c_neg * dv + d.f_neg * (dv * s + v) + d.f_neg2 * (dv * s * s + 2.0 * v * s));
  }
  return g;
}

BatchStatistics statistics_from(std::span<const double> pos, std::span<const double> neg,
                                const ClassWeights& wp, const ClassWeights& wn) {
  const auto mp = kernels::weighted_moments(wp.v, pos);
  const auto mn = kernels::weighted_moments(wn.v, neg);
  const double inv_p = 1.0 / static_cast<double>(pos.size());
  const double inv_n = 1.0 / static_cast<double>(neg.size());
  return {mp.sum_w * inv_p, mn.sum_w * inv_n, mp.sum_wf * inv_p, mn.sum_wf * inv_n,
          mp.sum_wf2 * inv_p, mn.sum_wf2 * inv_n};
}

}  // namespace

BatchStatistics batch_statistics(std::span<const double> pos, std::span<const double> neg,
                                 const WeightScheme& pos_scheme, const WeightScheme& neg_scheme) {
  require(!pos.empty() && !neg.empty(), "batch_statistics: empty class");
  return statistics_from(pos, neg, positive_weights(pos, pos_scheme), negative_weights(neg, neg_scheme));
}

BatchStatistics batch_statistics(const ScorePair& s, const WeightScheme& scheme) {
  return batch_statistics(s.pos(), s.neg(), scheme, scheme);
}

ZetaVectors zeta_vectors(const BatchStatistics& st) {
  const double cp = st.c_pos, cn = st.c_neg, fp = st.f_pos, fn = st.f_neg, fp2 = st.f_pos2, fn2 = st.f_neg2;
  ZetaVectors z;
  z.zeta1 = {-cp, -cn, -2.0 * (fp + cn), -2.0 * cp, -2.0 * fn, -cn, -fp2, -cp, -fn2, -2.0 * (fp + fn)};
  z.zeta2 = {cp + cn, 2.0 * cn, 2.0 * fp, 2.0 * (fn + cp), cn + fp2, cp + fn2, 2.0 * fp, 2.0 * fn};
  return z;
}

double objective(const BatchStatistics& st, const MinimaxState& state) {
  const ZetaVectors z = zeta_vectors(st);
  double value = 0.0;
  for (std::size_t k = 0; k < 10; ++k) {
    const double at = kMaskA[k] * state.a[k];
    value += state.a[k] * z.zeta1[k] + at * at;
  }
  for (std::size_t k = 0; k < 8; ++k) {
    const double bt = kMaskB[k] * state.b[k];
    value += state.b[k] * z.zeta2[k] - bt * bt;
  }
  return value;
}

double saddle_risk(const BatchStatistics& st) {
  return st.c_pos * st.c_neg - 2.0 * st.c_neg * st.f_pos + 2.0 * st.c_pos * st.f_neg + st.c_neg * st.f_pos2 +
         st.c_pos * st.f_neg2 - 2.0 * st.f_pos * st.f_neg;
}

MinimaxState inner_optimum(const BatchStatistics& st, double v_inf, double f_inf) {
  MinimaxState s = MinimaxState::initial(v_inf, f_inf);
  const double cp = st.c_pos, cn = st.c_neg, fp = st.f_pos, fn = st.f_neg, fp2 = st.f_pos2, fn2 = st.f_neg2;
  s.a = {cp, cn, cn + fp, cp, fn, cn, fp2, cp, fn2, fp + fn};
  s.b = {cp + cn, cn, fp, cp + fn, cn + fp2, cp + fn2, fp, fn};
  project_box(s);
  return s;
}

AbGradient grad_ab(const BatchStatistics& st, const MinimaxState& state) {
  const ZetaVectors z = zeta_vectors(st);
  AbGradient g;
  for (std::size_t k = 0; k < 10; ++k) g.a[k] = z.zeta1[k] + 2.0 * kMaskA[k] * (kMaskA[k] * state.a[k]);
  for (std::size_t k = 0; k < 8; ++k) g.b[k] = z.zeta2[k] - 2.0 * kMaskB[k] * (kMaskB[k] * state.b[k]);
  return g;
}

void project_box(MinimaxState& state) noexcept {
  for (std::size_t k = 0; k < 10; ++k) state.a[k] = std::clamp(state.a[k], 0.0, state.c_a[k]);
  for (std::size_t k = 0; k < 8; ++k) state.b[k] = std::clamp(state.b[k], 0.0, state.c_b[k]);
}

MinimaxState sgda_step(const BatchStatistics& st, const MinimaxState& state, double eta_a, double eta_b) {
  require(eta_a >= 0.0 && eta_b >= 0.0, "sgda_step: step sizes must be nonnegative");
  const AbGradient g = grad_ab(st, state);
  MinimaxState next = state;
  for (std::size_t k = 0; k < 10; ++k) next.a[k] -= eta_a * g.a[k];
  for (std::size_t k = 0; k < 8; ++k) next.b[k] += eta_b * g.b[k];
  project_box(next);
  return next;
}

OutputGradients per_example_output_grads(std::span<const double> pos, std::span<const double> neg,
                                         const WeightScheme& pos_scheme, const WeightScheme& neg_scheme,
                                         const MinimaxState& state) {
  require(!pos.empty() && !neg.empty(), "per_example_output_grads: empty class");
  const auto wp = positive_weights(pos, pos_scheme);
  const auto wn = negative_weights(neg, neg_scheme);
  const auto& a = state.a;
  const auto& b = state.b;
  // d objective / d statistic; zeta1, zeta2 are linear in the statistics.
  const StatPartials d{
      -(a[0] + 2.0 * a[3] + a[7]) + (b[0] + 2.0 * b[3] + b[5]),
      -(a[1] + 2.0 * a[2] + a[5]) + (b[0] + 2.0 * b[1] + b[4]),
      -2.0 * (a[2] + a[9]) + 2.0 * (b[2] + b[6]),
      -2.0 * (a[4] + a[9]) + 2.0 * (b[3] + b[7]),
      -a[6] + b[4],
      -a[8] + b[5],
  };
  OutputGradients g = chain_to_scores(pos, neg, wp, wn, d);
  g.value = objective(statistics_from(pos, neg, wp, wn), state);
  return g;
}

OutputGradients per_example_output_grads(const ScorePair& s, const WeightScheme& scheme,
                                         const MinimaxState& state) {
  return per_example_output_grads(s.pos(), s.neg(), scheme, scheme, state);
}

OutputGradients pairwise_risk_output_grads(std::span<const double> pos, std::span<const double> neg,
                                           const WeightScheme& pos_scheme, const WeightScheme& neg_scheme) {
  require(!pos.empty() && !neg.empty(), "pairwise_risk_output_grads: empty class");
  const auto wp = positive_weights(pos, pos_scheme);
  const auto wn = negative_weights(neg, neg_scheme);
  const BatchStatistics st = statistics_from(pos, neg, wp, wn);
  const StatPartials d{
      st.c_neg + 2.0 * st.f_neg + st.f_neg2,
      st.c_pos - 2.0 * st.f_pos + st.f_pos2,
      -2.0 * st.c_neg - 2.0 * st.f_neg,
      2.0 * st.c_pos - 2.0 * st.f_pos,
      st.c_neg,
      st.c_pos,
  };
  OutputGradients g = chain_to_scores(pos, neg, wp, wn, d);
  g.value = saddle_risk(st);
  return g;
}

}  // namespace tpauc

#include "tpauc/risk.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "tpauc/errors.hpp"
#include "tpauc/kernels.hpp"

namespace tpauc {

double square_loss(double t) noexcept { return (1.0 - t) * (1.0 - t); }

double zero_one_loss(double t) noexcept { return t <= 0.0 ? 1.0 : 0.0; }

double pair_loss(PairLoss loss, double t) noexcept {
  return loss == PairLoss::Square ? square_loss(t) : zero_one_loss(t);
}

namespace {

double inv_pairs(const ScorePair& s) {
  return 1.0 / (static_cast<double>(s.n_pos()) * static_cast<double>(s.n_neg()));
}

std::vector<double> one_minus(std::span<const double> x) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = 1.0 - x[i];
  return out;
}

// sum_ij w_pos[i] w_neg[j] loss(pos[i] - neg[j]), unnormalized.
double weighted_pair_sum(std::span<const double> pos, std::span<const double> neg,
                         std::span<const double> w_pos, std::span<const double> w_neg, PairLoss loss) {
  double total = 0.0;
  if (loss == PairLoss::Square) {
    const auto base = one_minus(pos);
    std::vector<double> sq(pos.size()), lin(pos.size());
    kernels::offset_square_moments(base, neg, w_neg, sq, lin);
    for (std::size_t i = 0; i < pos.size(); ++i) total += w_pos[i] * sq[i];
  } else {
    for (std::size_t i = 0; i < pos.size(); ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < neg.size(); ++j) row += pos[i] <= neg[j] ? w_neg[j] : 0.0;
      total += w_pos[i] * row;
    }
  }
  return total;
}

std::vector<double> gather(std::span<const double> x, std::span<const std::size_t> idx) {
  std::vector<double> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(x[i]);
  return out;
}

}  // namespace

double weighted_pair_risk(const ScorePair& s, std::span<const double> w_pos, std::span<const double> w_neg,
                          PairLoss loss) {
  require(w_pos.size() == s.n_pos() && w_neg.size() == s.n_neg(), "weighted_pair_risk: weight length mismatch");
  return weighted_pair_sum(s.pos(), s.neg(), w_pos, w_neg, loss) * inv_pairs(s);
}

double truncated_risk(const ScorePair& s, const TpaucSpec& spec, PairLoss loss) {
  const HardSets hs = select_hard_sets(s, spec);
  const auto pos = gather(s.pos(), hs.pos_hard);
  const auto neg = gather(s.neg(), hs.neg_hard);
  double total = 0.0;
  if (loss == PairLoss::Square) {
    const std::vector<double> ones(neg.size(), 1.0);
    const auto base = one_minus(pos);
    std::vector<double> sq(pos.size()), lin(pos.size());
    kernels::offset_square_moments(base, neg, ones, sq, lin);
    for (double v : sq) total += v;
  } else {
    std::size_t errors = 0;
    for (double p : pos) errors += kernels::count_at_least(p, neg);
    total = static_cast<double>(errors);
  }
  return total * inv_pairs(s);
}

BilevelWeights bilevel_weights(const ScorePair& s, const TpaucSpec& spec) {
  const HardSets hs = select_hard_sets(s, spec);
  BilevelWeights w{std::vector<double>(s.n_pos(), 0.0), std::vector<double>(s.n_neg(), 0.0)};
  for (std::size_t i : hs.pos_hard) w.pos[i] = 1.0;
  for (std::size_t j : hs.neg_hard) w.neg[j] = 1.0;
  return w;
}

PairRiskBreakdown weighted_risk(const ScorePair& s, const WeightScheme& scheme, const TpaucSpec& spec,
                                PairLoss loss) {
  return weighted_risk(s, scheme, scheme, spec, loss);
}

PairRiskBreakdown weighted_risk(const ScorePair& s, const WeightScheme& pos_scheme,
                                const WeightScheme& neg_scheme, const TpaucSpec& spec, PairLoss loss) {
  PairRiskBreakdown out;
  out.v_pos.reserve(s.n_pos());
  out.v_neg.reserve(s.n_neg());
  for (double p : s.pos()) out.v_pos.push_back(pos_scheme.psi(1.0 - p));
  for (double g : s.neg()) out.v_neg.push_back(neg_scheme.psi(g));
  out.r_weighted = weighted_pair_risk(s, out.v_pos, out.v_neg, loss);
  out.r_truncated = truncated_risk(s, spec, loss);
  out.r_zero_one = loss == PairLoss::ZeroOne ? out.r_truncated : truncated_risk(s, spec, PairLoss::ZeroOne);
  return out;
}

OutputGradients square_pair_objective(std::span<const double> pos, std::span<const double> neg,
                                      std::span<const double> u, std::span<const double> du,
                                      std::span<const double> w, std::span<const double> dw, double scale) {
  require(u.size() == pos.size() && du.size() == pos.size(), "square_pair_objective: positive weight length");
  require(w.size() == neg.size() && dw.size() == neg.size(), "square_pair_objective: negative weight length");
  const std::size_t np = pos.size();
  const std::size_t nn = neg.size();
  const auto base_pos = one_minus(pos);  // e_ij = (1 - p_i) + g_j

  std::vector<double> row_sq(np), row_lin(np);
  kernels::offset_square_moments(base_pos, neg, w, row_sq, row_lin);
  std::vector<double> col_sq(nn), col_lin(nn);
  kernels::offset_square_moments(neg, base_pos, u, col_sq, col_lin);

  OutputGradients g;
  g.d_pos.resize(np);
  g.d_neg.resize(nn);
  double total = 0.0;
  for (std::size_t i = 0; i < np; ++i) {
    total += u[i] * row_sq[i];
    g.d_pos[i] = scale * (du[i] * row_sq[i] - 2.0 * u[i] * row_lin[i]);
  }
  for (std::size_t j = 0; j < nn; ++j) g.d_neg[j] = scale * (dw[j] * col_sq[j] + 2.0 * w[j] * col_lin[j]);
  g.value = scale * total;
  return g;
}

OutputGradients weighted_square_risk_grads(std::span<const double> pos, std::span<const double> neg,
                                           const WeightScheme& pos_scheme, const WeightScheme& neg_scheme) {
  require(!pos.empty() && !neg.empty(), "weighted_square_risk_grads: empty class");
  std::vector<double> u(pos.size()), du(pos.size()), w(neg.size()), dw(neg.size());
  for (std::size_t i = 0; i < pos.size(); ++i) {
    u[i] = pos_scheme.psi(1.0 - pos[i]);
    du[i] = -pos_scheme.psi_prime(1.0 - pos[i]);
  }
  for (std::size_t j = 0; j < neg.size(); ++j) {
    w[j] = neg_scheme.psi(neg[j]);
    dw[j] = neg_scheme.psi_prime(neg[j]);
  }
  const double scale = 1.0 / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
  return square_pair_objective(pos, neg, u, du, w, dw, scale);
}

BoundCheckReport check_sufficient_condition(const ScorePair& s, const WeightScheme& scheme,
                                            const TpaucSpec& spec, std::size_t p_grid, XiVariant variant) {
  require(p_grid >= 2, "check_sufficient_condition: p_grid must be >= 2");
  const HardSets hs = select_hard_sets(s, spec);
  const std::size_t np = s.n_pos();
  const std::size_t nn = s.n_neg();
  const std::size_t n_i1 = hs.pos_hard.size() * hs.neg_hard.size();
  const std::size_t n_all = np * nn;
  require(n_i1 < n_all, "check_sufficient_condition: complement of the hard pairs is empty (alpha = beta = 1)");
  const std::size_t n_i2 = n_all - n_i1;

  std::vector<char> hard_pos(np, 0), hard_neg(nn, 0);
  for (std::size_t i : hs.pos_hard) hard_pos[i] = 1;
  for (std::size_t j : hs.neg_hard) hard_neg[j] = 1;

  std::vector<double> vp(np), vn(nn);
  for (std::size_t i = 0; i < np; ++i) vp[i] = scheme.psi(1.0 - s.pos()[i]);
  for (std::size_t j = 0; j < nn; ++j) vn[j] = scheme.psi(s.neg()[j]);

  // Pair losses split by membership in I1 = hard pos x hard neg.
  std::vector<double> loss_i1, loss_i2;
  loss_i1.reserve(n_i1);
  loss_i2.reserve(n_i2);
  double one_minus_vv_sq = 0.0;  // sum over I1 of (1 - v+ v-)^2
  double weighted_all = 0.0;     // sum over all pairs of v+ v- l
  double truncated = 0.0;        // sum over I1 of l
  for (std::size_t i = 0; i < np; ++i) {
    for (std::size_t j = 0; j < nn; ++j) {
      const double l = square_loss(s.pos()[i] - s.neg()[j]);
      const double vv = vp[i] * vn[j];
      weighted_all += vv * l;
      if (hard_pos[i] && hard_neg[j]) {
        loss_i1.push_back(l);
        one_minus_vv_sq += (1.0 - vv) * (1.0 - vv);
        truncated += l;
      } else {
        loss_i2.push_back(l);
      }
    }
  }

  BoundCheckReport report;
  report.hard_fraction = static_cast<double>(n_i1) / static_cast<double>(n_all);
  report.direct_gap = (weighted_all - truncated) / static_cast<double>(n_all);

  // The l^2 set and the l^q set for the requested variant.
  const auto& sq_set = variant == XiVariant::Proof ? loss_i1 : loss_i2;
  const auto& q_set = variant == XiVariant::Proof ? loss_i2 : loss_i1;
  double mean_sq = 0.0;
  for (double l : sq_set) mean_sq += l * l;
  mean_sq /= static_cast<double>(sq_set.size());

  std::vector<double> q_terms;
  q_terms.reserve(q_set.size());
  for (double l : q_set) {
    if (l < 1e-12) {
      ++report.excluded_pairs;
    } else {
      q_terms.push_back(l);
    }
  }
  report.indeterminate = q_terms.empty();

  const double kappa = report.hard_fraction;
  const double ratio = kappa / (1.0 - kappa);
  const double denom_rho = std::sqrt(one_minus_vv_sq / static_cast<double>(n_i1));

  // sum over I2 of (v+ v-)^p = (sum v+^p)(sum v-^p) - (sum_hard v+^p)(sum_hard v-^p)
  report.best_margin = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= p_grid; ++k) {
    const double p = static_cast<double>(k) / static_cast<double>(p_grid + 1);
    const double q = -p / (1.0 - p);
    double sp_all = 0.0, sp_hard = 0.0, sn_all = 0.0, sn_hard = 0.0;
    for (std::size_t i = 0; i < np; ++i) {
      const double x = std::pow(vp[i], p);
      sp_all += x;
      if (hard_pos[i]) sp_hard += x;
    }
    for (std::size_t j = 0; j < nn; ++j) {
      const double x = std::pow(vn[j], p);
      sn_all += x;
      if (hard_neg[j]) sn_hard += x;
    }
    const double mean_vp = std::max(0.0, sp_all * sn_all - sp_hard * sn_hard) / static_cast<double>(n_i2);
    const double rho = denom_rho > 0.0 ? std::pow(mean_vp, 1.0 / p) / denom_rho
                                       : std::numeric_limits<double>::infinity();
    double xi = std::numeric_limits<double>::infinity();
    if (!report.indeterminate) {
      double mean_q = 0.0;
      for (double l : q_terms) mean_q += std::pow(l, q);
      mean_q /= static_cast<double>(q_terms.size());
      xi = ratio * std::sqrt(mean_sq) / std::pow(mean_q, 1.0 / q);
    }
    report.p.push_back(p);
    report.rho.push_back(rho);
    report.xi.push_back(xi);
    const double margin = rho - xi;
    if (margin > report.best_margin) {
      report.best_margin = margin;
      report.best_p = p;
    }
  }
  report.holds = !report.indeterminate && report.best_margin >= 0.0;
  return report;
}

BoundTrace bound_gap_trace(std::span<const PairRiskBreakdown> history) {
  std::vector<BoundTraceRow> rows;
  rows.reserve(history.size());
  for (std::size_t e = 0; e < history.size(); ++e) {
    rows.push_back({e, history[e].r_weighted, history[e].r_truncated, history[e].r_zero_one});
  }
  return bound_gap_trace(std::move(rows));
}

BoundTrace bound_gap_trace(std::vector<BoundTraceRow> rows) {
  require(!rows.empty(), "bound_gap_trace: history is empty");
  BoundTrace trace;
  std::size_t ge_sur = 0, ge_zo = 0;
  for (const auto& r : rows) {
    ge_sur += r.r_psi >= r.r_surrogate ? 1 : 0;
    ge_zo += r.r_psi >= r.r_zero_one ? 1 : 0;
  }
  const double n = static_cast<double>(rows.size());
  trace.frac_psi_ge_surrogate = static_cast<double>(ge_sur) / n;
  trace.frac_psi_ge_zero_one = static_cast<double>(ge_zo) / n;
  trace.bound_held_every_epoch = ge_sur == rows.size();
  trace.rows = std::move(rows);
  return trace;
}

void write_bound_trace_csv(const BoundTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write '" + path.string() + "'");
  out.precision(17);
  out << "epoch,r_psi,r_surrogate,r_zero_one\n";
  for (const auto& r : trace.rows) {
    out << r.epoch << ',' << r.r_psi << ',' << r.r_surrogate << ',' << r.r_zero_one << '\n';
  }
  if (!out) throw DomainError("write failed for '" + path.string() + "'");
}

}  // namespace tpauc

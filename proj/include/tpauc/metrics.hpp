#pragma once

// Exact empirical AUC / one-way partial AUC / two-way partial AUC.
//
// Conventions shared by every estimator here:
//  * a pair (positive i, negative j) is a ranking error when s_i - s_j <= 0,
//    i.e. ties count as errors;
//  * hard-set selection breaks score ties by ascending original index.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tpauc/data.hpp"

namespace tpauc {

/// Truncation fractions (alpha over positives, beta over negatives), both in (0,1].
class TpaucSpec {
 public:
  TpaucSpec(double alpha, double beta);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }

  /// floor(n_pos * alpha); may be 0 for small pools, which callers reject.
  std::size_t pos_hard(std::size_t n_pos) const noexcept;
  std::size_t neg_hard(std::size_t n_neg) const noexcept;

  friend bool operator==(const TpaucSpec&, const TpaucSpec&) = default;

 private:
  double alpha_;
  double beta_;
};

/// floor(n * fraction), tolerant of representation error such as 0.57 * 100.
std::size_t hard_count(std::size_t n, double fraction) noexcept;

struct HardSets {
  std::vector<std::size_t> pos_hard;  // bottom-scored positives, ascending score
  std::vector<std::size_t> neg_hard;  // top-scored negatives, descending score
  double t_pos = 0.0;                 // largest score in pos_hard
  double t_neg = 0.0;                 // smallest score in neg_hard
};

/// Number of pairs (i, j) with pos[i] <= neg[j]. O((n+m) log m).
std::uint64_t count_ranking_errors(std::span<const double> pos, std::span<const double> neg);

/// Indices of `scores` ordered ascending by score, ties by index.
std::vector<std::size_t> ascending_order(std::span<const double> scores);
/// Indices ordered descending by score, ties by index.
std::vector<std::size_t> descending_order(std::span<const double> scores);

double empirical_auc(const ScorePair& s);

HardSets select_hard_sets(const ScorePair& s, const TpaucSpec& spec);

/// 1 - errors(hard pos x hard neg) / (n_pos_hard * n_neg_hard).
double empirical_tpauc(const ScorePair& s, const TpaucSpec& spec);

/// Partial AUC over FPR in [0, beta]: all positives against the top
/// floor(n_neg * beta) negatives, normalized by n_pos * n_neg_hard.
double empirical_opauc(const ScorePair& s, double beta);

/// errors(hard pos x hard neg) / (n_pos * n_neg): the truncated 0-1 risk with
/// the full-sample normalization used by the surrogate risks.
double tpauc_zero_one_risk(const ScorePair& s, const TpaucSpec& spec);

struct InconsistencyWitness {
  ScorePair a;
  ScorePair b;
  double opauc_a, opauc_b;
  double tpauc_a, tpauc_b;
  std::uint64_t trial;
};

/// Random search for scorers A, B with OPAUC(A) < OPAUC(B) but TPAUC(A) > TPAUC(B)
/// at (alpha, beta) = (0.4, 0.6). Returns the first witness, if any.
std::optional<InconsistencyWitness> find_inconsistency(std::uint64_t seed, std::uint64_t trials,
                                                       std::size_t n_pos = 50, std::size_t n_neg = 50);

}  // namespace tpauc

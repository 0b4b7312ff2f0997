#include "tpauc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "tpauc/errors.hpp"
#include "tpauc/rng.hpp"

namespace tpauc {

namespace {

bool valid_fraction(double x) { return std::isfinite(x) && x > 0.0 && x <= 1.0; }

std::vector<double> pick(std::span<const double> scores, std::span<const std::size_t> idx) {
  std::vector<double> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(scores[i]);
  return out;
}

double one_minus_ratio(std::uint64_t errors, std::size_t n_pos, std::size_t n_neg) {
  return 1.0 - static_cast<double>(errors) / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

}  // namespace

TpaucSpec::TpaucSpec(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  require(valid_fraction(alpha), "alpha must lie in (0,1]");
  require(valid_fraction(beta), "beta must lie in (0,1]");
}

std::size_t hard_count(std::size_t n, double fraction) noexcept {
  return static_cast<std::size_t>(std::floor(static_cast<double>(n) * fraction + 1e-9));
}

std::size_t TpaucSpec::pos_hard(std::size_t n_pos) const noexcept { return hard_count(n_pos, alpha_); }
std::size_t TpaucSpec::neg_hard(std::size_t n_neg) const noexcept { return hard_count(n_neg, beta_); }

std::uint64_t count_ranking_errors(std::span<const double> pos, std::span<const double> neg) {
  std::vector<double> sorted(neg.begin(), neg.end());
  std::sort(sorted.begin(), sorted.end());
  std::uint64_t errors = 0;
  for (double p : pos) {
    // negatives with score >= p
    errors += static_cast<std::uint64_t>(sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), p));
  }
  return errors;
}

std::vector<std::size_t> ascending_order(std::span<const double> scores) {
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  return idx;
}

std::vector<std::size_t> descending_order(std::span<const double> scores) {
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return idx;
}

double empirical_auc(const ScorePair& s) {
  return one_minus_ratio(count_ranking_errors(s.pos(), s.neg()), s.n_pos(), s.n_neg());
}

HardSets select_hard_sets(const ScorePair& s, const TpaucSpec& spec) {
  const std::size_t kp = spec.pos_hard(s.n_pos());
  const std::size_t kn = spec.neg_hard(s.n_neg());
  require(kp >= 1, "hard positive set is empty: floor(n_pos * alpha) = 0");
  require(kn >= 1, "hard negative set is empty: floor(n_neg * beta) = 0");
  HardSets hs;
  hs.pos_hard = ascending_order(s.pos());
  hs.pos_hard.resize(kp);
  hs.neg_hard = descending_order(s.neg());
  hs.neg_hard.resize(kn);
  hs.t_pos = s.pos()[hs.pos_hard.back()];
  hs.t_neg = s.neg()[hs.neg_hard.back()];
  return hs;
}

double empirical_tpauc(const ScorePair& s, const TpaucSpec& spec) {
  const HardSets hs = select_hard_sets(s, spec);
  const auto errors = count_ranking_errors(pick(s.pos(), hs.pos_hard), pick(s.neg(), hs.neg_hard));
  return one_minus_ratio(errors, hs.pos_hard.size(), hs.neg_hard.size());
}

double empirical_opauc(const ScorePair& s, double beta) {
  require(valid_fraction(beta), "beta must lie in (0,1]");
  const std::size_t kn = hard_count(s.n_neg(), beta);
  require(kn >= 1, "OPAUC negative set is empty: floor(n_neg * beta) = 0");
  auto top = descending_order(s.neg());
  top.resize(kn);
  const auto errors = count_ranking_errors(s.pos(), pick(s.neg(), top));
  return one_minus_ratio(errors, s.n_pos(), kn);
}

double tpauc_zero_one_risk(const ScorePair& s, const TpaucSpec& spec) {
  const HardSets hs = select_hard_sets(s, spec);
  const auto errors = count_ranking_errors(pick(s.pos(), hs.pos_hard), pick(s.neg(), hs.neg_hard));
  return static_cast<double>(errors) / (static_cast<double>(s.n_pos()) * static_cast<double>(s.n_neg()));
}

namespace {

// One scorer: class-conditional normals with random location and spread.
ScorePair random_scorer(CounterRng& rng, std::size_t n_pos, std::size_t n_neg) {
  std::uniform_real_distribution<double> mean_pos(0.4, 0.8);
  std::uniform_real_distribution<double> mean_neg(0.2, 0.6);
  std::uniform_real_distribution<double> spread(0.02, 0.3);
  auto draw = [&](std::size_t n, double mu, double sd) {
    std::normal_distribution<double> normal(mu, sd);
    std::vector<double> v(n);
    for (double& x : v) x = std::clamp(normal(rng), 0.0, 1.0);
    return v;
  };
  const double mp = mean_pos(rng), sp = spread(rng);
  const double mn = mean_neg(rng), sn = spread(rng);
  auto pos = draw(n_pos, mp, sp);
  auto neg = draw(n_neg, mn, sn);
  return ScorePair(std::move(pos), std::move(neg));
}

}  // namespace

std::optional<InconsistencyWitness> find_inconsistency(std::uint64_t seed, std::uint64_t trials,
                                                       std::size_t n_pos, std::size_t n_neg) {
  require(trials >= 1, "find_inconsistency: trials must be >= 1");
  const TpaucSpec spec(0.4, 0.6);
  for (std::uint64_t t = 0; t < trials; ++t) {
    CounterRng rng(seed, {t});
    ScorePair a = random_scorer(rng, n_pos, n_neg);
    ScorePair b = random_scorer(rng, n_pos, n_neg);
    const double oa = empirical_opauc(a, spec.beta());
    const double ob = empirical_opauc(b, spec.beta());
    const double ta = empirical_tpauc(a, spec);
    const double tb = empirical_tpauc(b, spec);
    if (oa < ob && ta > tb) return InconsistencyWitness{std::move(a), std::move(b), oa, ob, ta, tb, t};
    if (ob < oa && tb > ta) return InconsistencyWitness{std::move(b), std::move(a), ob, oa, tb, ta, t};
  }
  return std::nullopt;
}

}  // namespace tpauc

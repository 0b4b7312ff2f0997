#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tpauc/metrics.hpp"

using namespace tpauc;

namespace {

std::vector<double> vec(std::span<const double> s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_CASE("spec validation and hard counts") {
  CHECK_THROWS(TpaucSpec(0.0, 0.5));
  CHECK_THROWS(TpaucSpec(0.5, 1.5));
  CHECK_NOTHROW(TpaucSpec(1.0, 1.0));
  const TpaucSpec spec(0.3, 0.7);
  CHECK(spec.pos_hard(10) == 3);
  CHECK(spec.neg_hard(10) == 7);
  CHECK(spec.pos_hard(3) == 0);
  CHECK(hard_count(100, 0.3) == 30);
  CHECK(hard_count(7, 1.0) == 7);
}

TEST_CASE("estimator examples") {
  CHECK(empirical_auc(ScorePair({0.8}, {0.2})) == 1.0);
  CHECK(empirical_auc(ScorePair({0.2}, {0.8})) == 0.0);
  CHECK(empirical_auc(ScorePair({0.5}, {0.5})) == 0.0);
  CHECK(empirical_tpauc(ScorePair({0.9, 0.8, 0.7, 0.6}, {0.4, 0.3, 0.2, 0.1}), TpaucSpec(0.5, 0.5)) == 1.0);
  CHECK(empirical_tpauc(ScorePair({0.1, 0.2}, {0.8, 0.9}), TpaucSpec(1.0, 1.0)) == 0.0);
  CHECK(empirical_opauc(ScorePair({0.9, 0.8}, {0.1, 0.2}), 0.5) == 1.0);
  CHECK_THROWS(empirical_tpauc(ScorePair({0.5, 0.6}, {0.1}), TpaucSpec(0.4, 0.5)));
  CHECK_THROWS(empirical_opauc(ScorePair({0.5}, {0.1, 0.2}), 0.4));
}

TEST_CASE("hard sets: ties broken by index and thresholds are tight") {
  const ScorePair s({0.3, 0.1, 0.3, 0.3, 0.9}, {0.7, 0.7, 0.2, 0.7});
  const HardSets hs = select_hard_sets(s, TpaucSpec(0.6, 0.5));
  CHECK(hs.pos_hard == std::vector<std::size_t>{1, 0, 2});
  CHECK(hs.neg_hard == std::vector<std::size_t>{0, 1});
  CHECK(hs.t_pos == 0.3);
  CHECK(hs.t_neg == 0.7);

  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 50; ++trial) {
    const ScorePair r = oracle::random_scores(gen, 25, 40, trial % 2 == 0);
    const TpaucSpec spec(0.4, 0.3);
    const HardSets h = select_hard_sets(r, spec);
    std::size_t le = 0, lt = 0;
    for (double p : r.pos()) {
      le += p <= h.t_pos ? 1 : 0;
      lt += p < h.t_pos ? 1 : 0;
    }
    CHECK(le >= h.pos_hard.size());
    CHECK(lt < h.pos_hard.size());
    CHECK(h.pos_hard == oracle::bottom_k(vec(r.pos()), 10));
    CHECK(h.neg_hard == oracle::top_k(vec(r.neg()), 12));
  }
}

TEST_CASE("estimators match brute-force double loops") {
  std::mt19937_64 gen(5);
  std::uniform_int_distribution<std::size_t> n(4, 60);
  for (int trial = 0; trial < 60; ++trial) {
    const ScorePair s = oracle::random_scores(gen, n(gen), n(gen), trial % 3 == 0);
    const auto pos = vec(s.pos()), neg = vec(s.neg());
    CHECK(empirical_auc(s) ==
          oracle::pair_accuracy(pos, neg, oracle::all_indices(pos.size()), oracle::all_indices(neg.size())));
    const std::size_t kp = oracle::hard_count_tenths(pos.size(), 5), kn = oracle::hard_count_tenths(neg.size(), 5);
    CHECK(empirical_tpauc(s, TpaucSpec(0.5, 0.5)) ==
          oracle::pair_accuracy(pos, neg, oracle::bottom_k(pos, kp), oracle::top_k(neg, kn)));
    CHECK(empirical_opauc(s, 0.5) == oracle::pair_accuracy(pos, neg, oracle::all_indices(pos.size()), oracle::top_k(neg, kn)));
    const double scale = static_cast<double>(kp * kn) / static_cast<double>(pos.size() * neg.size());
    CHECK(tpauc_zero_one_risk(s, TpaucSpec(0.5, 0.5)) ==
          doctest::Approx((1.0 - empirical_tpauc(s, TpaucSpec(0.5, 0.5))) * scale).epsilon(1e-14));
  }
}

TEST_CASE("full-range TPAUC and OPAUC reduce to AUC") {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 30; ++trial) {
    const ScorePair s = oracle::random_scores(gen, 17, 23, trial % 2 == 0);
    CHECK(empirical_tpauc(s, TpaucSpec(1.0, 1.0)) == empirical_auc(s));
    CHECK(empirical_opauc(s, 1.0) == empirical_auc(s));
  }
}

TEST_CASE("TPAUC is invariant under strictly increasing transforms") {
  std::mt19937_64 gen(13);
  for (int trial = 0; trial < 30; ++trial) {
    const ScorePair s = oracle::random_scores(gen, 31, 29, trial % 2 == 0);
    std::vector<double> p, n;
    for (double x : s.pos()) p.push_back(x * x * x);
    for (double x : s.neg()) n.push_back(x * x * x);
    const ScorePair t(std::move(p), std::move(n));
    for (const TpaucSpec spec : {TpaucSpec(0.3, 0.3), TpaucSpec(0.5, 0.4), TpaucSpec(1.0, 0.3)}) {
      CHECK(empirical_tpauc(s, spec) == empirical_tpauc(t, spec));
    }
  }
}

TEST_CASE("inconsistency witness re-verifies") {
  const auto w = find_inconsistency(1, 10000);
  REQUIRE(w.has_value());
  const TpaucSpec spec(0.4, 0.6);
  CHECK(empirical_opauc(w->a, 0.6) < empirical_opauc(w->b, 0.6));
  CHECK(empirical_tpauc(w->a, spec) > empirical_tpauc(w->b, spec));
  CHECK(w->opauc_a == empirical_opauc(w->a, 0.6));
  CHECK(w->tpauc_b == empirical_tpauc(w->b, spec));
  CHECK_THROWS(find_inconsistency(1, 0));
}

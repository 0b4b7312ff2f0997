#pragma once
// Independent reference implementations used by the unit and acceptance tests.
// Nothing here calls into the library's estimators.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "tpauc/data.hpp"

namespace oracle {

/// Uniform scores in [0,1]; with `quantize`, rounded to multiples of 1/20 so ties occur.
inline tpauc::ScorePair random_scores(std::mt19937_64& gen, std::size_t n_pos, std::size_t n_neg,
                                      bool quantize = false, double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  auto draw = [&] {
    double x = u(gen);
    return quantize ? std::round(x * 20.0) / 20.0 : x;
  };
  std::vector<double> p(n_pos), n(n_neg);
  for (auto& x : p) x = draw();
  for (auto& x : n) x = draw();
  return {std::move(p), std::move(n)};
}

/// floor(n * tenths / 10) for fractions that are exact multiples of 0.1.
inline std::size_t hard_count_tenths(std::size_t n, int tenths) { return n * static_cast<std::size_t>(tenths) / 10; }

/// Indices of the k lowest positives (ties: lower index first).
inline std::vector<std::size_t> bottom_k(const std::vector<double>& x, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> v;
  for (std::size_t i = 0; i < x.size(); ++i) v.emplace_back(x[i], i);
  std::sort(v.begin(), v.end());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(v[i].second);
  return out;
}

/// Indices of the k highest negatives (ties: lower index first).
inline std::vector<std::size_t> top_k(const std::vector<double>& x, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> v;
  for (std::size_t i = 0; i < x.size(); ++i) v.emplace_back(-x[i], i);
  std::sort(v.begin(), v.end());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(v[i].second);
  return out;
}

/// 1 - errors / (|P| |N|) over the given index sets; a tie is an error.
inline double pair_accuracy(const std::vector<double>& pos, const std::vector<double>& neg,
                            const std::vector<std::size_t>& P, const std::vector<std::size_t>& N) {
  std::size_t errors = 0;
  for (std::size_t i : P) {
    for (std::size_t j : N) {
      if (!(pos[i] > neg[j])) ++errors;
    }
  }
  return 1.0 - static_cast<double>(errors) / (static_cast<double>(P.size()) * static_cast<double>(N.size()));
}

inline std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

inline double sq(double t) { return (1.0 - t) * (1.0 - t); }

/// (1/(n+ n-)) sum_ij u_i w_j (1 - p_i + g_j)^2 by a double loop.
inline double weighted_square_risk(const std::vector<double>& pos, const std::vector<double>& neg,
                                   const std::function<double(double)>& psi_pos,
                                   const std::function<double(double)>& psi_neg) {
  double total = 0.0;
  for (double p : pos) {
    for (double g : neg) total += psi_pos(1.0 - p) * psi_neg(g) * sq(p - g);
  }
  return total / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

/// Central difference of f at x along coordinate k.
inline double central_diff(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x,
                           std::size_t k, double h) {
  const double x0 = x[k];
  x[k] = x0 + h;
  const double fp = f(x);
  x[k] = x0 - h;
  const double fm = f(x);
  return (fp - fm) / (2.0 * h);
}

/// ||a - b|| / max(||a||, ||b||, floor)
inline double rel_error(const std::vector<double>& a, const std::vector<double>& b, double floor = 1e-12) {
  double d = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    d += (a[k] - b[k]) * (a[k] - b[k]);
    na += a[k] * a[k];
    nb += b[k] * b[k];
  }
  return std::sqrt(d) / std::max({std::sqrt(na), std::sqrt(nb), floor});
}

/// Visit every k-subset of {0..n-1}.
inline void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<bool> mask(n, false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(k), true);
  do {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask[i]) idx.push_back(i);
    }
    fn(idx);
  } while (std::prev_permutation(mask.begin(), mask.end()));
}

}  // namespace oracle

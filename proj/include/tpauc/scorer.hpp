#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "tpauc/data.hpp"

namespace tpauc {

enum class ScorerKind { Linear, Mlp };

std::string_view to_string(ScorerKind kind) noexcept;

/// Parameters of a scorer f: R^d -> (0,1) with a logistic output.
///
/// Flat layout, which is also the serialization order:
///   Linear: w[d], b
///   Mlp:    W1[h x d] row-major, b1[h], w2[h], b2       f(x) = sigma(w2 . tanh(W1 x + b1) + b2)
class ScorerParams {
 public:
  ScorerParams(ScorerKind kind, std::size_t dim, std::size_t hidden, std::vector<double> values);

  ScorerKind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t hidden() const noexcept { return hidden_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

  static std::size_t param_count(ScorerKind kind, std::size_t dim, std::size_t hidden) noexcept;

  friend bool operator==(const ScorerParams&, const ScorerParams&) = default;

 private:
  ScorerKind kind_;
  std::size_t dim_;
  std::size_t hidden_;
  std::vector<double> values_;
};

/// Weights ~ N(0, 1/sqrt(fan_in)), biases 0. `hidden` is ignored for Linear.
ScorerParams init_scorer(ScorerKind kind, std::size_t dim, std::size_t hidden, std::uint64_t seed);

/// Scores for every row of x; each lies strictly inside (0,1).
std::vector<double> forward(const ScorerParams& p, const FeatureMatrix& x);

/// Gradient of sum_r d_out[r] * f(x_r) with respect to every parameter (flat layout).
std::vector<double> backward(const ScorerParams& p, const FeatureMatrix& x, std::span<const double> d_out);

/// Text model file; see README for the format.
void save_model(const ScorerParams& p, const std::filesystem::path& path);
ScorerParams load_model(const std::filesystem::path& path);

}  // namespace tpauc

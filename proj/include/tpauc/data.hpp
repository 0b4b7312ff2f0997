#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace tpauc {

/// Row-major feature matrix; owns its storage.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::vector<double> values, std::size_t cols);

  std::size_t rows() const noexcept { return cols_ == 0 ? 0 : values_.size() / cols_; }
  std::size_t cols() const noexcept { return cols_; }
  std::span<const double> row(std::size_t r) const noexcept {
    return {values_.data() + r * cols_, cols_};
  }
  std::span<const double> values() const noexcept { return values_; }

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;

 private:
  std::vector<double> values_;
  std::size_t cols_ = 0;
};

/// Labeled examples with both classes present. Immutable after construction;
/// the constructor enforces the label/feature invariants.
class Dataset {
 public:
  Dataset(FeatureMatrix features, std::vector<int> labels);

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t dim() const noexcept { return features_.cols(); }
  std::size_t n_pos() const noexcept { return pos_index_.size(); }
  std::size_t n_neg() const noexcept { return neg_index_.size(); }

  const FeatureMatrix& features() const noexcept { return features_; }
  std::span<const int> labels() const noexcept { return labels_; }
  std::span<const std::size_t> pos_index() const noexcept { return pos_index_; }
  std::span<const std::size_t> neg_index() const noexcept { return neg_index_; }

  /// Copies the listed rows, in order, into a new matrix.
  FeatureMatrix gather(std::span<const std::size_t> rows) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  FeatureMatrix features_;
  std::vector<int> labels_;
  std::vector<std::size_t> pos_index_;
  std::vector<std::size_t> neg_index_;
};

/// Scores of a scorer on the positive and negative pools. Every score lies in
/// [0,1] and both vectors are non-empty.
class ScorePair {
 public:
  ScorePair(std::vector<double> pos, std::vector<double> neg);

  std::span<const double> pos() const noexcept { return pos_; }
  std::span<const double> neg() const noexcept { return neg_; }
  std::size_t n_pos() const noexcept { return pos_.size(); }
  std::size_t n_neg() const noexcept { return neg_.size(); }

  friend bool operator==(const ScorePair&, const ScorePair&) = default;

 private:
  std::vector<double> pos_;
  std::vector<double> neg_;
};

/// Splits per-row scores of `ds` into a ScorePair via the dataset's class indices.
ScorePair split_scores(const Dataset& ds, std::span<const double> row_scores);

struct BatchSpec {
  std::size_t batch_size = 128;
  std::size_t pos_per_batch = 12;
  std::uint64_t seed = 0;

  /// pos_per_batch = round(batch_size / 11), i.e. a 1:10 positive:negative ratio.
  static BatchSpec with_ratio(std::size_t batch_size, std::uint64_t seed);
  std::size_t neg_per_batch() const noexcept { return batch_size - pos_per_batch; }
  void validate() const;
};

struct Batch {
  std::vector<std::size_t> pos;  // dataset row indices
  std::vector<std::size_t> neg;
};

/// Exactly pos_per_batch positives and batch_size - pos_per_batch negatives,
/// without replacement, as a pure function of (spec.seed, epoch, step).
Batch sample_batch(const Dataset& ds, const BatchSpec& spec, std::uint64_t epoch, std::uint64_t step);

/// Positives ~ N(0.5, 0.08), negatives ~ N(0.3, 0.08), clamped into [0,1].
ScorePair gen_gaussian_scores(std::size_t n_pos, std::size_t n_neg, std::uint64_t seed);

/// Positives ~ N(+sep*1/sqrt(d), I), negatives ~ N(-sep*1/sqrt(d), I). Rows
/// are emitted positives first.
Dataset gen_gaussian_features(std::size_t n_pos, std::size_t n_neg, std::size_t dim,
                              double separation, std::uint64_t seed);

// CSV interchange: header `label,f1,...,fd`, or `label,score` for score files.

Dataset load_csv(const std::filesystem::path& path);
void save_csv(const Dataset& ds, const std::filesystem::path& path);

ScorePair load_score_csv(const std::filesystem::path& path);
void save_score_csv(const ScorePair& scores, const std::filesystem::path& path);

}  // namespace tpauc

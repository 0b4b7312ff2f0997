#include "tpauc/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <string_view>

#include "tpauc/errors.hpp"
#include "tpauc/rng.hpp"

namespace tpauc {

FeatureMatrix::FeatureMatrix(std::vector<double> values, std::size_t cols)
    : values_(std::move(values)), cols_(cols) {
  require(cols_ >= 1, "feature matrix needs at least one column");
  require(values_.size() % cols_ == 0, "feature matrix size is not a multiple of the column count");
}

Dataset::Dataset(FeatureMatrix features, std::vector<int> labels)
    : features_(std::move(features)), labels_(std::move(labels)) {
  require(features_.rows() == labels_.size(), "dataset: feature rows and labels differ in length");
  for (double v : features_.values()) require(std::isfinite(v), "dataset: non-finite feature value");
  for (std::size_t r = 0; r < labels_.size(); ++r) {
    if (labels_[r] == 1) {
      pos_index_.push_back(r);
    } else {
      require(labels_[r] == 0, "dataset: labels must be 0 or 1");
      neg_index_.push_back(r);
    }
  }
  require(!pos_index_.empty(), "missing positive class");
  require(!neg_index_.empty(), "missing negative class");
}

FeatureMatrix Dataset::gather(std::span<const std::size_t> rows) const {
  std::vector<double> out;
  out.reserve(rows.size() * dim());
  for (std::size_t r : rows) {
    require(r < size(), "gather: row index out of range");
    auto src = features_.row(r);
    out.insert(out.end(), src.begin(), src.end());
  }
  return FeatureMatrix(std::move(out), dim());
}

ScorePair::ScorePair(std::vector<double> pos, std::vector<double> neg)
    : pos_(std::move(pos)), neg_(std::move(neg)) {
  require(!pos_.empty() && !neg_.empty(), "score pair: both classes need at least one score");
  auto in_range = [](double s) { return s >= 0.0 && s <= 1.0; };
  require(std::all_of(pos_.begin(), pos_.end(), in_range) &&
              std::all_of(neg_.begin(), neg_.end(), in_range),
          "score pair: every score must lie in [0,1]");
}

ScorePair split_scores(const Dataset& ds, std::span<const double> row_scores) {
  require(row_scores.size() == ds.size(), "split_scores: one score per dataset row expected");
  std::vector<double> pos;
  std::vector<double> neg;
  pos.reserve(ds.n_pos());
  neg.reserve(ds.n_neg());
  for (std::size_t r : ds.pos_index()) pos.push_back(row_scores[r]);
  for (std::size_t r : ds.neg_index()) neg.push_back(row_scores[r]);
  return ScorePair(std::move(pos), std::move(neg));
}

BatchSpec BatchSpec::with_ratio(std::size_t batch_size, std::uint64_t seed) {
  BatchSpec spec;
  spec.batch_size = batch_size;
  spec.pos_per_batch = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(static_cast<double>(batch_size) / 11.0)));
  spec.seed = seed;
  return spec;
}

void BatchSpec::validate() const {
  require(pos_per_batch >= 1, "batch: pos_per_batch must be positive");
  require(pos_per_batch < batch_size, "batch: pos_per_batch must be smaller than batch_size");
}

Batch sample_batch(const Dataset& ds, const BatchSpec& spec, std::uint64_t epoch, std::uint64_t step) {
  spec.validate();
  require(ds.n_pos() >= spec.pos_per_batch,
          "sample_batch: positive pool (" + std::to_string(ds.n_pos()) + ") smaller than pos_per_batch (" +
              std::to_string(spec.pos_per_batch) + ")");
  require(ds.n_neg() >= spec.neg_per_batch(),
          "sample_batch: negative pool (" + std::to_string(ds.n_neg()) + ") smaller than requested (" +
              std::to_string(spec.neg_per_batch()) + ")");
  Batch batch;
  batch.pos.reserve(spec.pos_per_batch);
  batch.neg.reserve(spec.neg_per_batch());
  CounterRng pos_rng(spec.seed, {epoch, step, 0});
  CounterRng neg_rng(spec.seed, {epoch, step, 1});
  std::sample(ds.pos_index().begin(), ds.pos_index().end(), std::back_inserter(batch.pos),
              spec.pos_per_batch, pos_rng);
  std::sample(ds.neg_index().begin(), ds.neg_index().end(), std::back_inserter(batch.neg),
              spec.neg_per_batch(), neg_rng);
  return batch;
}

ScorePair gen_gaussian_scores(std::size_t n_pos, std::size_t n_neg, std::uint64_t seed) {
  require(n_pos >= 1 && n_neg >= 1, "gen_gaussian_scores: n_pos and n_neg must be >= 1");
  auto draw = [seed](std::size_t n, double mean, std::uint64_t stream) {
    CounterRng rng(seed, {stream});
    std::normal_distribution<double> normal(mean, 0.08);
    std::vector<double> out(n);
    for (double& s : out) s = std::clamp(normal(rng), 0.0, 1.0);
    return out;
  };
  return ScorePair(draw(n_pos, 0.5, 0), draw(n_neg, 0.3, 1));
}

Dataset gen_gaussian_features(std::size_t n_pos, std::size_t n_neg, std::size_t dim,
                              double separation, std::uint64_t seed) {
  require(n_pos >= 1 && n_neg >= 1, "gen_gaussian_features: n_pos and n_neg must be >= 1");
  require(dim >= 1, "gen_gaussian_features: dim must be >= 1");
  require(separation >= 0.0 && std::isfinite(separation), "gen_gaussian_features: separation must be >= 0");
  const double shift = separation / std::sqrt(static_cast<double>(dim));
  CounterRng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> values;
  values.reserve((n_pos + n_neg) * dim);
  std::vector<int> labels;
  labels.reserve(n_pos + n_neg);
  for (std::size_t i = 0; i < n_pos + n_neg; ++i) {
    const bool positive = i < n_pos;
    for (std::size_t k = 0; k < dim; ++k) values.push_back(normal(rng) + (positive ? shift : -shift));
    labels.push_back(positive ? 1 : 0);
  }
  return Dataset(FeatureMatrix(std::move(values), dim), std::move(labels));
}

// ---- CSV -------------------------------------------------------------------

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view field, double& out) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, out);
  return ec == std::errc() && ptr == end && !field.empty();
}

int parse_label(std::string_view field, const std::string& path, std::size_t line_no) {
  field = trim(field);
  if (field == "1") return 1;
  if (field == "0") return 0;
  throw ParseError(path, line_no, "label must be 0 or 1, got '" + std::string(field) + "'");
}

void write_double(std::ostream& os, double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  os.write(buf, ptr - buf);
}

struct CsvRows {
  std::vector<std::string_view> header;
  std::vector<int> labels;
  std::vector<double> values;
  std::vector<std::size_t> line_numbers;
  std::size_t cols = 0;
};

// Reads a `label,...` CSV into labels plus row-major values.
CsvRows read_labeled_csv(const std::filesystem::path& path, std::string& storage) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open '" + path.string() + "'");
  storage.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  const std::string name = path.string();

  CsvRows rows;
  std::string_view text(storage);
  std::size_t line_no = 0;
  bool have_header = false;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_commas(line);
    if (!have_header) {
      if (trim(fields.front()) != "label") throw ParseError(name, line_no, "first header column must be 'label'");
      if (fields.size() < 2) throw ParseError(name, line_no, "header needs at least one value column");
      rows.header = fields;
      rows.cols = fields.size() - 1;
      have_header = true;
      continue;
    }
    if (fields.size() != rows.cols + 1) {
      throw ParseError(name, line_no,
                       "expected " + std::to_string(rows.cols + 1) + " fields, got " + std::to_string(fields.size()));
    }
    rows.labels.push_back(parse_label(fields[0], name, line_no));
    rows.line_numbers.push_back(line_no);
    for (std::size_t k = 1; k < fields.size(); ++k) {
      double v = 0.0;
      if (!parse_double(fields[k], v)) {
        throw ParseError(name, line_no, "cannot parse '" + std::string(trim(fields[k])) + "' as a number");
      }
      if (!std::isfinite(v)) throw ParseError(name, line_no, "non-finite value");
      rows.values.push_back(v);
    }
  }
  if (!have_header) throw ParseError(name, 1, "empty file; expected a header");
  return rows;
}

void require_both_classes(const std::vector<int>& labels, const std::filesystem::path& path) {
  const bool has_pos = std::find(labels.begin(), labels.end(), 1) != labels.end();
  const bool has_neg = std::find(labels.begin(), labels.end(), 0) != labels.end();
  if (!has_pos) throw DomainError(path.string() + ": missing positive class");
  if (!has_neg) throw DomainError(path.string() + ": missing negative class");
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path) {
  std::string storage;
  CsvRows rows = read_labeled_csv(path, storage);
  require_both_classes(rows.labels, path);
  return Dataset(FeatureMatrix(std::move(rows.values), rows.cols), std::move(rows.labels));
}

void save_csv(const Dataset& ds, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  out << "label";
  for (std::size_t k = 1; k <= ds.dim(); ++k) out << ",f" << k;
  out << '\n';
  for (std::size_t r = 0; r < ds.size(); ++r) {
    out << ds.labels()[r];
    for (double v : ds.features().row(r)) {
      out << ',';
      write_double(out, v);
    }
    out << '\n';
  }
  if (!out) throw DomainError("write failed for '" + path.string() + "'");
}

ScorePair load_score_csv(const std::filesystem::path& path) {
  std::string storage;
  CsvRows rows = read_labeled_csv(path, storage);
  if (rows.cols != 1 || trim(rows.header[1]) != "score") {
    throw ParseError(path.string(), 1, "score file header must be 'label,score'");
  }
  require_both_classes(rows.labels, path);
  std::vector<double> pos;
  std::vector<double> neg;
  for (std::size_t r = 0; r < rows.labels.size(); ++r) {
    const double s = rows.values[r];
    if (s < 0.0 || s > 1.0) throw ParseError(path.string(), rows.line_numbers[r], "score outside [0,1]");
    (rows.labels[r] == 1 ? pos : neg).push_back(s);
  }
  return ScorePair(std::move(pos), std::move(neg));
}

void save_score_csv(const ScorePair& scores, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  out << "label,score\n";
  for (double s : scores.pos()) {
    out << "1,";
    write_double(out, s);
    out << '\n';
  }
  for (double s : scores.neg()) {
    out << "0,";
    write_double(out, s);
    out << '\n';
  }
  if (!out) throw DomainError("write failed for '" + path.string() + "'");
}

}  // namespace tpauc

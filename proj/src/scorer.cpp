#include "tpauc/scorer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "tpauc/errors.hpp"
#include "tpauc/kernels.hpp"
#include "tpauc/rng.hpp"

namespace tpauc {

namespace {

constexpr std::string_view kMagic = "TPAUCOPT-MODEL v1";
// Keeps saturated logistic outputs off the closed interval ends.
constexpr double kScoreFloor = 1e-12;

double logistic(double z) {
  const double s = z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
  return std::clamp(s, kScoreFloor, 1.0 - kScoreFloor);
}

void check_dim(const ScorerParams& p, const FeatureMatrix& x) {
  if (x.cols() != p.dim()) {
    throw DomainError("dimension mismatch: model expects " + std::to_string(p.dim()) + " features, data has " +
                      std::to_string(x.cols()));
  }
}

// Views into the flat Mlp layout.
struct MlpView {
  std::span<const double> w1, b1, w2;
  double b2;
};

MlpView mlp_view(const ScorerParams& p) {
  const std::size_t d = p.dim(), h = p.hidden();
  auto v = p.values();
  return {v.subspan(0, h * d), v.subspan(h * d, h), v.subspan(h * d + h, h), v[h * d + 2 * h]};
}

}  // namespace

std::string_view to_string(ScorerKind kind) noexcept { return kind == ScorerKind::Linear ? "linear" : "mlp"; }

std::size_t ScorerParams::param_count(ScorerKind kind, std::size_t dim, std::size_t hidden) noexcept {
  return kind == ScorerKind::Linear ? dim + 1 : hidden * dim + 2 * hidden + 1;
}

ScorerParams::ScorerParams(ScorerKind kind, std::size_t dim, std::size_t hidden, std::vector<double> values)
    : kind_(kind), dim_(dim), hidden_(kind == ScorerKind::Linear ? 0 : hidden), values_(std::move(values)) {
  require(dim_ >= 1, "scorer: dim must be >= 1");
  require(kind_ == ScorerKind::Linear || hidden_ >= 1, "scorer: mlp needs hidden >= 1");
  require(values_.size() == param_count(kind_, dim_, hidden_), "scorer: wrong parameter count");
  for (double v : values_) require(std::isfinite(v), "scorer: non-finite parameter");
}

ScorerParams init_scorer(ScorerKind kind, std::size_t dim, std::size_t hidden, std::uint64_t seed) {
  require(dim >= 1, "init_scorer: dim must be >= 1");
  require(kind == ScorerKind::Linear || hidden >= 1, "init_scorer: mlp needs hidden >= 1");
  CounterRng rng(seed);
  std::vector<double> v(ScorerParams::param_count(kind, dim, hidden), 0.0);
  auto fill = [&](std::size_t from, std::size_t count, std::size_t fan_in) {
    std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(fan_in)));
    for (std::size_t k = from; k < from + count; ++k) v[k] = normal(rng);
  };
  if (kind == ScorerKind::Linear) {
    fill(0, dim, dim);
  } else {
    fill(0, hidden * dim, dim);
    fill(hidden * dim + hidden, hidden, hidden);
  }
  return ScorerParams(kind, dim, hidden, std::move(v));
}

std::vector<double> forward(const ScorerParams& p, const FeatureMatrix& x) {
  check_dim(p, x);
  std::vector<double> out(x.rows());
  if (p.kind() == ScorerKind::Linear) {
    const auto w = p.values().first(p.dim());
    const double b = p.values()[p.dim()];
    for (std::size_t r = 0; r < x.rows(); ++r) out[r] = logistic(kernels::dot(w, x.row(r)) + b);
    return out;
  }
  const MlpView m = mlp_view(p);
  const std::size_t d = p.dim(), h = p.hidden();
  std::vector<double> act(h);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t u = 0; u < h; ++u) act[u] = std::tanh(kernels::dot(m.w1.subspan(u * d, d), x.row(r)) + m.b1[u]);
    out[r] = logistic(kernels::dot(m.w2, act) + m.b2);
  }
  return out;
}

std::vector<double> backward(const ScorerParams& p, const FeatureMatrix& x, std::span<const double> d_out) {
  check_dim(p, x);
  require(d_out.size() == x.rows(), "backward: one output gradient per row expected");
  std::vector<double> grad(p.size(), 0.0);
  const std::size_t d = p.dim();
  if (p.kind() == ScorerKind::Linear) {
    const auto w = p.values().first(d);
    const double b = p.values()[d];
    auto gw = std::span<double>(grad).first(d);
    for (std::size_t r = 0; r < x.rows(); ++r) {
      if (d_out[r] == 0.0) continue;
      const double s = logistic(kernels::dot(w, x.row(r)) + b);
      const double dz = d_out[r] * s * (1.0 - s);
      kernels::axpy(dz, x.row(r), gw);
      grad[d] += dz;
    }
    return grad;
  }
  const MlpView m = mlp_view(p);
  const std::size_t h = p.hidden();
  auto g = std::span<double>(grad);
  auto g_w1 = g.subspan(0, h * d);
  auto g_b1 = g.subspan(h * d, h);
  auto g_w2 = g.subspan(h * d + h, h);
  double& g_b2 = grad[h * d + 2 * h];
  std::vector<double> act(h);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    if (d_out[r] == 0.0) continue;
    for (std::size_t u = 0; u < h; ++u) act[u] = std::tanh(kernels::dot(m.w1.subspan(u * d, d), x.row(r)) + m.b1[u]);
    const double s = logistic(kernels::dot(m.w2, act) + m.b2);
    const double dz = d_out[r] * s * (1.0 - s);
    kernels::axpy(dz, act, g_w2);
    g_b2 += dz;
    for (std::size_t u = 0; u < h; ++u) {
      const double dh = dz * m.w2[u] * (1.0 - act[u] * act[u]);
      kernels::axpy(dh, x.row(r), g_w1.subspan(u * d, d));
      g_b1[u] += dh;
    }
  }
  return grad;
}

void save_model(const ScorerParams& p, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write '" + path.string() + "'");
  out.precision(17);
  out << kMagic << '\n' << "kind " << to_string(p.kind()) << '\n';
  if (p.kind() == ScorerKind::Linear) {
    out << p.dim() << '\n';
  } else {
    out << p.dim() << ' ' << p.hidden() << '\n';
  }
  auto write_line = [&](std::span<const double> xs) {
    for (std::size_t k = 0; k < xs.size(); ++k) out << (k ? " " : "") << xs[k];
    out << '\n';
  };
  const std::size_t d = p.dim();
  auto v = p.values();
  if (p.kind() == ScorerKind::Linear) {
    write_line(v.first(d));
    write_line(v.subspan(d, 1));
  } else {
    const std::size_t h = p.hidden();
    for (std::size_t u = 0; u < h; ++u) write_line(v.subspan(u * d, d));
    write_line(v.subspan(h * d, h));
    write_line(v.subspan(h * d + h, h));
    write_line(v.subspan(h * d + 2 * h, 1));
  }
  if (!out) throw DomainError("write failed for '" + path.string() + "'");
}

ScorerParams load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open '" + path.string() + "'");
  const std::string name = path.string();
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  if (!next_line() || line != kMagic) throw ParseError(name, 1, "version mismatch: expected '" + std::string(kMagic) + "'");
  if (!next_line()) throw ParseError(name, 2, "missing kind line");
  ScorerKind kind;
  if (line == "kind linear") {
    kind = ScorerKind::Linear;
  } else if (line == "kind mlp") {
    kind = ScorerKind::Mlp;
  } else {
    throw ParseError(name, line_no, "expected 'kind linear' or 'kind mlp'");
  }
  if (!next_line()) throw ParseError(name, 3, "missing dimension line");
  std::size_t dim = 0, hidden = 0;
  {
    std::istringstream ds(line);
    if (!(ds >> dim) || dim == 0) throw ParseError(name, line_no, "bad input dimension");
    if (kind == ScorerKind::Mlp && (!(ds >> hidden) || hidden == 0)) throw ParseError(name, line_no, "bad hidden width");
    std::string extra;
    if (ds >> extra) throw ParseError(name, line_no, "unexpected token '" + extra + "'");
  }
  const std::size_t expected = ScorerParams::param_count(kind, dim, hidden);
  std::vector<double> values;
  values.reserve(expected);
  while (next_line()) {
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      double v = 0.0;
      std::size_t used = 0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size() || !std::isfinite(v)) throw ParseError(name, line_no, "cannot parse '" + tok + "'");
      if (values.size() == expected) throw ParseError(name, line_no, "more parameters than declared");
      values.push_back(v);
    }
  }
  if (values.size() != expected) {
    throw ParseError(name, line_no,
                     "expected " + std::to_string(expected) + " parameters, found " + std::to_string(values.size()));
  }
  return ScorerParams(kind, dim, hidden, std::move(values));
}

}  // namespace tpauc

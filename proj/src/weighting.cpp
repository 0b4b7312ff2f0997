#include "tpauc/weighting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tpauc/errors.hpp"

namespace tpauc {

namespace {

void require_unit(double t, const char* what) {
  require(t >= 0.0 && t <= 1.0, std::string(what) + ": argument must lie in [0,1]");
}

}  // namespace

WeightScheme WeightScheme::poly(double gamma) {
  require(std::isfinite(gamma) && gamma > 2.0, "poly weighting requires gamma > 2");
  return {WeightFamily::Poly, gamma};
}

WeightScheme WeightScheme::poly_analysis(double gamma) {
  require(std::isfinite(gamma) && gamma > 1.0, "poly (analysis) requires gamma > 1");
  return {WeightFamily::Poly, gamma};
}

WeightScheme WeightScheme::exp(double gamma) {
  require(std::isfinite(gamma) && gamma > 0.0, "exp weighting requires gamma > 0");
  return {WeightFamily::Exp, gamma};
}

WeightScheme WeightScheme::constant() { return {WeightFamily::Constant, 0.0}; }

double WeightScheme::sup_weight() const noexcept {
  return family_ == WeightFamily::Exp ? -std::expm1(-gamma_) : 1.0;
}

double WeightScheme::psi_unchecked(double t) const noexcept {
  switch (family_) {
    case WeightFamily::Poly:
      return std::pow(t, 1.0 / (gamma_ - 1.0));
    case WeightFamily::Exp:
      return -std::expm1(-gamma_ * t);
    case WeightFamily::Constant:
      return 1.0;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double WeightScheme::psi(double t) const {
  require_unit(t, "psi");
  return psi_unchecked(t);
}

double WeightScheme::psi_prime(double t) const {
  require_unit(t, "psi_prime");
  switch (family_) {
    case WeightFamily::Poly: {
      const double e = 1.0 / (gamma_ - 1.0);
      return e * std::pow(std::max(t, 1e-12), e - 1.0);
    }
    case WeightFamily::Exp:
      return gamma_ * std::exp(-gamma_ * t);
    case WeightFamily::Constant:
      return 0.0;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double WeightScheme::phi(double v) const {
  switch (family_) {
    case WeightFamily::Poly:
      require(v >= 0.0, "phi (poly): v must be >= 0");
      return std::pow(v, gamma_) / gamma_;
    case WeightFamily::Exp:
      require(v >= 0.0 && v <= 1.0, "phi (exp): v must lie in [0,1]");
      if (v == 1.0) return 1.0 / gamma_;
      return ((1.0 - v) * (std::log1p(-v) - 1.0) + 1.0) / gamma_;
    case WeightFamily::Constant:
      break;
  }
  throw DomainError("constant weighting has no dual penalty");
}

double WeightScheme::phi_prime(double v) const {
  switch (family_) {
    case WeightFamily::Poly:
      require(v >= 0.0, "phi_prime (poly): v must be >= 0");
      return std::pow(v, gamma_ - 1.0);
    case WeightFamily::Exp:
      require(v >= 0.0 && v < 1.0, "phi_prime (exp): v must lie in [0,1)");
      return -std::log1p(-v) / gamma_;
    case WeightFamily::Constant:
      break;
  }
  throw DomainError("constant weighting has no dual penalty");
}

std::string WeightScheme::describe() const {
  std::ostringstream os;
  switch (family_) {
    case WeightFamily::Poly:
      os << "poly(gamma=" << gamma_ << ")";
      break;
    case WeightFamily::Exp:
      os << "exp(gamma=" << gamma_ << ")";
      break;
    case WeightFamily::Constant:
      os << "constant";
      break;
  }
  return os.str();
}

double dual_check(const WeightScheme& scheme, std::size_t grid_size) {
  return dual_check(scheme, grid_size, [&](double v) { return scheme.phi_prime(v); });
}

double dual_check(const WeightScheme& scheme, std::size_t grid_size,
                  const std::function<double(double)>& phi_prime) {
  require(grid_size >= 2, "dual_check: grid_size must be >= 2");
  require(scheme.family() != WeightFamily::Constant, "dual_check: constant weighting has no dual penalty");
  const double v_max = scheme.sup_weight();
  double worst = 0.0;
  for (std::size_t k = 1; k <= grid_size; ++k) {
    const double v = v_max * static_cast<double>(k) / static_cast<double>(grid_size + 1);
    worst = std::max(worst, std::abs(scheme.psi_unchecked(phi_prime(v)) - v));
  }
  return worst;
}

CalibrationReport calibration_check(const WeightScheme& scheme, std::size_t grid_size) {
  require(grid_size >= 3, "calibration_check: grid_size must be >= 3");
  constexpr double h = 1e-5;
  constexpr double margin = 1e-3;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  CalibrationReport report{true, true};
  for (std::size_t k = 0; k < grid_size; ++k) {
    const double t = margin + (1.0 - 2.0 * margin) * static_cast<double>(k) / static_cast<double>(grid_size - 1);
    const double lo = scheme.psi(t - h);
    const double mid = scheme.psi(t);
    const double hi = scheme.psi(t + h);
    const double d1 = (hi - lo) / (2.0 * h);
    const double d2 = (hi - 2.0 * mid + lo) / (h * h);
    const double noise = 8.0 * eps * std::max({std::abs(lo), std::abs(mid), std::abs(hi)}) / (h * h);
    if (!(d1 > 0.0)) report.monotone = false;
    if (!(d2 < noise)) report.concave = false;
  }
  return report;
}

}  // namespace tpauc

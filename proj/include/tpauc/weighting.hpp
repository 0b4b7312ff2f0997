#pragma once

// Calibrated weighting functions psi and their dual penalties phi, linked by
// psi = (phi')^{-1}. Two closed-form families are provided:
//
//   Poly(g): phi(v) = v^g / g,                          psi(t) = t^{1/(g-1)}
//   Exp(g):  phi(v) = ((1-v)(log(1-v) - 1) + 1) / g,    psi(t) = 1 - exp(-g t)
//
// plus a constant scheme psi == 1 under which every weighted objective
// degenerates to the plain AUC risk.

#include <cstddef>
#include <functional>
#include <string>

namespace tpauc {

enum class WeightFamily { Poly, Exp, Constant };

class WeightScheme {
 public:
  /// Poly weighting; requires gamma > 2 (strictly concave psi).
  static WeightScheme poly(double gamma);
  /// Poly for analysis only: any gamma > 1, so convex psi (1 < gamma < 2) can be studied.
  static WeightScheme poly_analysis(double gamma);
  /// Exp weighting; requires gamma > 0.
  static WeightScheme exp(double gamma);
  /// psi == 1. Has no dual penalty.
  static WeightScheme constant();

  WeightFamily family() const noexcept { return family_; }
  double gamma() const noexcept { return gamma_; }
  /// sup of psi over [0,1]: 1 for Poly and Constant, 1 - exp(-gamma) for Exp.
  double sup_weight() const noexcept;

  /// Weight for difficulty t in [0,1].
  double psi(double t) const;
  /// d psi / dt. For Poly the derivative is unbounded at 0; t is floored at 1e-12.
  double psi_prime(double t) const;
  /// Penalty; Poly: v >= 0, Exp: v in [0,1] with phi(1) = 1/gamma (continuous extension).
  double phi(double v) const;
  /// Penalty derivative; Poly: v >= 0, Exp: v in [0,1).
  double phi_prime(double v) const;

  /// Evaluates the psi formula without the [0,1] domain check.
  double psi_unchecked(double t) const noexcept;

  std::string describe() const;

  friend bool operator==(const WeightScheme&, const WeightScheme&) = default;

 private:
  WeightScheme(WeightFamily family, double gamma) : family_(family), gamma_(gamma) {}

  WeightFamily family_;
  double gamma_;
};

/// max |psi(phi'(v)) - v| over grid_size interior points v in (0, sup_weight).
double dual_check(const WeightScheme& scheme, std::size_t grid_size);

/// Same residual with a caller-supplied phi' (negative controls).
double dual_check(const WeightScheme& scheme, std::size_t grid_size,
                  const std::function<double(double)>& phi_prime);

struct CalibrationReport {
  bool monotone = false;
  bool concave = false;
};

/// Central-difference check (h = 1e-5) of psi' > 0 and psi'' < 0 on grid_size
/// points spanning [1e-3, 1 - 1e-3]. A second difference inside the rounding
/// noise floor of the stencil is not counted as a concavity violation.
CalibrationReport calibration_check(const WeightScheme& scheme, std::size_t grid_size);

}  // namespace tpauc

#pragma once

// Dimensionless coherent-state machinery.
//
// Positions are measured in the co-moving variable
//   y = x sqrt(m w / hbar) - p0 sin(theta) / sqrt(hbar m w),   theta = w t2,
// in which the unmeasured density is a unit Gaussian for every theta and
// the two post-measurement branches depend on theta alone. That is what
// makes every observable independent of m, w and p0.

#include <complex>
#include <cstddef>
#include <vector>

#include "macrorealism/quadrature.hpp"

namespace macrorealism::quantum {

enum class Sign : int { Minus = -1, Plus = 1 };

constexpr double to_double(Sign s) noexcept { return static_cast<double>(static_cast<int>(s)); }
constexpr Sign flip(Sign s) noexcept { return s == Sign::Plus ? Sign::Minus : Sign::Plus; }

/// theta = w t2. Construction rejects theta <= 0 and phases where the
/// harmonic propagator is singular (|sin theta| < kSinMin).
class Phase {
 public:
  static constexpr double kSinMin = 1e-6;

  explicit Phase(double theta);

  /// theta = 2 pi * fraction, i.e. t2 given as a fraction of the period.
  static Phase from_period_fraction(double fraction);

  double radians() const noexcept { return theta_; }
  double sin() const noexcept { return sin_; }
  double cos() const noexcept { return cos_; }

 private:
  double theta_;
  double sin_;
  double cos_;
};

/// Unmeasured density exp(-y^2)/sqrt(pi); the same at every theta.
double free_density(double y);

/// Unnormalised density of the branch that produced outcome `branch` at the
/// first measurement, whose boundary sat at eps1 (dimensionless), evolved to
/// phase theta:
///   g(y) = exp(-y^2) |1 +- erf(z)|^2 / (4 sqrt(pi)),
///   z = i(-y + eps1 e^{i theta}) / (sin theta sqrt(2 - 2i cot theta)).
/// Precomputes the theta-dependent constants; evaluation is thread-safe.
class BranchDensity {
 public:
  BranchDensity(const Phase& theta, Sign branch, double eps1 = 0.0);

  double operator()(double y) const;

  /// Centre of the diffraction edge, where the density changes character.
  double edge() const noexcept { return eps1_ * cos_; }

 private:
  Sign branch_;
  double eps1_;
  double sin_;
  double cos_;
  double cot_;
  std::complex<double> inv_denominator_;  // 1 / (sin theta sqrt(2 - 2i cot theta))
  std::complex<double> offset_;           // eps1 e^{i theta}
};

double branch_density(double y, const Phase& theta, Sign branch, double eps1 = 0.0);

/// C in g(y) ~ C / y^2 as |y| -> inf: exp(-eps1^2) |sin theta| / (2 pi^{3/2}),
/// the same for both branches and both sides.
double branch_tail_coefficient(const Phase& theta, double eps1 = 0.0);

/// Pointwise failure of the macrorealist mixture condition:
///   free(y) - [g+(y) + g-(y)],
/// zero everywhere iff the first measurement leaves the second one's
/// statistics untouched.
double mr_defect(double y, const Phase& theta);

/// Integral of a branch density over [lo, hi]; either end may be infinite.
quad::Result branch_integral(const Phase& theta, Sign branch, double eps1, double lo, double hi,
                             const quad::Options& opts = {});

/// Integral of mr_defect over [lo, hi]; either end may be infinite.
quad::Result mr_defect_integral(const Phase& theta, double lo, double hi,
                                const quad::Options& opts = {});

struct DensityProfile {
  std::vector<double> y_grid;
  std::vector<double> rho_free;
  std::vector<double> rho_plus;
  std::vector<double> rho_minus;
};

/// Tabulates the three densities on a uniform grid whose end points are
/// exactly y_min and y_max. Throws BadGrid for points < 2 or y_min >= y_max.
DensityProfile density_profile(const Phase& theta, double y_min, double y_max, std::size_t points);

}  // namespace macrorealism::quantum

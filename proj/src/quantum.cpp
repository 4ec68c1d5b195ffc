#include "macrorealism/quantum.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "macrorealism/error.hpp"
#include "macrorealism/specfun.hpp"

namespace macrorealism::quantum {

namespace {

using Complex = std::complex<double>;

const double kInvFourSqrtPi = 0.25 * std::numbers::inv_sqrtpi;

}  // namespace

Phase::Phase(double theta) : theta_(theta), sin_(std::sin(theta)), cos_(std::cos(theta)) {
  if (!std::isfinite(theta) || theta <= 0.0) {
    std::ostringstream msg;
    msg << "theta = " << theta << " must be finite and positive";
    throw Error(ErrorKind::PhaseSingular, msg.str());
  }
  if (std::abs(sin_) < kSinMin) {
    std::ostringstream msg;
    msg << "|sin(theta)| = " << std::abs(sin_) << " < " << kSinMin << " at theta = " << theta
        << " (propagator singular at multiples of pi)";
    throw Error(ErrorKind::PhaseSingular, msg.str());
  }
}

Phase Phase::from_period_fraction(double fraction) {
  return Phase(2.0 * std::numbers::pi * fraction);
}

double free_density(double y) { return std::exp(-y * y) * std::numbers::inv_sqrtpi; }

BranchDensity::BranchDensity(const Phase& theta, Sign branch, double eps1)
    : branch_(branch),
      eps1_(eps1),
      sin_(theta.sin()),
      cos_(theta.cos()),
      cot_(theta.cos() / theta.sin()),
      offset_(eps1 * theta.cos(), eps1 * theta.sin()) {
  if (!std::isfinite(eps1)) throw Error(ErrorKind::InvalidArgument, "eps1 must be finite");
  // Principal root: Re(2 - 2i cot) > 0 keeps the Gaussian integral convergent.
  const Complex root = std::sqrt(Complex(2.0, -2.0 * cot_));
  inv_denominator_ = 1.0 / (sin_ * root);
}

double BranchDensity::operator()(double y) const {
  // 1 +- erf(z) = erfc(zeta) with zeta = -+z.
  const Complex z = Complex(0.0, 1.0) * (Complex(-y, 0.0) + offset_) * inv_denominator_;
  const Complex zeta = -to_double(branch_) * z;

  // exp(-y^2/2 - zeta^2) in closed form: the y^2 terms cancel exactly,
  // leaving modulus exp(-eps1^2/2) and the propagator phase.
  if (zeta.real() >= 0.0) {
    const Complex w = specfun::faddeeva(Complex(-zeta.imag(), zeta.real()));
    return std::exp(-eps1_ * eps1_) * std::norm(w) * kInvFourSqrtPi;
  }
  const double phase = ((y * y + eps1_ * eps1_) * cos_ - 2.0 * y * eps1_) / (2.0 * sin_);
  const Complex scale = std::polar(std::exp(-0.5 * eps1_ * eps1_), phase);
  const Complex w = specfun::faddeeva(Complex(zeta.imag(), -zeta.real()));
  const Complex scaled_erfc = 2.0 * std::exp(-0.5 * y * y) - scale * w;
  return std::norm(scaled_erfc) * kInvFourSqrtPi;
}

double branch_density(double y, const Phase& theta, Sign branch, double eps1) {
  return BranchDensity(theta, branch, eps1)(y);
}

double branch_tail_coefficient(const Phase& theta, double eps1) {
  return std::exp(-eps1 * eps1) * std::abs(theta.sin()) /
         (2.0 * std::numbers::pi * std::sqrt(std::numbers::pi));
}

double mr_defect(double y, const Phase& theta) {
  const BranchDensity plus(theta, Sign::Plus);
  const BranchDensity minus(theta, Sign::Minus);
  return free_density(y) - (plus(y) + minus(y));
}

quad::Result branch_integral(const Phase& theta, Sign branch, double eps1, double lo, double hi,
                             const quad::Options& opts) {
  const BranchDensity g(theta, branch, eps1);
  const std::array<double, 2> breaks = {0.0, g.edge()};
  return quad::integrate_line([&g](double y) { return g(y); }, lo, hi, breaks, opts);
}

quad::Result mr_defect_integral(const Phase& theta, double lo, double hi,
                                const quad::Options& opts) {
  const BranchDensity plus(theta, Sign::Plus);
  const BranchDensity minus(theta, Sign::Minus);
  const std::array<double, 1> breaks = {0.0};
  return quad::integrate_line(
      [&](double y) { return free_density(y) - (plus(y) + minus(y)); }, lo, hi, breaks, opts);
}

DensityProfile density_profile(const Phase& theta, double y_min, double y_max,
                               std::size_t points) {
  if (points < 2 || !(y_min < y_max) || !std::isfinite(y_min) || !std::isfinite(y_max)) {
    std::ostringstream msg;
    msg << "need points >= 2 and finite y_min < y_max (got " << points << ", " << y_min << ", "
        << y_max << ")";
    throw Error(ErrorKind::BadGrid, msg.str());
  }
  const BranchDensity plus(theta, Sign::Plus);
  const BranchDensity minus(theta, Sign::Minus);
  DensityProfile profile;
  profile.y_grid.resize(points);
  profile.rho_free.resize(points);
  profile.rho_plus.resize(points);
  profile.rho_minus.resize(points);
  const double step = (y_max - y_min) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    const double y = i + 1 == points ? y_max : y_min + step * static_cast<double>(i);
    profile.y_grid[i] = y;
    profile.rho_free[i] = free_density(y);
    profile.rho_plus[i] = plus(y);
    profile.rho_minus[i] = minus(y);
  }
  return profile;
}

}  // namespace macrorealism::quantum

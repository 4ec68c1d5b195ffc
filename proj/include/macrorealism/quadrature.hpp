#pragma once

// Globally adaptive Gauss-Kronrod (10/21) integration on finite intervals,
// plus a compactified tail map for integrands that decay only algebraically.

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace macrorealism::quad {

using Integrand = std::function<double(double)>;

struct Options {
  double abs_tol = 1e-11;
  double rel_tol = 0.0;
  std::size_t max_intervals = 4000;
};

struct Result {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t intervals = 0;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// |y| beyond which integrals switch to the compactified variable t = Y/y.
inline constexpr double kTailStart = 8.0;

/// Integral over the finite interval [a, b]. Throws QuadratureFailure when
/// the tolerance is not met within max_intervals subdivisions.
Result integrate(const Integrand& f, double a, double b, const Options& opts = {});

/// Integral over [start, +inf) for start > 0, computed as
/// int_0^1 f(start / t) start / t^2 dt. An f ~ C/y^2 maps to a bounded,
/// smooth integrand with limit C/start at t = 0.
Result upper_tail(const Integrand& f, double start, const Options& opts = {});

/// Integral over (-inf, start] for start < 0.
Result lower_tail(const Integrand& f, double start, const Options& opts = {});

/// Integral over [lo, hi] where either end may be infinite. Finite pieces
/// are split at +-kTailStart and at every breakpoint strictly inside.
Result integrate_line(const Integrand& f, double lo, double hi,
                      std::span<const double> breakpoints = {}, const Options& opts = {});

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1], nodes ascending.
Rule gauss_legendre(std::size_t n);

/// Gauss-Legendre rule mapped to [a, b]. For a == b every node sits at a
/// and the weights sum to one, so the rule computes a point value.
Rule gauss_legendre_average(std::size_t n, double a, double b);

}  // namespace macrorealism::quad

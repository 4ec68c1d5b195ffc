#pragma once

// Error-function family on the real line and in the complex plane.
//
// Everything downstream (branch densities, marginal probabilities) is built
// on the Faddeeva function w(z) = exp(-z^2) erfc(-iz), evaluated here with
// the Poppe-Wijers scheme: a power series for small |z|, a Laplace
// continued fraction for large |z| and a shifted Taylor/continued-fraction
// hybrid in between. Relative accuracy is ~1e-14 over the closed upper half
// plane. All functions are pure and reentrant.

#include <complex>

namespace macrorealism::specfun {

using Complex = std::complex<double>;

/// |z| at or below which erf_complex sums its Maclaurin series directly.
inline constexpr double kSeriesRadius = 2.0;

double erf_real(double x);
double erfc_real(double x);

/// Imaginary error function erfi(x) = -i erf(ix). Throws Overflow when
/// exp(x^2) is not representable.
double erfi_real(double x);

/// w(z) = exp(-z^2) erfc(-iz) for Im z >= 0. Throws DomainError otherwise
/// (or for non-finite input).
Complex faddeeva(Complex z);

/// erf(z) for finite z. Throws Overflow when |exp(-z^2)| exceeds the double
/// range, so no Inf or NaN ever leaves this function.
Complex erf_complex(Complex z);

/// erfc(z) = 1 - erf(z), computed without cancellation for Re z >= 0.
Complex erfc_complex(Complex z);

// The two branches of erf_complex, exposed so the overlap band can be
// checked independently.
Complex erf_maclaurin(Complex z);
Complex erf_via_faddeeva(Complex z);

}  // namespace macrorealism::specfun

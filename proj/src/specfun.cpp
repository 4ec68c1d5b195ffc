#include "macrorealism/specfun.hpp"

#include <cmath>
#include <numbers>

#include "macrorealism/error.hpp"

namespace macrorealism::specfun {

namespace {

constexpr double kTwoOverSqrtPi = 2.0 * std::numbers::inv_sqrtpi;
// log(DBL_MAX) with a little headroom for the multiplying factor.
constexpr double kMaxExponent = 708.0;

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// exp(-z^2) with the real part of the exponent formed as (y-x)(y+x).
Complex exp_minus_square(Complex z) {
  const double x = z.real();
  const double y = z.imag();
  const double re_exponent = (y - x) * (y + x);
  if (re_exponent > kMaxExponent) {
    throw Error(ErrorKind::Overflow, "exp(-z^2) not representable");
  }
  const double magnitude = std::exp(re_exponent);
  const double phase = -2.0 * x * y;
  return {magnitude * std::cos(phase), magnitude * std::sin(phase)};
}

}  // namespace

double erf_real(double x) { return std::erf(x); }

double erfc_real(double x) { return std::erfc(x); }

double erfi_real(double x) { return erf_complex(Complex(0.0, x)).imag(); }

// Poppe & Wijers, "More efficient computation of the complex error
// function", ACM TOMS 16 (1990), restricted to the upper half plane.
Complex faddeeva(Complex z) {
  if (!finite(z)) throw Error(ErrorKind::DomainError, "faddeeva: non-finite argument");
  if (z.imag() < 0.0) throw Error(ErrorKind::DomainError, "faddeeva: Im z < 0");

  const double xabs = std::abs(z.real());
  const double yabs = z.imag();
  const double xs = xabs / 6.3;
  const double ys = yabs / 4.4;
  double qrho = xs * xs + ys * ys;
  const double xquad = (xabs - yabs) * (xabs + yabs);
  const double yquad = 2.0 * xabs * yabs;

  double u = 0.0;
  double v = 0.0;

  if (qrho < 0.085264) {
    // Power series of exp(z^2) erf(-iz) about the origin.
    qrho = (1.0 - 0.85 * ys) * std::sqrt(qrho);
    const int n = static_cast<int>(std::lround(6.0 + 72.0 * qrho));
    int j = 2 * n + 1;
    double xsum = 1.0 / j;
    double ysum = 0.0;
    for (int i = n; i >= 1; --i) {
      j -= 2;
      const double xaux = (xsum * xquad - ysum * yquad) / i;
      ysum = (xsum * yquad + ysum * xquad) / i;
      xsum = xaux + 1.0 / j;
    }
    const double u1 = -kTwoOverSqrtPi * (xsum * yabs + ysum * xabs) + 1.0;
    const double v1 = kTwoOverSqrtPi * (xsum * xabs - ysum * yabs);
    const double daux = std::exp(-xquad);
    const double u2 = daux * std::cos(yquad);
    const double v2 = -daux * std::sin(yquad);
    u = u1 * u2 - v1 * v2;
    v = u1 * v2 + v1 * u2;
  } else {
    double h = 0.0;
    int kapn = 0;
    int nu = 0;
    if (qrho > 1.0) {
      // Plain Laplace continued fraction.
      qrho = std::sqrt(qrho);
      nu = static_cast<int>(3.0 + 1442.0 / (26.0 * qrho + 77.0));
    } else {
      // Taylor expansion about z + ih, with w(z + ih) from the continued fraction.
      qrho = (1.0 - ys) * std::sqrt(1.0 - qrho);
      h = 1.88 * qrho;
      kapn = static_cast<int>(std::lround(7.0 + 34.0 * qrho));
      nu = static_cast<int>(std::lround(16.0 + 26.0 * qrho));
    }
    const double h2 = 2.0 * h;
    const bool taylor = h > 0.0;
    double qlambda = taylor ? std::pow(h2, kapn) : 0.0;

    double rx = 0.0;
    double ry = 0.0;
    double sx = 0.0;
    double sy = 0.0;
    for (int n = nu; n >= 0; --n) {
      const int np1 = n + 1;
      double tx = yabs + h + np1 * rx;
      const double ty = xabs - np1 * ry;
      const double c = 0.5 / (tx * tx + ty * ty);
      rx = c * tx;
      ry = c * ty;
      if (taylor && n <= kapn) {
        tx = qlambda + sx;
        sx = rx * tx - ry * sy;
        sy = ry * tx + rx * sy;
        qlambda /= h2;
      }
    }
    if (taylor) {
      u = kTwoOverSqrtPi * sx;
      v = kTwoOverSqrtPi * sy;
    } else {
      u = kTwoOverSqrtPi * rx;
      v = kTwoOverSqrtPi * ry;
    }
    if (yabs == 0.0) u = std::exp(-xabs * xabs);
  }

  if (z.real() < 0.0) v = -v;
  return {u, v};
}

Complex erf_maclaurin(Complex z) {
  if (z == Complex(0.0, 0.0)) return z;
  const Complex z2 = z * z;
  Complex power = z;  // (-1)^n z^(2n+1) / n!
  Complex sum = z;
  for (int n = 1; n < 200; ++n) {
    power *= -z2 / static_cast<double>(n);
    const Complex term = power / static_cast<double>(2 * n + 1);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return kTwoOverSqrtPi * sum;
}

Complex erf_via_faddeeva(Complex z) {
  if (z.real() < 0.0) return -erf_via_faddeeva(-z);
  // erfc(z) = exp(-z^2) w(iz); Im(iz) = Re z >= 0.
  return 1.0 - exp_minus_square(z) * faddeeva(Complex(-z.imag(), z.real()));
}

Complex erf_complex(Complex z) {
  if (!finite(z)) throw Error(ErrorKind::DomainError, "erf: non-finite argument");
  if (std::abs(z) <= kSeriesRadius) return erf_maclaurin(z);
  return erf_via_faddeeva(z);
}

Complex erfc_complex(Complex z) {
  if (!finite(z)) throw Error(ErrorKind::DomainError, "erfc: non-finite argument");
  if (z.real() < 0.0) return 2.0 - erfc_complex(-z);
  return exp_minus_square(z) * faddeeva(Complex(-z.imag(), z.real()));
}

}  // namespace macrorealism::specfun

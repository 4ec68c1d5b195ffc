#include "macrorealism/feasibility.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "macrorealism/error.hpp"

namespace macrorealism::feasibility {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream msg;
    msg << name << " = " << v << " must be positive and finite";
    throw Error(ErrorKind::NonPositiveInput, msg.str());
  }
}

}  // namespace

double standard_quantum_limit(double mass, double omega, double hbar) {
  require_positive(mass, "mass");
  require_positive(omega, "omega");
  require_positive(hbar, "hbar");
  return std::sqrt(hbar / (2.0 * mass * omega));
}

double force_noise_ceiling(double mass, double omega, double hbar) {
  require_positive(mass, "mass");
  require_positive(omega, "omega");
  require_positive(hbar, "hbar");
  return omega * std::sqrt(hbar * mass) * std::numbers::inv_sqrtpi;
}

double decoherence_rate(double s_ff, double delta_x, double hbar) {
  if (!(s_ff >= 0.0) || !std::isfinite(s_ff)) {
    throw Error(ErrorKind::NonPositiveInput, "s_ff must be non-negative and finite");
  }
  require_positive(delta_x, "delta_x");
  require_positive(hbar, "hbar");
  return s_ff * (delta_x / hbar) * (delta_x / hbar);
}

bool decoherence_check(double s_ff, double delta_x, double t2, double margin, double hbar) {
  require_positive(t2, "t2");
  require_positive(margin, "margin");
  return decoherence_rate(s_ff, delta_x, hbar) * t2 < margin;
}

double scatter_resolution(double wavelength, double photons) {
  require_positive(wavelength, "wavelength");
  if (!(photons >= 1.0) || !std::isfinite(photons)) {
    throw Error(ErrorKind::NonPositiveInput, "photons must be >= 1");
  }
  return wavelength / std::sqrt(photons);
}

FeasibilityReport feasibility_report(const FeasibilityInputs& in) {
  FeasibilityReport r;
  r.sql = standard_quantum_limit(in.mass, in.omega, in.hbar);
  r.offset_half_range = std::numbers::sqrt2 * r.sql;
  r.force_noise_ceiling = force_noise_ceiling(in.mass, in.omega, in.hbar);
  r.margin = in.margin;
  if (in.wavelength || in.photons) {
    if (!in.wavelength || !in.photons) {
      throw Error(ErrorKind::InvalidArgument, "wavelength and photons must be given together");
    }
    r.scatter_resolution = scatter_resolution(*in.wavelength, *in.photons);
  }
  if (in.s_ff) {
    const double t2 = in.t2.value_or(2.0 * std::numbers::pi / in.omega);
    r.decoherence_rate = decoherence_rate(*in.s_ff, r.sql, in.hbar);
    r.decoherence_ok = decoherence_check(*in.s_ff, r.sql, t2, in.margin, in.hbar);
  }
  return r;
}

}  // namespace macrorealism::feasibility

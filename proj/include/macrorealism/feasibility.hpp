#pragma once

// Order-of-magnitude requirements on an experiment, all in SI units.

#include <optional>

#include "macrorealism/witness.hpp"

namespace macrorealism::feasibility {

inline constexpr double kDefaultDecoherenceMargin = 0.1;

/// sqrt(hbar / (2 m w)), the ground-state position spread.
double standard_quantum_limit(double mass, double omega, double hbar = witness::kHbar);

/// w sqrt(hbar m) / sqrt(pi): force noise sqrt(S_FF) must sit well below
/// this for t2 ~ T.
double force_noise_ceiling(double mass, double omega, double hbar = witness::kHbar);

/// S_FF dx^2 / hbar^2, the force-noise decoherence rate.
double decoherence_rate(double s_ff, double delta_x, double hbar = witness::kHbar);

/// True iff decoherence_rate < margin / t2. s_ff may be zero.
bool decoherence_check(double s_ff, double delta_x, double t2,
                       double margin = kDefaultDecoherenceMargin, double hbar = witness::kHbar);

/// lambda / sqrt(n) for n scattered photons.
double scatter_resolution(double wavelength, double photons);

struct FeasibilityInputs {
  double mass = 0.0;
  double omega = 0.0;
  std::optional<double> wavelength;
  std::optional<double> photons;
  std::optional<double> s_ff;  // N^2/Hz
  std::optional<double> t2;    // defaults to one period when s_ff is given
  double margin = kDefaultDecoherenceMargin;
  double hbar = witness::kHbar;
};

struct FeasibilityReport {
  double sql = 0.0;
  double offset_half_range = 0.0;  // sqrt(2) sql
  double force_noise_ceiling = 0.0;
  std::optional<double> scatter_resolution;
  std::optional<double> decoherence_rate;
  std::optional<bool> decoherence_ok;  // at delta_x = sql
  double margin = kDefaultDecoherenceMargin;
};

FeasibilityReport feasibility_report(const FeasibilityInputs& in);

}  // namespace macrorealism::feasibility

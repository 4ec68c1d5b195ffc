#pragma once

// Observable probabilities for the two-measurement protocol and the two
// macrorealism witnesses built from them:
//
//   NSIT   N(r) = p(R=r) - [p(Q+, R=r) + p(Q-, R=r)]           (zero under MR)
//   LGI    L(s1, s2) = 1 + s1<Q> + s2<R> + s1 s2 <QR>  >= 0     (under MR)
//
// Q is the sign of the position at t1 = 0 relative to the boundary eps1,
// R the sign at t2 relative to gamma + eps2, both in co-moving units.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "macrorealism/quadrature.hpp"
#include "macrorealism/quantum.hpp"

namespace macrorealism::witness {

using quantum::Phase;
using quantum::Sign;

/// Slot of a sign in the 2-element arrays below: Plus -> 0, Minus -> 1.
constexpr std::size_t index(Sign s) noexcept { return s == Sign::Plus ? 0 : 1; }
inline constexpr std::array<Sign, 2> kSigns = {Sign::Plus, Sign::Minus};

inline constexpr double kHbar = 1.054571817e-34;  // J s

struct OscillatorParams {
  double mass = 0.0;   // kg
  double omega = 0.0;  // rad/s
  double p0 = 0.0;     // kg m/s
  double hbar = kHbar;

  /// Throws NonPositiveInput unless mass, omega and hbar are positive and finite.
  void validate() const;
};

/// Boundary imprecisions in units of sqrt(hbar / (m w)).
struct OffsetPair {
  double eps1 = 0.0;
  double eps2 = 0.0;
};

using SignMatrix = std::array<std::array<double, 2>, 2>;

struct ProbabilityTable {
  std::array<double, 2> pQ{};  // first measurement
  std::array<double, 2> pR{};  // second measurement, no first measurement made
  SignMatrix joint{};          // joint[index(q)][index(r)]
  double quadrature_error = 0.0;

  double q(Sign s) const { return pQ[index(s)]; }
  double r(Sign s) const { return pR[index(s)]; }
  double j(Sign q, Sign r) const { return joint[index(q)][index(r)]; }
};

struct NsitValues {
  double plus = 0.0;
  double minus = 0.0;
};

struct LgiValues {
  SignMatrix L{};  // L[index(s1)][index(s2)]
  double q_mean = 0.0;
  double r_mean = 0.0;
  double qr_correlation = 0.0;
  double violation = 0.0;  // max over signs of -L; <= 0 means no violation
};

struct WitnessReport {
  // Inputs, echoed for provenance.
  double theta = 0.0;
  double gamma = 0.0;
  OffsetPair offsets;
  std::optional<double> c;
  std::optional<Sign> sign;

  ProbabilityTable table;
  double n_plus = 0.0;
  double n_minus = 0.0;
  LgiValues lgi;
  double nsit_violation = 0.0;  // |N+|
  double lgi_violation = 0.0;   // max(-L)

  bool lgi_violated() const { return lgi_violation > 0.0; }
};

/// Second boundary placed c standard deviations from the moving peak:
/// gamma = sign c / sqrt(2). Throws NegativeC for c < 0.
double gamma_from_offset(double c, Sign sign);

/// beta2 sqrt(m w / hbar) - p0 sin(w t2) / sqrt(hbar m w).
double gamma_from_dimensional(const OscillatorParams& params, double beta2, double t2);

/// Lab-frame boundary x0(t2) + sign c sqrt(hbar / (2 m w)).
double beta2_from_offset(const OscillatorParams& params, double t2, double c, Sign sign);

/// sqrt(m w / hbar): multiply a length by this to get co-moving units.
double inverse_length_scale(const OscillatorParams& params);

/// Full statistics at (theta, gamma) with boundary offsets. Each joint entry
/// is an improper integral of a branch density to opts.abs_tol, including
/// its algebraic tails.
ProbabilityTable probability_table(const Phase& theta, double gamma, double eps1 = 0.0,
                                   double eps2 = 0.0, const quad::Options& opts = {});

NsitValues nsit(const ProbabilityTable& table);

/// <R> uses the no-prior-measurement marginal pR, not the joint row sums.
LgiValues lgi(const ProbabilityTable& table);

WitnessReport evaluate_witness(const Phase& theta, double gamma, OffsetPair offsets = {},
                               const quad::Options& opts = {});

WitnessReport witness_report(const Phase& theta, double c, Sign sign, OffsetPair offsets = {},
                             const quad::Options& opts = {});

struct DimensionlessInputs {
  double theta = 0.0;
  double gamma = 0.0;
  OffsetPair offsets;
};

DimensionlessInputs to_dimensionless(const OscillatorParams& params, double t2, double beta2,
                                     double eps1, double eps2);

/// SI entry point: converts to (theta, gamma, eps~) and delegates to
/// evaluate_witness, so equal converted inputs give identical reports.
WitnessReport witness_dimensional(const OscillatorParams& params, double t2, double beta2,
                                  double eps1 = 0.0, double eps2 = 0.0,
                                  const quad::Options& opts = {});

struct Table1Row {
  std::string label;  // t2 / T as a fraction, e.g. "3/8"
  double fraction = 0.0;
  WitnessReport report;
};

/// Reference second-measurement times, as fractions of the period.
struct PeriodFraction {
  const char* label;
  int numerator;
  int denominator;
  double value() const { return static_cast<double>(numerator) / denominator; }
};
inline constexpr std::array<PeriodFraction, 7> kTable1Fractions = {{
    {"1/14", 1, 14},
    {"1/8", 1, 8},
    {"1/4", 1, 4},
    {"1/3", 1, 3},
    {"3/8", 3, 8},
    {"2/5", 2, 5},
    {"3/4", 3, 4},
}};

/// The seven reference rows at c = sqrt(2), sign +, zero offsets.
std::vector<Table1Row> table1(const quad::Options& opts = {});

}  // namespace macrorealism::witness

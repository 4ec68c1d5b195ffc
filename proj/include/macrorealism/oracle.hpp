#pragma once

// Brute-force check of the analytic probabilities: the harmonic oscillator
// is stepped on a uniform grid in the rest frame x~ = x sqrt(m w / hbar)
// with a split-operator FFT scheme, the first measurement is a hard cut of
// the wavefunction, and probabilities are read off the evolved density.
// Nothing here uses the closed-form branch densities.

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "macrorealism/quantum.hpp"
#include "macrorealism/witness.hpp"

namespace macrorealism::oracle {

using quantum::Phase;
using quantum::Sign;

struct SolverConfig {
  /// Balanced grid for the default point count: half-width sqrt(pi N / 2)
  /// makes the position and momentum windows equal.
  static constexpr std::size_t kDefaultPoints = 16384;

  double y_half_width = 160.42420957638402;
  std::size_t points = kDefaultPoints;
  std::size_t steps_per_radian = 200;
  /// Fine-grid factor used to band-limit the cut initial state.
  std::size_t oversample = 64;
  /// Initial momentum kick p0 / sqrt(hbar m w).
  double momentum = 0.0;

  /// Throws BadConfig unless points is even and >= 16, half-width > 10,
  /// steps_per_radian >= 1, oversample >= 1 and |momentum| fits the
  /// momentum window with room for the wavepacket.
  void validate() const;

  double dy() const noexcept { return 2.0 * y_half_width / static_cast<double>(points); }
  /// Largest representable wavenumber, pi / dy.
  double k_max() const noexcept;

  /// Same config with the half-width that balances `points`.
  static SolverConfig balanced(std::size_t points);
};

/// Rest-frame wavefunction on cell centres (j - N/2 + 1/2) dy, so 0 is a
/// cell edge. `elapsed` is the phase w t evolved so far.
struct GridState {
  std::vector<double> y_grid;
  std::vector<std::complex<double>> amplitude;
  double dy = 0.0;
  double elapsed = 0.0;

  double norm() const;
  double mean_position() const;
  double variance() const;
  std::vector<double> density() const;
};

/// pi^{-1/4} exp(-y^2/2 + i p y) sampled on the grid and normalised.
GridState init_coherent(const SolverConfig& config);

/// The cut coherent state, restricted to the `side` of `boundary_y`, as it
/// would be represented by a band-limited function on the grid: the cut is
/// made on a grid `oversample` times finer and only the grid's own Fourier
/// modes are kept. Returns the renormalised state and the probability of
/// the outcome, itself integrated on the fine grid.
std::pair<GridState, double> init_projected(const SolverConfig& config, double boundary_y,
                                            Sign side);

/// Strang splitting V/2, T, V/2 with the exact kinetic propagator in
/// Fourier space. Throws NormDrift if the norm moves by more than 1e-6.
GridState evolve(GridState state, double theta_span, const SolverConfig& config);

/// Hard projection: keeps the cells whose centres lie on `side` of
/// `boundary_y` (a centre exactly on the boundary counts as Plus). Returns
/// the renormalised state and the captured probability; a zero-probability
/// outcome returns the zero state. Throws BoundaryOutsideGrid if the
/// boundary lies beyond the grid edges.
std::pair<GridState, double> project(const GridState& state, double boundary_y, Sign side);

/// Probability table for boundaries at eps1 (t = 0) and gamma + eps2 at
/// phase theta, in the same layout as the analytic path. Joint entries are
/// the evolved branch densities integrated on the grid plus a fitted
/// C/y^2 + D/y^4 tail beyond the trusted window.
witness::ProbabilityTable oracle_probability_table(const Phase& theta, double gamma,
                                                   const SolverConfig& config = {},
                                                   witness::OffsetPair offsets = {});

}  // namespace macrorealism::oracle

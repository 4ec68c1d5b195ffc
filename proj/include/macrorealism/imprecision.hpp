#pragma once

// Witnesses under imprecise measurement boundaries. Offsets are given in
// co-moving units, where the admissible range is the same for every mass
// and frequency.

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include "macrorealism/witness.hpp"

namespace macrorealism::imprecision {

using quantum::Phase;
using quantum::Sign;
using witness::OffsetPair;
using witness::WitnessReport;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const noexcept { return hi - lo; }
  bool degenerate() const noexcept { return lo == hi; }
};

/// Full witness at gamma = sign c / sqrt(2) with both boundaries displaced.
WitnessReport offset_witness(const Phase& theta, OffsetPair offsets, double c, Sign sign,
                             const quad::Options& opts = {});

/// Row-major n x n matrix; element (i, j) belongs to eps1_axis[i], eps2_axis[j].
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  double operator()(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
  double& operator()(std::size_t i, std::size_t j) { return values[i * cols + j]; }
};

struct HeatmapResult {
  std::vector<double> eps1_axis;
  std::vector<double> eps2_axis;
  Matrix n_plus;
  Matrix n_minus;
  Matrix lgi_violation;
};

/// Witness on an n x n uniform grid spanning both ranges, end points
/// included. Throws BadGrid for n < 2.
HeatmapResult heatmap(const Phase& theta, Interval eps1_range, Interval eps2_range,
                      std::size_t n, double c, Sign sign, const quad::Options& opts = {});

/// Tensor Gauss-Legendre rule with n nodes per axis.
struct QuadratureScheme {
  std::size_t n = 21;
};

/// n offset pairs drawn uniformly from the rectangle by a seeded mt19937_64.
struct SampledScheme {
  std::size_t n = 1000;
  std::uint64_t seed = 1;
};

using AveragingScheme = std::variant<QuadratureScheme, SampledScheme>;

/// Averages the probability table over offsets distributed uniformly on
/// eps1_range x eps2_range and derives both witnesses from the average.
/// The witnesses are linear in the table, so N and L are the averages of
/// the pointwise values. The reported offsets are the rectangle centre.
WitnessReport averaged_witness(const Phase& theta, Interval eps1_range, Interval eps2_range,
                               double c, Sign sign, const AveragingScheme& scheme = QuadratureScheme{},
                               const quad::Options& opts = {});

/// sqrt(hbar / (m w)): the SI half-width that maps to eps~ in [-1, 1].
double dimensional_offset_range(const witness::OscillatorParams& params);

}  // namespace macrorealism::imprecision

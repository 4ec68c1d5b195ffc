#include "macrorealism/imprecision.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "macrorealism/error.hpp"
#include "macrorealism/parallel.hpp"

namespace macrorealism::imprecision {

namespace {

using witness::ProbabilityTable;

void require_finite(Interval r, const char* name) {
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi) {
    std::ostringstream msg;
    msg << name << " = [" << r.lo << ", " << r.hi << "] must be finite with lo <= hi";
    throw Error(ErrorKind::InvalidArgument, msg.str());
  }
}

std::vector<double> uniform_axis(Interval r, std::size_t n) {
  std::vector<double> axis(n);
  const double step = r.width() / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    axis[i] = i + 1 == n ? r.hi : r.lo + step * static_cast<double>(i);
  }
  return axis;
}

/// Probability tables for every offset pair, evaluated concurrently.
std::vector<ProbabilityTable> tables_at(const Phase& theta, double gamma,
                                        const std::vector<OffsetPair>& points,
                                        const quad::Options& opts) {
  std::vector<ProbabilityTable> tables(points.size());
  parallel_for(points.size(), [&](std::size_t k) {
    tables[k] = witness::probability_table(theta, gamma, points[k].eps1, points[k].eps2, opts);
  });
  return tables;
}

void accumulate(ProbabilityTable& sum, const ProbabilityTable& t, double weight) {
  for (std::size_t a = 0; a < 2; ++a) {
    sum.pQ[a] += weight * t.pQ[a];
    sum.pR[a] += weight * t.pR[a];
    for (std::size_t b = 0; b < 2; ++b) sum.joint[a][b] += weight * t.joint[a][b];
  }
  sum.quadrature_error += weight * t.quadrature_error;
}

WitnessReport report_from(const Phase& theta, double c, Sign sign, OffsetPair centre,
                          const ProbabilityTable& table) {
  WitnessReport r;
  r.theta = theta.radians();
  r.gamma = witness::gamma_from_offset(c, sign);
  r.offsets = centre;
  r.c = c;
  r.sign = sign;
  r.table = table;
  const auto n = witness::nsit(table);
  r.n_plus = n.plus;
  r.n_minus = n.minus;
  r.nsit_violation = std::abs(n.plus);
  r.lgi = witness::lgi(table);
  r.lgi_violation = r.lgi.violation;
  return r;
}

/// Nodes and weights for the uniform average over r; a degenerate range
/// collapses to its single point with weight 1.
quad::Rule average_rule(Interval r, std::size_t n) {
  if (r.degenerate()) return {{r.lo}, {1.0}};
  return quad::gauss_legendre_average(n, r.lo, r.hi);
}

}  // namespace

WitnessReport offset_witness(const Phase& theta, OffsetPair offsets, double c, Sign sign,
                             const quad::Options& opts) {
  return witness::witness_report(theta, c, sign, offsets, opts);
}

HeatmapResult heatmap(const Phase& theta, Interval eps1_range, Interval eps2_range,
                      std::size_t n, double c, Sign sign, const quad::Options& opts) {
  if (n < 2) throw Error(ErrorKind::BadGrid, "heatmap needs n >= 2");
  require_finite(eps1_range, "eps1_range");
  require_finite(eps2_range, "eps2_range");
  const double gamma = witness::gamma_from_offset(c, sign);

  HeatmapResult h;
  h.eps1_axis = uniform_axis(eps1_range, n);
  h.eps2_axis = uniform_axis(eps2_range, n);
  std::vector<OffsetPair> points;
  points.reserve(n * n);
  for (double e1 : h.eps1_axis) {
    for (double e2 : h.eps2_axis) points.push_back({e1, e2});
  }
  const auto tables = tables_at(theta, gamma, points, opts);

  h.n_plus = {n, n, std::vector<double>(n * n)};
  h.n_minus = h.n_plus;
  h.lgi_violation = h.n_plus;
  for (std::size_t k = 0; k < tables.size(); ++k) {
    const auto nv = witness::nsit(tables[k]);
    h.n_plus.values[k] = nv.plus;
    h.n_minus.values[k] = nv.minus;
    h.lgi_violation.values[k] = witness::lgi(tables[k]).violation;
  }
  return h;
}

WitnessReport averaged_witness(const Phase& theta, Interval eps1_range, Interval eps2_range,
                               double c, Sign sign, const AveragingScheme& scheme,
                               const quad::Options& opts) {
  require_finite(eps1_range, "eps1_range");
  require_finite(eps2_range, "eps2_range");
  const double gamma = witness::gamma_from_offset(c, sign);

  std::vector<OffsetPair> points;
  std::vector<double> weights;
  if (const auto* q = std::get_if<QuadratureScheme>(&scheme)) {
    if (q->n < 1) throw Error(ErrorKind::InvalidArgument, "quadrature order must be >= 1");
    const quad::Rule r1 = average_rule(eps1_range, q->n);
    const quad::Rule r2 = average_rule(eps2_range, q->n);
    for (std::size_t i = 0; i < r1.nodes.size(); ++i) {
      for (std::size_t j = 0; j < r2.nodes.size(); ++j) {
        points.push_back({r1.nodes[i], r2.nodes[j]});
        weights.push_back(r1.weights[i] * r2.weights[j]);
      }
    }
  } else {
    const auto& s = std::get<SampledScheme>(scheme);
    if (s.n < 1) throw Error(ErrorKind::InvalidArgument, "sample count must be >= 1");
    std::mt19937_64 rng(s.seed);
    // 53 high bits -> [0, 1): identical on every platform, unlike the
    // standard distributions.
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (std::size_t k = 0; k < s.n; ++k) {
      const double e1 = eps1_range.lo + eps1_range.width() * unit();
      const double e2 = eps2_range.lo + eps2_range.width() * unit();
      points.push_back({e1, e2});
      weights.push_back(1.0 / static_cast<double>(s.n));
    }
  }

  const auto tables = tables_at(theta, gamma, points, opts);
  ProbabilityTable mean;
  for (std::size_t k = 0; k < tables.size(); ++k) accumulate(mean, tables[k], weights[k]);
  const OffsetPair centre{0.5 * (eps1_range.lo + eps1_range.hi),
                          0.5 * (eps2_range.lo + eps2_range.hi)};
  return report_from(theta, c, sign, centre, mean);
}

double dimensional_offset_range(const witness::OscillatorParams& params) {
  params.validate();
  return std::sqrt(params.hbar / (params.mass * params.omega));
}

}  // namespace macrorealism::imprecision

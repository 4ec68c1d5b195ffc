#include "macrorealism/witness.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "macrorealism/error.hpp"
#include "macrorealism/parallel.hpp"

namespace macrorealism::witness {

void OscillatorParams::validate() const {
  auto check = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      std::ostringstream msg;
      msg << name << " = " << v << " must be positive and finite";
      throw Error(ErrorKind::NonPositiveInput, msg.str());
    }
  };
  check(mass, "mass");
  check(omega, "omega");
  check(hbar, "hbar");
  if (!std::isfinite(p0)) throw Error(ErrorKind::InvalidArgument, "p0 must be finite");
}

double gamma_from_offset(double c, Sign sign) {
  if (!(c >= 0.0) || !std::isfinite(c)) {
    std::ostringstream msg;
    msg << "c = " << c << " must be finite and non-negative";
    throw Error(ErrorKind::NegativeC, msg.str());
  }
  return quantum::to_double(sign) * c / std::numbers::sqrt2;
}

double inverse_length_scale(const OscillatorParams& params) {
  params.validate();
  return std::sqrt(params.mass * params.omega / params.hbar);
}

double gamma_from_dimensional(const OscillatorParams& params, double beta2, double t2) {
  params.validate();
  // (beta2 m w - p0 sin) / sqrt(hbar m w), formed in extended precision; the
  // two terms nearly cancel when the peak sits far from the origin.
  using Wide = long double;
  const Wide m = params.mass;
  const Wide w = params.omega;
  const Wide s = std::sin(static_cast<Wide>(params.omega * t2));
  const Wide numerator = static_cast<Wide>(beta2) * m * w - static_cast<Wide>(params.p0) * s;
  return static_cast<double>(numerator / std::sqrt(static_cast<Wide>(params.hbar) * m * w));
}

double beta2_from_offset(const OscillatorParams& params, double t2, double c, Sign sign) {
  params.validate();
  if (!(c >= 0.0)) throw Error(ErrorKind::NegativeC, "c must be non-negative");
  using Wide = long double;
  const Wide m = params.mass;
  const Wide w = params.omega;
  const Wide peak =
      static_cast<Wide>(params.p0) * std::sin(static_cast<Wide>(params.omega * t2)) / (m * w);
  const Wide spread = std::sqrt(static_cast<Wide>(params.hbar) / (2.0L * m * w));
  return static_cast<double>(peak + quantum::to_double(sign) * c * spread);
}

ProbabilityTable probability_table(const Phase& theta, double gamma, double eps1, double eps2,
                                   const quad::Options& opts) {
  if (!std::isfinite(gamma) || !std::isfinite(eps1) || !std::isfinite(eps2)) {
    throw Error(ErrorKind::InvalidArgument, "gamma and offsets must be finite");
  }
  const double split = gamma + eps2;
  ProbabilityTable t;
  t.pQ[index(Sign::Plus)] = 0.5 * std::erfc(eps1);
  t.pQ[index(Sign::Minus)] = 0.5 * std::erfc(-eps1);
  t.pR[index(Sign::Plus)] = 0.5 * std::erfc(split);
  t.pR[index(Sign::Minus)] = 0.5 * std::erfc(-split);
  for (Sign q : kSigns) {
    const auto below = quantum::branch_integral(theta, q, eps1, -quad::kInfinity, split, opts);
    const auto above = quantum::branch_integral(theta, q, eps1, split, quad::kInfinity, opts);
    t.joint[index(q)][index(Sign::Minus)] = below.value;
    t.joint[index(q)][index(Sign::Plus)] = above.value;
    t.quadrature_error += below.abs_error + above.abs_error;
  }
  return t;
}

NsitValues nsit(const ProbabilityTable& t) {
  NsitValues n;
  n.plus = t.r(Sign::Plus) - (t.j(Sign::Plus, Sign::Plus) + t.j(Sign::Minus, Sign::Plus));
  n.minus = t.r(Sign::Minus) - (t.j(Sign::Plus, Sign::Minus) + t.j(Sign::Minus, Sign::Minus));
  return n;
}

LgiValues lgi(const ProbabilityTable& t) {
  LgiValues v;
  v.q_mean = t.q(Sign::Plus) - t.q(Sign::Minus);
  v.r_mean = t.r(Sign::Plus) - t.r(Sign::Minus);
  v.qr_correlation = t.j(Sign::Plus, Sign::Plus) - t.j(Sign::Plus, Sign::Minus) -
                     t.j(Sign::Minus, Sign::Plus) + t.j(Sign::Minus, Sign::Minus);
  v.violation = -quad::kInfinity;
  for (Sign s1 : kSigns) {
    for (Sign s2 : kSigns) {
      const double a = quantum::to_double(s1);
      const double b = quantum::to_double(s2);
      const double value = 1.0 + a * v.q_mean + b * v.r_mean + a * b * v.qr_correlation;
      v.L[index(s1)][index(s2)] = value;
      v.violation = std::max(v.violation, -value);
    }
  }
  return v;
}

WitnessReport evaluate_witness(const Phase& theta, double gamma, OffsetPair offsets,
                               const quad::Options& opts) {
  WitnessReport r;
  r.theta = theta.radians();
  r.gamma = gamma;
  r.offsets = offsets;
  r.table = probability_table(theta, gamma, offsets.eps1, offsets.eps2, opts);
  const NsitValues n = nsit(r.table);
  r.n_plus = n.plus;
  r.n_minus = n.minus;
  r.nsit_violation = std::abs(n.plus);
  r.lgi = lgi(r.table);
  r.lgi_violation = r.lgi.violation;
  return r;
}

WitnessReport witness_report(const Phase& theta, double c, Sign sign, OffsetPair offsets,
                             const quad::Options& opts) {
  WitnessReport r = evaluate_witness(theta, gamma_from_offset(c, sign), offsets, opts);
  r.c = c;
  r.sign = sign;
  return r;
}

DimensionlessInputs to_dimensionless(const OscillatorParams& params, double t2, double beta2,
                                     double eps1, double eps2) {
  params.validate();
  if (!std::isfinite(t2) || !std::isfinite(beta2)) {
    throw Error(ErrorKind::InvalidArgument, "t2 and beta2 must be finite");
  }
  const double scale = inverse_length_scale(params);
  DimensionlessInputs in;
  in.theta = params.omega * t2;
  in.gamma = gamma_from_dimensional(params, beta2, t2);
  in.offsets = {eps1 * scale, eps2 * scale};
  return in;
}

WitnessReport witness_dimensional(const OscillatorParams& params, double t2, double beta2,
                                  double eps1, double eps2, const quad::Options& opts) {
  const DimensionlessInputs in = to_dimensionless(params, t2, beta2, eps1, eps2);
  return evaluate_witness(Phase(in.theta), in.gamma, in.offsets, opts);
}

std::vector<Table1Row> table1(const quad::Options& opts) {
  std::vector<Table1Row> rows(kTable1Fractions.size());
  parallel_for(rows.size(), [&](std::size_t i) {
    const PeriodFraction& f = kTable1Fractions[i];
    rows[i].label = f.label;
    rows[i].fraction = f.value();
    rows[i].report = witness_report(Phase::from_period_fraction(f.value()), std::numbers::sqrt2,
                                    Sign::Plus, {}, opts);
  });
  return rows;
}

}  // namespace macrorealism::witness

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

#include "macrorealism/error.hpp"
#include "macrorealism/witness.hpp"

using namespace macrorealism;
using quantum::Phase;
using quantum::Sign;
using witness::OffsetPair;

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);

struct Expected {
  const char* label;
  double n_plus;
  double lgi;
};

// Frozen regression values at c = sqrt(2), sign +, zero offsets.
constexpr Expected kReference[] = {
    {"1/14", -0.119513561, 0.0838026258}, {"1/8", -0.153061803, 0.042313993},
    {"1/4", -0.169569234, -0.157299207},  {"1/3", -0.163351991, -0.018031124},
    {"3/8", -0.153061803, 0.042313993},   {"2/5", -0.141918602, 0.070023639},
    {"3/4", -0.169569234, -0.157299207},
};

double max_abs_diff(const witness::ProbabilityTable& a, const witness::ProbabilityTable& b) {
  double d = 0.0;
  for (int i = 0; i < 2; ++i) {
    d = std::max({d, std::abs(a.pQ[i] - b.pQ[i]), std::abs(a.pR[i] - b.pR[i])});
    for (int j = 0; j < 2; ++j) d = std::max(d, std::abs(a.joint[i][j] - b.joint[i][j]));
  }
  return d;
}

}  // namespace

TEST_CASE("reference rows") {
  const auto rows = witness::table1();
  REQUIRE(rows.size() == 7);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CAPTURE(rows[i].label);
    CHECK(rows[i].label == std::string(kReference[i].label));
    CHECK(rows[i].report.n_plus == doctest::Approx(kReference[i].n_plus).epsilon(1e-8));
    CHECK(rows[i].report.lgi_violation == doctest::Approx(kReference[i].lgi).epsilon(1e-8));
    CHECK(rows[i].report.nsit_violation == std::abs(rows[i].report.n_plus));
    CHECK(rows[i].report.lgi_violated() == (kReference[i].lgi > 0.0));
    CHECK(rows[i].report.gamma == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("marginals are complementary error functions") {
  const auto t = witness::probability_table(Phase(kPi / 3), 1.0);
  CHECK(t.r(Sign::Plus) == doctest::Approx(0.0786496035).epsilon(1e-10));
  CHECK(t.r(Sign::Minus) == doctest::Approx(0.9213503965).epsilon(1e-10));
  CHECK(t.q(Sign::Plus) == 0.5);
  const auto shifted = witness::probability_table(Phase(kPi / 3), 0.0, 1.0, 0.0);
  CHECK(shifted.q(Sign::Minus) == doctest::Approx(0.9213503965).epsilon(1e-10));
}

TEST_CASE("table invariants over random inputs") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ut(0.05, 2 * kPi - 0.05), ug(-2.5, 2.5), ue(-1.5, 1.5);
  for (int n = 0; n < 60; ++n) {
    const double theta = ut(rng);
    if (std::abs(std::sin(theta)) < 0.05) continue;
    const double gamma = ug(rng), e1 = ue(rng), e2 = ue(rng);
    const auto t = witness::probability_table(Phase(theta), gamma, e1, e2);
    CAPTURE(theta);
    CAPTURE(gamma);
    CHECK(t.pQ[0] + t.pQ[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(t.pR[0] + t.pR[1] == doctest::Approx(1.0).epsilon(1e-15));
    double total = 0.0;
    for (Sign q : witness::kSigns) {
      CHECK(t.j(q, Sign::Plus) + t.j(q, Sign::Minus) ==
            doctest::Approx(t.q(q)).epsilon(1e-9));
      for (Sign r : witness::kSigns) {
        CHECK(t.j(q, r) >= -1e-12);
        CHECK(t.j(q, r) <= 1.0 + 1e-12);
        total += t.j(q, r);
      }
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    const auto n_vals = witness::nsit(t);
    CHECK(std::abs(n_vals.plus + n_vals.minus) <= 1e-9);
    const auto l = witness::lgi(t);
    double worst = -INFINITY;
    for (auto& row : l.L) {
      for (double v : row) worst = std::max(worst, -v);
    }
    CHECK(l.violation == worst);
    CHECK(std::abs(l.q_mean) <= 1.0);
    CHECK(std::abs(l.qr_correlation) <= 1.0 + 1e-12);
  }
}

TEST_CASE("quarter period has no Q-R correlation") {
  for (double gamma : {-1.0, 0.0, 0.4, 1.0}) {
    const auto t = witness::probability_table(Phase(kPi / 2), gamma);
    CHECK(std::abs(witness::lgi(t).qr_correlation) <= 1e-10);
  }
}

TEST_CASE("reflection theta -> pi - theta leaves both witnesses unchanged") {
  for (double theta : {kPi / 7, kPi / 4, 2 * kPi / 5}) {
    for (double gamma : {-0.7, 0.0, 1.0}) {
      const auto a = witness::evaluate_witness(Phase(theta), gamma);
      const auto b = witness::evaluate_witness(Phase(kPi - theta), gamma);
      CHECK(std::abs(a.n_plus - b.n_plus) <= 1e-7);
      CHECK(std::abs(a.n_minus - b.n_minus) <= 1e-7);
      CHECK(std::abs(a.lgi_violation - b.lgi_violation) <= 1e-7);
      CHECK(std::abs(a.lgi.qr_correlation + b.lgi.qr_correlation) <= 1e-7);
    }
  }
}

TEST_CASE("NSIT equals the integrated defect beyond the second boundary") {
  for (double theta : {0.5, kPi / 4, 2.0, 4.0}) {
    for (double gamma : {-1.0, 0.3, 1.0}) {
      const auto n = witness::nsit(witness::probability_table(Phase(theta), gamma));
      const auto d = quantum::mr_defect_integral(Phase(theta), gamma, quad::kInfinity);
      CHECK(n.plus == doctest::Approx(d.value).epsilon(1e-7));
    }
  }
}

TEST_CASE("boundary from offset") {
  CHECK(witness::gamma_from_offset(kSqrt2, Sign::Plus) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(witness::gamma_from_offset(kSqrt2, Sign::Minus) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(witness::gamma_from_offset(0.0, Sign::Minus) == 0.0);
  try {
    witness::gamma_from_offset(-0.1, Sign::Plus);
    FAIL("expected NegativeC");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NegativeC);
  }
}

TEST_CASE("dimensional conversion") {
  const witness::OscillatorParams p{1e-14, 1.0, 1e-21};
  const double t2 = 1.3;
  const double beta_peak = witness::beta2_from_offset(p, t2, 0.0, Sign::Plus);
  CHECK(std::abs(witness::gamma_from_dimensional(p, beta_peak, t2)) <= 1e-9);
  const double beta_caption = witness::beta2_from_offset(p, t2, kSqrt2, Sign::Plus);
  CHECK(witness::gamma_from_dimensional(p, beta_caption, t2) == doctest::Approx(1.0).epsilon(1e-8));
  const witness::OscillatorParams rest{1e-14, 1.0, 0.0};
  CHECK(witness::gamma_from_dimensional(rest, 1e-10, 1.0) == doctest::Approx(0.973782).epsilon(1e-6));
  CHECK(witness::inverse_length_scale(rest) ==
        doctest::Approx(std::sqrt(1e-14 / witness::kHbar)).epsilon(1e-15));

  // An SI offset of one length unit is a co-moving offset of one.
  const double unit = 1.0 / witness::inverse_length_scale(rest);
  const auto in = witness::to_dimensionless(rest, 0.7, 0.0, unit, -unit);
  CHECK(in.offsets.eps1 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(in.offsets.eps2 == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(in.theta == 0.7);

  for (auto bad : {witness::OscillatorParams{0.0, 1.0}, witness::OscillatorParams{1.0, -1.0},
                   witness::OscillatorParams{1.0, 1.0, 0.0, 0.0},
                   witness::OscillatorParams{NAN, 1.0}}) {
    try {
      bad.validate();
      FAIL("expected NonPositiveInput");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NonPositiveInput);
    }
  }
}

TEST_CASE("SI entry point delegates to the dimensionless path") {
  const witness::OscillatorParams p{2e-13, 30.0, -1e-21};
  const double t2 = 0.05;
  const double beta = witness::beta2_from_offset(p, t2, 0.8, Sign::Minus);
  const double e1 = 3e-12, e2 = -1e-12;
  const auto si = witness::witness_dimensional(p, t2, beta, e1, e2);
  const auto in = witness::to_dimensionless(p, t2, beta, e1, e2);
  const auto direct = witness::evaluate_witness(Phase(in.theta), in.gamma, in.offsets);
  CHECK(std::memcmp(&si.table, &direct.table, sizeof si.table) == 0);
  CHECK(si.n_plus == direct.n_plus);
  CHECK(si.lgi_violation == direct.lgi_violation);
}

TEST_CASE("rescaling mass and frequency at fixed phase leaves the witnesses unchanged") {
  const witness::OscillatorParams a{1e-14, 1.0, 0.0};
  const witness::OscillatorParams b{1e-2, 1e-6, 0.0};
  const double ta = kPi / 2 / a.omega;
  const double tb = kPi / 2 / b.omega;
  const auto ra =
      witness::witness_dimensional(a, ta, witness::beta2_from_offset(a, ta, kSqrt2, Sign::Plus));
  const auto rb =
      witness::witness_dimensional(b, tb, witness::beta2_from_offset(b, tb, kSqrt2, Sign::Plus));
  CHECK(max_abs_diff(ra.table, rb.table) <= 1e-9);
  CHECK(ra.n_plus == doctest::Approx(-0.169569234).epsilon(1e-8));
}

TEST_CASE("witness report echoes its inputs") {
  const auto r = witness::witness_report(Phase(1.0), 0.5, Sign::Minus, {0.1, -0.2});
  CHECK(r.theta == 1.0);
  CHECK(r.c.value() == 0.5);
  CHECK(r.sign.value() == Sign::Minus);
  CHECK(r.gamma == doctest::Approx(-0.5 / kSqrt2).epsilon(1e-15));
  CHECK(r.offsets.eps1 == 0.1);
  CHECK(r.offsets.eps2 == -0.2);
}

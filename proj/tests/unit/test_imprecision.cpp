#include <doctest.h>

#include <cmath>
#include <numbers>

#include "macrorealism/error.hpp"
#include "macrorealism/feasibility.hpp"
#include "macrorealism/imprecision.hpp"

using namespace macrorealism;
using imprecision::Interval;
using quantum::Phase;
using quantum::Sign;

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);
const Phase kQuarter(kPi / 2);

/// Simpson's rule for N+ = int_{gamma+eps2}^inf [free - g+ - g-] with the
/// analytic -2C/Y tail beyond the window.
double nsit_plus_simpson(const Phase& theta, double gamma, double eps1, double eps2) {
  const double a = gamma + eps2;
  const double span = 400.0;
  const std::size_t n = 100000;
  const double h = span / n;
  const quantum::BranchDensity gp(theta, Sign::Plus, eps1), gm(theta, Sign::Minus, eps1);
  auto f = [&](double y) { return quantum::free_density(y) - gp(y) - gm(y); };
  double s = f(a) + f(a + span);
  for (std::size_t i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  const double tail = -2.0 * quantum::branch_tail_coefficient(theta, eps1) / (a + span);
  return s * h / 3.0 + tail;
}

}  // namespace

TEST_CASE("zero offsets reduce to the exact witness") {
  const auto exact = witness::witness_report(kQuarter, kSqrt2, Sign::Plus);
  const auto shifted = imprecision::offset_witness(kQuarter, {}, kSqrt2, Sign::Plus);
  CHECK(shifted.n_plus == exact.n_plus);
  CHECK(shifted.lgi_violation == exact.lgi_violation);
  const auto degenerate = imprecision::averaged_witness(kQuarter, {0, 0}, {0, 0}, kSqrt2, Sign::Plus);
  CHECK(degenerate.n_plus == doctest::Approx(exact.n_plus).epsilon(1e-14));
  CHECK(degenerate.lgi_violation == doctest::Approx(exact.lgi_violation).epsilon(1e-14));
  const auto sampled = imprecision::averaged_witness(kQuarter, {0, 0}, {0, 0}, kSqrt2, Sign::Plus,
                                                     imprecision::SampledScheme{50, 3});
  CHECK(sampled.n_plus == doctest::Approx(exact.n_plus).epsilon(1e-14));
}

TEST_CASE("offset witness against direct integration") {
  for (auto [theta, e1, e2] : {std::tuple{1.0, 0.4, -0.3}, std::tuple{2.5, -0.8, 0.6},
                               std::tuple{kPi / 2, 1.0, 1.0}}) {
    const auto r = imprecision::offset_witness(Phase(theta), {e1, e2}, kSqrt2, Sign::Plus);
    CHECK(r.n_plus == doctest::Approx(nsit_plus_simpson(Phase(theta), 1.0, e1, e2)).epsilon(1e-6));
  }
}

TEST_CASE("heatmap at a quarter period") {
  const auto h = imprecision::heatmap(kQuarter, {-2, 2}, {-2, 2}, 21, kSqrt2, Sign::Plus);
  REQUIRE(h.eps1_axis.size() == 21);
  CHECK(h.eps1_axis.front() == -2.0);
  CHECK(h.eps1_axis.back() == 2.0);
  CHECK(h.eps1_axis[10] == 0.0);
  const double centre = std::abs(h.n_plus(10, 10));
  CHECK(centre == doctest::Approx(0.169569234).epsilon(1e-8));
  for (std::size_t i = 0; i < 21; ++i) {
    for (std::size_t j = 0; j < 21; ++j) {
      CHECK(std::abs(h.n_plus(i, j) + h.n_minus(i, j)) <= 1e-9);
      CHECK(std::abs(h.n_plus(i, j)) <= centre + 1e-9);
    }
  }
  for (auto [i, j] : {std::pair{0, 0}, std::pair{0, 20}, std::pair{20, 0}, std::pair{20, 20}}) {
    CHECK(std::abs(h.n_plus(i, j)) < 0.1 * centre);
  }
  CHECK_THROWS_AS(imprecision::heatmap(kQuarter, {-1, 1}, {-1, 1}, 1, kSqrt2, Sign::Plus), Error);
}

TEST_CASE("averaging is the weighted sum of pointwise witnesses") {
  const Phase theta(1.2);
  const std::size_t n = 4;
  const auto avg = imprecision::averaged_witness(theta, {-0.5, 1.0}, {-1.0, 0.2}, kSqrt2,
                                                 Sign::Minus, imprecision::QuadratureScheme{n});
  const auto r1 = quad::gauss_legendre_average(n, -0.5, 1.0);
  const auto r2 = quad::gauss_legendre_average(n, -1.0, 0.2);
  double n_plus = 0.0, l_pp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto w = imprecision::offset_witness(theta, {r1.nodes[i], r2.nodes[j]}, kSqrt2, Sign::Minus);
      n_plus += r1.weights[i] * r2.weights[j] * w.n_plus;
      l_pp += r1.weights[i] * r2.weights[j] * w.lgi.L[0][0];
    }
  }
  CHECK(avg.n_plus == doctest::Approx(n_plus).epsilon(1e-10));
  CHECK(avg.lgi.L[0][0] == doctest::Approx(l_pp).epsilon(1e-10));
  CHECK(avg.offsets.eps1 == 0.25);
  CHECK(avg.offsets.eps2 == -0.4);
}

TEST_CASE("averaged witness over the unit square") {
  const auto r = imprecision::averaged_witness(kQuarter, {-1, 1}, {-1, 1}, kSqrt2, Sign::Plus);
  CHECK(r.n_plus == doctest::Approx(-0.100681008630).epsilon(1e-9));
  CHECK(r.lgi.L[0][0] == doctest::Approx(0.281605780416).epsilon(1e-9));
  CHECK(r.lgi.L[1][0] == doctest::Approx(0.281605780416).epsilon(1e-9));
  CHECK(r.lgi.L[0][1] == doctest::Approx(1.718394220).epsilon(1e-9));
  CHECK(r.lgi.L[1][1] == doctest::Approx(1.718394220).epsilon(1e-9));
  CHECK(r.lgi_violation == doctest::Approx(-0.281605780416).epsilon(1e-9));
  for (std::size_t n : {11, 41}) {
    const auto finer = imprecision::averaged_witness(kQuarter, {-1, 1}, {-1, 1}, kSqrt2, Sign::Plus,
                                                     imprecision::QuadratureScheme{n});
    CHECK(std::abs(finer.n_plus - r.n_plus) <= 1e-12);
  }
}

TEST_CASE("sampled averaging") {
  const imprecision::SampledScheme s{4000, 7};
  const auto a = imprecision::averaged_witness(kQuarter, {-1, 1}, {-1, 1}, kSqrt2, Sign::Plus, s);
  const auto b = imprecision::averaged_witness(kQuarter, {-1, 1}, {-1, 1}, kSqrt2, Sign::Plus, s);
  CHECK(a.n_plus == b.n_plus);
  CHECK(a.lgi_violation == b.lgi_violation);
  CHECK(a.n_plus == doctest::Approx(-0.101366).epsilon(1e-5));
  CHECK(a.lgi_violation == doctest::Approx(-0.271965).epsilon(1e-5));
  const auto other = imprecision::averaged_witness(kQuarter, {-1, 1}, {-1, 1}, kSqrt2, Sign::Plus,
                                                   imprecision::SampledScheme{4000, 8});
  CHECK(other.n_plus != a.n_plus);
  CHECK(std::abs(other.n_plus - a.n_plus) < 0.01);
}

TEST_CASE("wider ranges weaken the witnesses monotonically") {
  double last_n = INFINITY, last_l = INFINITY;
  for (double a : {0.0, 0.25, 0.5, 1.0, 2.0}) {
    const auto r = imprecision::averaged_witness(kQuarter, {-a, a}, {-a, a}, kSqrt2, Sign::Plus);
    CHECK(r.nsit_violation < last_n);
    CHECK(r.lgi_violation < last_l);
    CHECK(r.nsit_violation > 0.0);
    last_n = r.nsit_violation;
    last_l = r.lgi_violation;
  }
  CHECK(last_n == doctest::Approx(0.025978025).epsilon(1e-7));
}

TEST_CASE("dimensional offset range") {
  const witness::OscillatorParams p{1e-14, 1.0};
  const double range = imprecision::dimensional_offset_range(p);
  CHECK(range == doctest::Approx(kSqrt2 * feasibility::standard_quantum_limit(1e-14, 1.0)).epsilon(1e-14));
  CHECK(imprecision::dimensional_offset_range({1e-12, 1.0}) == doctest::Approx(range / 10).epsilon(1e-14));
  CHECK(range == doctest::Approx(1.026923e-10).epsilon(1e-6));
}

TEST_CASE("non-finite ranges are rejected") {
  CHECK_THROWS_AS(imprecision::averaged_witness(kQuarter, {-INFINITY, 1}, {0, 0}, kSqrt2, Sign::Plus),
                  Error);
}

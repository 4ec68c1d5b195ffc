#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "macrorealism/error.hpp"
#include "macrorealism/quadrature.hpp"

using namespace macrorealism;

TEST_CASE("finite integrals of smooth functions") {
  const auto r = quad::integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(r.abs_error <= 1e-11);
  const auto g = quad::integrate([](double x) { return std::exp(-x * x); }, -3.0, 3.0);
  CHECK(g.value == doctest::Approx(std::sqrt(std::numbers::pi) * std::erf(3.0)).epsilon(1e-13));
}

TEST_CASE("reversed and empty intervals") {
  const auto f = [](double x) { return x * x; };
  CHECK(quad::integrate(f, 1.0, 0.0).value == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
  CHECK(quad::integrate(f, 2.0, 2.0).value == 0.0);
}

TEST_CASE("algebraic tails are integrated exactly on the compactified variable") {
  const auto inv_sq = [](double y) { return 1.0 / (y * y); };
  CHECK(quad::upper_tail(inv_sq, 8.0).value == doctest::Approx(1.0 / 8.0).epsilon(1e-13));
  CHECK(quad::lower_tail(inv_sq, -8.0).value == doctest::Approx(1.0 / 8.0).epsilon(1e-13));
  const auto mixed = [](double y) { return 1.0 / (y * y) + 3.0 / (y * y * y * y); };
  CHECK(quad::upper_tail(mixed, 10.0).value == doctest::Approx(0.1 + 1e-3).epsilon(1e-13));
}

TEST_CASE("whole-line integrals with breakpoints") {
  const auto lorentz = [](double y) { return 1.0 / (1.0 + y * y); };
  const std::array<double, 2> breaks = {0.0, 2.5};
  const auto r = quad::integrate_line(lorentz, -quad::kInfinity, quad::kInfinity, breaks);
  CHECK(r.value == doctest::Approx(std::numbers::pi).epsilon(1e-12));
  const auto half = quad::integrate_line(lorentz, 1.0, quad::kInfinity, breaks);
  CHECK(half.value == doctest::Approx(std::numbers::pi / 4.0).epsilon(1e-12));
  const auto left = quad::integrate_line(lorentz, -quad::kInfinity, -20.0, breaks);
  CHECK(left.value == doctest::Approx(std::atan(1.0 / 20.0)).epsilon(1e-12));
}

TEST_CASE("kinks at breakpoints do not cost accuracy") {
  const auto kink = [](double y) { return std::exp(-std::abs(y - 0.3)); };
  const std::array<double, 1> breaks = {0.3};
  const auto r = quad::integrate_line(kink, -quad::kInfinity, quad::kInfinity, breaks);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("failure to converge is reported") {
  quad::Options opts;
  opts.max_intervals = 5;
  opts.abs_tol = 1e-15;
  const auto nasty = [](double x) { return std::sin(1.0 / x); };
  CHECK_THROWS_AS(quad::integrate(nasty, 1e-4, 1.0, opts), Error);
  try {
    quad::integrate(nasty, 1e-4, 1.0, opts);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::QuadratureFailure);
  }
}

TEST_CASE("invalid limits") {
  const auto f = [](double) { return 1.0; };
  CHECK_THROWS_AS(quad::integrate(f, 0.0, quad::kInfinity), Error);
  CHECK_THROWS_AS(quad::upper_tail(f, -1.0), Error);
  CHECK_THROWS_AS(quad::lower_tail(f, 1.0), Error);
  CHECK_THROWS_AS(quad::integrate_line(f, NAN, 1.0, {}), Error);
}

TEST_CASE("Gauss-Legendre rules") {
  for (std::size_t n : {1u, 2u, 5u, 11u, 21u, 41u}) {
    const auto rule = quad::gauss_legendre(n);
    REQUIRE(rule.nodes.size() == n);
    double wsum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      wsum += rule.weights[i];
      if (i > 0) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
      CHECK(rule.nodes[i] == doctest::Approx(-rule.nodes[n - 1 - i]).epsilon(1e-14));
    }
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    // Exact for polynomials of degree 2n - 1.
    const int deg = static_cast<int>(2 * n - 2);
    double moment = 0.0;
    for (std::size_t i = 0; i < n; ++i) moment += rule.weights[i] * std::pow(rule.nodes[i], deg);
    CHECK(moment == doctest::Approx(2.0 / (deg + 1)).epsilon(1e-13));
  }
  const auto avg = quad::gauss_legendre_average(21, -1.0, 3.0);
  double mean = 0.0, wsum = 0.0;
  for (std::size_t i = 0; i < avg.nodes.size(); ++i) {
    wsum += avg.weights[i];
    mean += avg.weights[i] * avg.nodes[i] * avg.nodes[i];
    CHECK(avg.nodes[i] > -1.0);
    CHECK(avg.nodes[i] < 3.0);
  }
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(mean == doctest::Approx(28.0 / 12.0).epsilon(1e-13));
  CHECK_THROWS_AS(quad::gauss_legendre(0), Error);
}

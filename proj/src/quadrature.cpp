#include "macrorealism/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>

#include "macrorealism/error.hpp"

namespace macrorealism::quad {

namespace {

// Kronrod abscissae (x[1], x[3], ... are the Gauss nodes) and weights,
// QUADPACK qk21.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment kronrod21(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double result_k = fc * kWgk[10];
  double result_abs = std::abs(result_k);
  double result_g = 0.0;
  std::array<double, 10> f1{};
  std::array<double, 10> f2{};
  for (std::size_t j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    const double sum = f1[j] + f2[j];
    result_k += kWgk[j] * sum;
    result_abs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) result_g += kWg[j / 2] * sum;
  }
  const double mean = 0.5 * result_k;
  double result_asc = kWgk[10] * std::abs(fc - mean);
  for (std::size_t j = 0; j < 10; ++j) {
    result_asc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }
  result_k *= half;
  result_abs *= std::abs(half);
  result_asc *= std::abs(half);

  double err = std::abs((result_k - result_g * half));
  if (result_asc != 0.0 && err != 0.0) {
    err = result_asc * std::min(1.0, std::pow(200.0 * err / result_asc, 1.5));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (result_abs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    err = std::max(50.0 * eps * result_abs, err);
  }
  return {a, b, result_k, err};
}

double tolerance(const Options& opts, double value) {
  return std::max(opts.abs_tol, opts.rel_tol * std::abs(value));
}

}  // namespace

Result integrate(const Integrand& f, double a, double b, const Options& opts) {
  if (!(std::isfinite(a) && std::isfinite(b))) {
    throw Error(ErrorKind::InvalidArgument, "integrate: interval ends must be finite");
  }
  if (a == b) return {};

  std::priority_queue<Segment> heap;
  Segment first = kronrod21(f, a, b);
  double value = first.value;
  double error = first.error;
  heap.push(first);

  while (error > tolerance(opts, value)) {
    if (heap.size() >= opts.max_intervals) {
      std::ostringstream msg;
      msg << "tolerance " << tolerance(opts, value) << " not reached on [" << a << ", " << b
          << "] after " << heap.size() << " intervals (error estimate " << error << ")";
      throw Error(ErrorKind::QuadratureFailure, msg.str());
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Segment left = kronrod21(f, worst.a, mid);
    const Segment right = kronrod21(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum to shed the drift of the running updates.
  Result out;
  out.intervals = heap.size();
  while (!heap.empty()) {
    out.value += heap.top().value;
    out.abs_error += heap.top().error;
    heap.pop();
  }
  return out;
}

Result upper_tail(const Integrand& f, double start, const Options& opts) {
  if (!(start > 0.0) || !std::isfinite(start)) {
    throw Error(ErrorKind::InvalidArgument, "upper_tail: start must be positive and finite");
  }
  const Integrand mapped = [&f, start](double t) { return f(start / t) * start / (t * t); };
  return integrate(mapped, 0.0, 1.0, opts);
}

Result lower_tail(const Integrand& f, double start, const Options& opts) {
  if (!(start < 0.0) || !std::isfinite(start)) {
    throw Error(ErrorKind::InvalidArgument, "lower_tail: start must be negative and finite");
  }
  const double span = -start;
  const Integrand mapped = [&f, start, span](double t) { return f(start / t) * span / (t * t); };
  return integrate(mapped, 0.0, 1.0, opts);
}

Result integrate_line(const Integrand& f, double lo, double hi, std::span<const double> breakpoints,
                      const Options& opts) {
  if (std::isnan(lo) || std::isnan(hi)) {
    throw Error(ErrorKind::InvalidArgument, "integrate_line: NaN limit");
  }
  if (lo >= hi) {
    if (lo == hi) return {};
    Result r = integrate_line(f, hi, lo, breakpoints, opts);
    r.value = -r.value;
    return r;
  }

  std::vector<double> cuts = {lo, hi};
  auto add_inside = [&](double p) {
    if (std::isfinite(p) && p > lo && p < hi) cuts.push_back(p);
  };
  add_inside(-kTailStart);
  add_inside(kTailStart);
  for (double p : breakpoints) add_inside(p);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  Result total;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    Result piece;
    if (std::isinf(a)) {
      piece = lower_tail(f, b, opts);
    } else if (std::isinf(b)) {
      piece = upper_tail(f, a, opts);
    } else {
      piece = integrate(f, a, b, opts);
    }
    total.value += piece.value;
    total.abs_error += piece.abs_error;
    total.intervals += piece.intervals;
  }
  return total;
}

Rule gauss_legendre(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "gauss_legendre: n must be >= 1");
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    // Newton iteration on P_n from the Tricomi initial guess.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 1 ? x : p1;
      const double pn1 = n == 1 ? 1.0 : p0;
      dp = static_cast<double>(n) * (x * pn - pn1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
      p0 = p1;
      p1 = p2;
    }
    dp = n == 1 ? 1.0 : static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

Rule gauss_legendre_average(std::size_t n, double a, double b) {
  Rule rule = gauss_legendre(n);
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (std::size_t i = 0; i < n; ++i) {
    rule.nodes[i] = center + half * rule.nodes[i];
    rule.weights[i] *= 0.5;
  }
  return rule;
}

}  // namespace macrorealism::quad

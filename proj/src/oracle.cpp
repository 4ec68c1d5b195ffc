#include "macrorealism/oracle.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

#include "macrorealism/error.hpp"

namespace macrorealism::oracle {

namespace {

using Complex = std::complex<double>;

// FFTW's planner is not thread-safe; execution of an existing plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class FftPlan {
 public:
  FftPlan(std::vector<Complex>& buffer, int direction) {
    auto* data = reinterpret_cast<fftw_complex*>(buffer.data());
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft_1d(static_cast<int>(buffer.size()), data, data, direction,
                             FFTW_ESTIMATE);
    if (plan_ == nullptr) throw Error(ErrorKind::BadConfig, "FFTW could not create a plan");
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
  ~FftPlan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }

  void run() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_ = nullptr;
};

std::vector<double> cell_centres(std::size_t n, double dy) {
  std::vector<double> y(n);
  const double half = static_cast<double>(n / 2);
  for (std::size_t j = 0; j < n; ++j) y[j] = (static_cast<double>(j) - half + 0.5) * dy;
  return y;
}

/// Angular wavenumbers in FFT order.
std::vector<double> wavenumbers(std::size_t n, double dy) {
  std::vector<double> k(n);
  const double dk = 2.0 * std::numbers::pi / (static_cast<double>(n) * dy);
  for (std::size_t j = 0; j < n; ++j) {
    const auto signed_j = j < n / 2 ? static_cast<double>(j)
                                    : static_cast<double>(j) - static_cast<double>(n);
    k[j] = signed_j * dk;
  }
  return k;
}

double coherent_amplitude_scale() { return std::pow(std::numbers::pi, -0.25); }

/// Share of the cell [centre - dy/2, centre + dy/2] lying on `side` of b.
double side_fraction(double centre, double dy, double b, Sign side) {
  const double above = std::clamp((centre + 0.5 * dy - b) / dy, 0.0, 1.0);
  return side == Sign::Plus ? above : 1.0 - above;
}

/// Integral over [a, b] of the piecewise-constant density on the cells.
double cell_integral(const std::vector<double>& y, const std::vector<double>& rho, double dy,
                     double a, double b) {
  double sum = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) {
    const double lo = std::clamp(y[j] - 0.5 * dy, a, b);
    const double hi = std::clamp(y[j] + 0.5 * dy, a, b);
    sum += rho[j] * (hi - lo);
  }
  return sum;
}

/// Least-squares fit of y^2 rho = C + D / y^2 over window_lo < |y| < window_hi
/// on one side, integrated from window_hi to infinity.
double fitted_tail_mass(const std::vector<double>& y, const std::vector<double>& rho,
                        double window_lo, double window_hi, Sign side) {
  double s_u = 0.0, s_uu = 0.0, s_v = 0.0, s_uv = 0.0;
  std::size_t count = 0;
  for (std::size_t j = 0; j < y.size(); ++j) {
    const double r = quantum::to_double(side) * y[j];
    if (r <= window_lo || r >= window_hi) continue;
    const double u = 1.0 / (r * r);
    const double v = rho[j] * r * r;
    s_u += u;
    s_uu += u * u;
    s_v += v;
    s_uv += u * v;
    ++count;
  }
  if (count < 3) throw Error(ErrorKind::BadGrid, "tail window holds fewer than 3 cells");
  const double n = static_cast<double>(count);
  const double det = n * s_uu - s_u * s_u;
  const double c = (s_v * s_uu - s_u * s_uv) / det;
  const double d = (n * s_uv - s_u * s_v) / det;
  return c / window_hi + d / (3.0 * window_hi * window_hi * window_hi);
}

struct CutState {
  GridState state;  // band-limited, norm = probability minus the discarded high modes
  double probability = 0.0;
};

CutState band_limited_cut(const SolverConfig& config, double boundary, Sign side) {
  config.validate();
  const std::size_t n = config.points;
  const std::size_t nf = n * config.oversample;
  const double dy = config.dy();
  const double dyf = 2.0 * config.y_half_width / static_cast<double>(nf);
  if (!(std::abs(boundary) < config.y_half_width)) {
    std::ostringstream msg;
    msg << "boundary " << boundary << " outside grid half-width " << config.y_half_width;
    throw Error(ErrorKind::BoundaryOutsideGrid, msg.str());
  }

  const std::vector<double> yf = cell_centres(nf, dyf);
  std::vector<Complex> fine(nf);
  const double scale = coherent_amplitude_scale();
  double total = 0.0;
  double kept = 0.0;
  for (std::size_t i = 0; i < nf; ++i) {
    const Complex psi = scale * std::exp(Complex(-0.5 * yf[i] * yf[i], config.momentum * yf[i]));
    const double w = side_fraction(yf[i], dyf, boundary, side);
    total += std::norm(psi);
    kept += w * std::norm(psi);
    fine[i] = w * psi;
  }
  FftPlan(fine, FFTW_FORWARD).run();

  // Central n modes, re-phased from fine to coarse cell centres, which are
  // offset by (dy - dyf)/2.
  std::vector<Complex> coarse(n);
  const std::vector<double> k = wavenumbers(n, dy);
  const double shift = 0.5 * (dy - dyf);
  const double norm_factor = 1.0 / static_cast<double>(nf);
  for (std::size_t j = 0; j < n; ++j) {
    const Complex mode = j < n / 2 ? fine[j] : fine[nf - n + j];
    coarse[j] = mode * std::polar(norm_factor, k[j] * shift);
  }
  FftPlan(coarse, FFTW_BACKWARD).run();

  CutState cut;
  cut.state.y_grid = cell_centres(n, dy);
  cut.state.amplitude = std::move(coarse);
  cut.state.dy = dy;
  cut.probability = kept / total;
  return cut;
}

void scale_amplitude(GridState& s, double factor) {
  for (auto& a : s.amplitude) a *= factor;
}

}  // namespace

void SolverConfig::validate() const {
  std::ostringstream msg;
  if (points < 16 || points % 2 != 0) {
    msg << "points = " << points << " must be even and >= 16";
  } else if (!(y_half_width > 10.0) || !std::isfinite(y_half_width)) {
    msg << "y_half_width = " << y_half_width << " must be > 10";
  } else if (steps_per_radian < 1) {
    msg << "steps_per_radian must be >= 1";
  } else if (oversample < 1) {
    msg << "oversample must be >= 1";
  } else if (!std::isfinite(momentum) || std::abs(momentum) + 10.0 > k_max() ||
             std::abs(momentum) + 10.0 > y_half_width) {
    msg << "momentum kick " << momentum << " leaves no room in the grid (k_max = " << k_max()
        << ", half-width = " << y_half_width << ")";
  } else {
    return;
  }
  throw Error(ErrorKind::BadConfig, msg.str());
}

double SolverConfig::k_max() const noexcept { return std::numbers::pi / dy(); }

SolverConfig SolverConfig::balanced(std::size_t points) {
  SolverConfig c;
  c.points = points;
  c.y_half_width = std::sqrt(std::numbers::pi * static_cast<double>(points) / 2.0);
  return c;
}

double GridState::norm() const {
  double s = 0.0;
  for (const auto& a : amplitude) s += std::norm(a);
  return s * dy;
}

double GridState::mean_position() const {
  double s = 0.0;
  for (std::size_t j = 0; j < amplitude.size(); ++j) s += y_grid[j] * std::norm(amplitude[j]);
  return s * dy / norm();
}

double GridState::variance() const {
  const double mean = mean_position();
  double s = 0.0;
  for (std::size_t j = 0; j < amplitude.size(); ++j) {
    const double d = y_grid[j] - mean;
    s += d * d * std::norm(amplitude[j]);
  }
  return s * dy / norm();
}

std::vector<double> GridState::density() const {
  std::vector<double> rho(amplitude.size());
  for (std::size_t j = 0; j < rho.size(); ++j) rho[j] = std::norm(amplitude[j]);
  return rho;
}

GridState init_coherent(const SolverConfig& config) {
  config.validate();
  GridState s;
  s.dy = config.dy();
  s.y_grid = cell_centres(config.points, s.dy);
  s.amplitude.resize(config.points);
  const double scale = coherent_amplitude_scale();
  for (std::size_t j = 0; j < config.points; ++j) {
    const double y = s.y_grid[j];
    s.amplitude[j] = scale * std::exp(Complex(-0.5 * y * y, config.momentum * y));
  }
  scale_amplitude(s, 1.0 / std::sqrt(s.norm()));
  return s;
}

std::pair<GridState, double> init_projected(const SolverConfig& config, double boundary_y,
                                            Sign side) {
  CutState cut = band_limited_cut(config, boundary_y, side);
  const double n = cut.state.norm();
  if (n > 0.0) scale_amplitude(cut.state, 1.0 / std::sqrt(n));
  return {std::move(cut.state), cut.probability};
}

GridState evolve(GridState state, double theta_span, const SolverConfig& config) {
  config.validate();
  if (!(theta_span > 0.0) || !std::isfinite(theta_span)) {
    throw Error(ErrorKind::InvalidArgument, "theta_span must be positive and finite");
  }
  if (state.amplitude.size() != config.points) {
    throw Error(ErrorKind::BadConfig, "state and config disagree on the point count");
  }
  const std::size_t n = state.amplitude.size();
  const auto steps = static_cast<std::size_t>(
      std::ceil(theta_span * static_cast<double>(config.steps_per_radian)));
  const double dt = theta_span / static_cast<double>(steps);

  // V = y^2/2, T = k^2/2. Interior half-steps of V are merged into full steps.
  std::vector<Complex> half_v(n), full_v(n), kinetic(n);
  const std::vector<double> k = wavenumbers(n, state.dy);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double v = 0.5 * state.y_grid[j] * state.y_grid[j];
    half_v[j] = std::polar(1.0, -0.5 * dt * v);
    full_v[j] = std::polar(1.0, -dt * v);
    kinetic[j] = std::polar(inv_n, -0.5 * dt * k[j] * k[j]);
  }

  const double norm_before = state.norm();
  auto& psi = state.amplitude;
  const FftPlan forward(psi, FFTW_FORWARD);
  const FftPlan backward(psi, FFTW_BACKWARD);
  for (std::size_t j = 0; j < n; ++j) psi[j] *= half_v[j];
  for (std::size_t step = 0; step < steps; ++step) {
    forward.run();
    for (std::size_t j = 0; j < n; ++j) psi[j] *= kinetic[j];
    backward.run();
    const auto& v = step + 1 == steps ? half_v : full_v;
    for (std::size_t j = 0; j < n; ++j) psi[j] *= v[j];
  }
  state.elapsed += theta_span;

  const double norm_after = state.norm();
  const double drift = std::abs(norm_after - norm_before) / norm_before;
  if (!(drift <= 1e-6)) {
    std::ostringstream msg;
    msg << "relative norm drift " << drift << " after " << steps << " steps";
    throw Error(ErrorKind::NormDrift, msg.str());
  }
  return state;
}

std::pair<GridState, double> project(const GridState& state, double boundary_y, Sign side) {
  const double lo = state.y_grid.front() - 0.5 * state.dy;
  const double hi = state.y_grid.back() + 0.5 * state.dy;
  if (!(boundary_y >= lo && boundary_y <= hi)) {
    std::ostringstream msg;
    msg << "boundary " << boundary_y << " outside grid [" << lo << ", " << hi << "]";
    throw Error(ErrorKind::BoundaryOutsideGrid, msg.str());
  }
  GridState out = state;
  const double total = state.norm();
  for (std::size_t j = 0; j < out.amplitude.size(); ++j) {
    const bool plus = out.y_grid[j] >= boundary_y;
    if (plus != (side == Sign::Plus)) out.amplitude[j] = 0.0;
  }
  const double captured = out.norm();
  if (captured > 0.0) scale_amplitude(out, 1.0 / std::sqrt(captured));
  return {std::move(out), captured / total};
}

witness::ProbabilityTable oracle_probability_table(const Phase& theta, double gamma,
                                                   const SolverConfig& config,
                                                   witness::OffsetPair offsets) {
  config.validate();
  const double split = gamma + offsets.eps2;
  const double frame_shift = config.momentum * theta.sin();
  // Window in y where the grid density is trusted: clear of the position
  // edges and of the momentum cutoff, which maps to y ~ k sin(theta).
  const double window = 0.5 * std::min(config.y_half_width - std::abs(frame_shift),
                                       (config.k_max() - std::abs(config.momentum)) *
                                           std::abs(theta.sin()));
  if (!(std::abs(split) < 0.5 * window) || !(std::abs(offsets.eps1) < 0.5 * window)) {
    std::ostringstream msg;
    msg << "boundaries (" << offsets.eps1 << ", " << split << ") outside the trusted window +-"
        << 0.5 * window;
    throw Error(ErrorKind::BoundaryOutsideGrid, msg.str());
  }

  auto co_moving = [&](const GridState& s) {
    std::vector<double> y = s.y_grid;
    for (double& v : y) v -= frame_shift;
    return y;
  };

  witness::ProbabilityTable t;
  for (Sign q : witness::kSigns) {
    CutState cut = band_limited_cut(config, offsets.eps1, q);
    t.pQ[witness::index(q)] = cut.probability;
    const GridState evolved = evolve(std::move(cut.state), theta.radians(), config);
    const std::vector<double> y = co_moving(evolved);
    const std::vector<double> rho = evolved.density();
    const double below = cell_integral(y, rho, evolved.dy, -window, split) +
                         fitted_tail_mass(y, rho, 0.5 * window, window, Sign::Minus);
    const double above = cell_integral(y, rho, evolved.dy, split, window) +
                         fitted_tail_mass(y, rho, 0.5 * window, window, Sign::Plus);
    t.joint[witness::index(q)][witness::index(Sign::Minus)] = below;
    t.joint[witness::index(q)][witness::index(Sign::Plus)] = above;
  }

  const GridState free = evolve(init_coherent(config), theta.radians(), config);
  const std::vector<double> y = co_moving(free);
  const std::vector<double> rho = free.density();
  const double lo = y.front() - 0.5 * free.dy;
  const double hi = y.back() + 0.5 * free.dy;
  t.pR[witness::index(Sign::Minus)] = cell_integral(y, rho, free.dy, lo, split);
  t.pR[witness::index(Sign::Plus)] = cell_integral(y, rho, free.dy, split, hi);
  return t;
}

}  // namespace macrorealism::oracle

#include "macrorealism/cli/app.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "macrorealism/cli/output.hpp"
#include "macrorealism/error.hpp"
#include "macrorealism/feasibility.hpp"
#include "macrorealism/imprecision.hpp"
#include "macrorealism/oracle.hpp"
#include "macrorealism/parallel.hpp"
#include "macrorealism/quantum.hpp"
#include "macrorealism/witness.hpp"

#ifndef MACROREALISM_VERSION
#define MACROREALISM_VERSION "0.0.0"
#endif

namespace macrorealism::cli {

namespace {

using quantum::Phase;
using quantum::Sign;
using witness::WitnessReport;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string format = "csv";
  std::string out;
  double abs_tol = quad::Options{}.abs_tol;

  Format output_format() const { return format == "json" ? Format::Json : Format::Csv; }
  quad::Options quad_options() const {
    quad::Options o;
    o.abs_tol = abs_tol;
    return o;
  }
};

/// --theta / --t2-frac pair; exactly one must be given.
struct PhaseArgs {
  double theta = 0.0;
  double t2_frac = 0.0;
  CLI::Option* theta_opt = nullptr;
  CLI::Option* frac_opt = nullptr;

  void add_to(CLI::App* cmd) {
    theta_opt = cmd->add_option("--theta", theta, "Phase w t2 in radians");
    frac_opt = cmd->add_option("--t2-frac", t2_frac, "t2 as a fraction of the period (theta = 2 pi f)");
    theta_opt->excludes(frac_opt);
  }

  bool given() const { return theta_opt->count() > 0 || frac_opt->count() > 0; }

  Phase resolve() const {
    if (!given()) throw UsageError("give exactly one of --theta or --t2-frac");
    return theta_opt->count() > 0 ? Phase(theta) : Phase::from_period_fraction(t2_frac);
  }

  void echo(Json& inputs) const {
    if (theta_opt->count() > 0) inputs["theta"] = json_number(theta);
    if (frac_opt->count() > 0) inputs["t2_frac"] = json_number(t2_frac);
  }
};

Sign parse_sign(const std::string& text) {
  if (text == "+" || text == "plus" || text == "1" || text == "+1") return Sign::Plus;
  if (text == "-" || text == "minus" || text == "-1") return Sign::Minus;
  throw UsageError("--sign must be + or - (got '" + text + "')");
}

std::string sign_text(Sign s) { return s == Sign::Plus ? "+" : "-"; }

Json base_meta(const std::string& command, const Globals& g) {
  Json meta = Json::object();
  meta["command"] = command;
  meta["version"] = version();
  meta["inputs"] = Json::object();
  meta["quadrature"] = Json::object();
  meta["quadrature"]["abs_tol"] = json_number(g.abs_tol);
  return meta;
}

void emit(const Record& record, const Globals& g, std::ostream& out) {
  const std::string text = record.render(g.output_format());
  if (g.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(g.out, std::ios::binary);
  if (!file) throw UsageError("cannot open --out file '" + g.out + "'");
  file << text;
  if (!file) throw UsageError("failed writing --out file '" + g.out + "'");
}

/// Column names and cells of a full witness report, in a fixed order.
std::vector<std::string> witness_header() {
  return {"theta_rad", "gamma",     "eps1",      "eps2",      "pQ_plus",   "pQ_minus",
          "pR_plus",   "pR_minus",  "joint_pp",  "joint_pm",  "joint_mp",  "joint_mm",
          "n_plus",    "n_minus",   "L_pp",      "L_pm",      "L_mp",      "L_mm",
          "nsit_violation", "lgi_violation", "lgi_violated"};
}

std::vector<std::string> witness_cells(const WitnessReport& r) {
  const auto& t = r.table;
  const auto& L = r.lgi.L;
  const auto P = witness::index(Sign::Plus);
  const auto M = witness::index(Sign::Minus);
  return {format_number(r.theta),        format_number(r.gamma),
          format_number(r.offsets.eps1), format_number(r.offsets.eps2),
          format_number(t.pQ[P]),        format_number(t.pQ[M]),
          format_number(t.pR[P]),        format_number(t.pR[M]),
          format_number(t.joint[P][P]),  format_number(t.joint[P][M]),
          format_number(t.joint[M][P]),  format_number(t.joint[M][M]),
          format_number(r.n_plus),       format_number(r.n_minus),
          format_number(L[P][P]),        format_number(L[P][M]),
          format_number(L[M][P]),        format_number(L[M][M]),
          format_number(r.nsit_violation), format_number(r.lgi_violation),
          format_bool(r.lgi_violated())};
}

Record witness_record(const std::string& command, const Globals& g, const WitnessReport& r) {
  Record rec;
  rec.meta = base_meta(command, g);
  rec.table.header = witness_header();
  rec.table.rows.push_back(witness_cells(r));
  return rec;
}

// ---------------------------------------------------------------- commands

struct Table1Cmd {
  void add(CLI::App& app) { app.add_subcommand("table1", "Reference rows at c = sqrt(2), sign +"); }

  Record run(const Globals& g) const {
    Record rec;
    rec.meta = base_meta("table1", g);
    rec.meta["inputs"]["c"] = json_number(std::numbers::sqrt2);
    rec.meta["inputs"]["sign"] = "+";
    rec.table.header = {"t2_over_T", "theta_rad", "nsit_violation", "lgi_violation",
                        "lgi_violated"};
    for (const auto& row : witness::table1(g.quad_options())) {
      rec.table.rows.push_back({row.label, format_number(row.report.theta),
                                format_number(row.report.nsit_violation),
                                format_number(row.report.lgi_violation),
                                format_bool(row.report.lgi_violated())});
    }
    return rec;
  }
};

struct WitnessCmd {
  PhaseArgs phase;
  double c = std::numbers::sqrt2;
  std::string sign = "+";
  double eps1 = 0.0;
  double eps2 = 0.0;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("witness", "NSIT and LGI witnesses at one setting");
    phase.add_to(cmd);
    cmd->add_option("--c", c, "Second boundary offset in peak standard deviations")
        ->capture_default_str();
    cmd->add_option("--sign", sign, "Side of the peak for the second boundary (+ or -)")
        ->capture_default_str();
    cmd->add_option("--eps1", eps1, "First boundary offset (dimensionless)")->capture_default_str();
    cmd->add_option("--eps2", eps2, "Second boundary offset (dimensionless)")->capture_default_str();
  }

  Record run(const Globals& g) const {
    const Phase theta = phase.resolve();
    const Sign s = parse_sign(sign);
    const auto report = imprecision::offset_witness(theta, {eps1, eps2}, c, s, g.quad_options());
    Record rec = witness_record("witness", g, report);
    auto& in = rec.meta["inputs"];
    phase.echo(in);
    in["c"] = json_number(c);
    in["sign"] = sign_text(s);
    in["eps1"] = json_number(eps1);
    in["eps2"] = json_number(eps2);
    return rec;
  }
};

struct SweepCmd {
  std::string over = "t2-frac";
  double from = 0.01;
  double to = 0.99;
  std::size_t n = 99;
  PhaseArgs phase;
  double c = std::numbers::sqrt2;
  std::string sign = "+";
  double eps1 = 0.0;
  double eps2 = 0.0;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("sweep", "Witnesses along a uniform grid of one parameter");
    cmd->add_option("--over", over, "Swept parameter")
        ->check(CLI::IsMember({"theta", "t2-frac", "c"}))
        ->capture_default_str();
    cmd->add_option("--from", from, "First value")->capture_default_str();
    cmd->add_option("--to", to, "Last value")->capture_default_str();
    cmd->add_option("--n", n, "Number of points (>= 2)")->capture_default_str();
    phase.add_to(cmd);
    cmd->add_option("--c", c, "Fixed c when sweeping the phase")->capture_default_str();
    cmd->add_option("--sign", sign, "Side of the peak (+ or -)")->capture_default_str();
    cmd->add_option("--eps1", eps1, "First boundary offset")->capture_default_str();
    cmd->add_option("--eps2", eps2, "Second boundary offset")->capture_default_str();
  }

  Record run(const Globals& g) const {
    if (n < 2) throw UsageError("--n must be >= 2");
    if (!std::isfinite(from) || !std::isfinite(to)) throw UsageError("--from/--to must be finite");
    const Sign s = parse_sign(sign);
    const bool phase_sweep = over != "c";
    if (phase_sweep && phase.given()) throw UsageError("--theta/--t2-frac conflict with a phase sweep");
    const std::optional<Phase> fixed_phase =
        phase_sweep ? std::nullopt : std::optional<Phase>(phase.resolve());

    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) {
      values[i] = i + 1 == n ? to : from + (to - from) * static_cast<double>(i) / (n - 1);
    }
    std::vector<std::optional<WitnessReport>> reports(n);
    parallel_for(n, [&](std::size_t i) {
      const double v = values[i];
      if (phase_sweep) {
        std::optional<Phase> p;
        try {
          p = over == "theta" ? Phase(v) : Phase::from_period_fraction(v);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::PhaseSingular) throw;
          return;
        }
        reports[i] = imprecision::offset_witness(*p, {eps1, eps2}, c, s, g.quad_options());
      } else {
        reports[i] = imprecision::offset_witness(*fixed_phase, {eps1, eps2}, v, s, g.quad_options());
      }
    });

    Record rec;
    rec.meta = base_meta("sweep", g);
    auto& in = rec.meta["inputs"];
    in["over"] = over;
    in["from"] = json_number(from);
    in["to"] = json_number(to);
    in["n"] = n;
    if (!phase_sweep) phase.echo(in);
    if (phase_sweep) in["c"] = json_number(c);
    in["sign"] = sign_text(s);
    in["eps1"] = json_number(eps1);
    in["eps2"] = json_number(eps2);

    const std::string column = over == "t2-frac" ? "t2_frac" : over;
    rec.table.header = witness_header();
    rec.table.header.insert(rec.table.header.begin(), column);
    std::size_t skipped = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!reports[i]) {
        ++skipped;
        continue;
      }
      auto cells = witness_cells(*reports[i]);
      cells.insert(cells.begin(), format_number(values[i]));
      rec.table.rows.push_back(std::move(cells));
    }
    rec.meta["skipped_singular"] = skipped;
    return rec;
  }
};

struct RangeArgs {
  double eps_min = -1.0;
  double eps_max = 1.0;
  double eps2_min = 0.0;
  double eps2_max = 0.0;
  CLI::Option* eps2_min_opt = nullptr;
  CLI::Option* eps2_max_opt = nullptr;

  void add_to(CLI::App* cmd, double default_half_width) {
    eps_min = -default_half_width;
    eps_max = default_half_width;
    cmd->add_option("--eps-min", eps_min, "Lower offset bound (both axes)")->capture_default_str();
    cmd->add_option("--eps-max", eps_max, "Upper offset bound (both axes)")->capture_default_str();
    eps2_min_opt = cmd->add_option("--eps2-min", eps2_min, "Lower eps2 bound (default: --eps-min)");
    eps2_max_opt = cmd->add_option("--eps2-max", eps2_max, "Upper eps2 bound (default: --eps-max)");
  }

  imprecision::Interval eps1() const { return {eps_min, eps_max}; }
  imprecision::Interval eps2() const {
    return {eps2_min_opt->count() ? eps2_min : eps_min, eps2_max_opt->count() ? eps2_max : eps_max};
  }

  void echo(Json& in) const {
    in["eps1_min"] = json_number(eps1().lo);
    in["eps1_max"] = json_number(eps1().hi);
    in["eps2_min"] = json_number(eps2().lo);
    in["eps2_max"] = json_number(eps2().hi);
  }
};

Json matrix_json(const imprecision::Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows; ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols; ++j) row.push_back(json_number(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json axis_json(const std::vector<double>& axis) {
  Json a = Json::array();
  for (double v : axis) a.push_back(json_number(v));
  return a;
}

struct HeatmapCmd {
  PhaseArgs phase;
  RangeArgs range;
  std::size_t n = 21;
  double c = std::numbers::sqrt2;
  std::string sign = "+";
  std::string quantity = "n_plus";

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("heatmap", "Witness over a grid of boundary offsets");
    phase.add_to(cmd);
    range.add_to(cmd, 2.0);
    cmd->add_option("--n", n, "Points per axis (>= 2)")->capture_default_str();
    cmd->add_option("--c", c, "Second boundary offset in peak standard deviations")
        ->capture_default_str();
    cmd->add_option("--sign", sign, "Side of the peak (+ or -)")->capture_default_str();
    cmd->add_option("--quantity", quantity, "Matrix written to CSV")
        ->check(CLI::IsMember({"n_plus", "n_minus", "lgi_violation"}))
        ->capture_default_str();
  }

  Record run(const Globals& g) const {
    const Phase theta = phase.resolve();
    const Sign s = parse_sign(sign);
    const auto h = imprecision::heatmap(theta, range.eps1(), range.eps2(), n, c, s, g.quad_options());

    Record rec;
    rec.meta = base_meta("heatmap", g);
    auto& in = rec.meta["inputs"];
    phase.echo(in);
    range.echo(in);
    in["n"] = n;
    in["c"] = json_number(c);
    in["sign"] = sign_text(s);
    in["quantity"] = quantity;
    rec.meta["layout"] = "rows eps1, columns eps2";

    const imprecision::Matrix& m = quantity == "n_plus"    ? h.n_plus
                                   : quantity == "n_minus" ? h.n_minus
                                                           : h.lgi_violation;
    rec.table.header.push_back("eps1\\eps2");
    for (double e2 : h.eps2_axis) rec.table.header.push_back(format_number(e2));
    for (std::size_t i = 0; i < m.rows; ++i) {
      std::vector<std::string> row{format_number(h.eps1_axis[i])};
      for (std::size_t j = 0; j < m.cols; ++j) row.push_back(format_number(m(i, j)));
      rec.table.rows.push_back(std::move(row));
    }

    rec.data = Json::object();
    rec.data["eps1_axis"] = axis_json(h.eps1_axis);
    rec.data["eps2_axis"] = axis_json(h.eps2_axis);
    rec.data["n_plus"] = matrix_json(h.n_plus);
    rec.data["n_minus"] = matrix_json(h.n_minus);
    rec.data["lgi_violation"] = matrix_json(h.lgi_violation);
    return rec;
  }
};

struct AverageCmd {
  PhaseArgs phase;
  RangeArgs range;
  double c = std::numbers::sqrt2;
  std::string sign = "+";
  std::string scheme = "quadrature";
  std::size_t n = 0;
  std::uint64_t seed = 1;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("average", "Witness averaged over uniformly distributed offsets");
    phase.add_to(cmd);
    range.add_to(cmd, 1.0);
    cmd->add_option("--c", c, "Second boundary offset in peak standard deviations")
        ->capture_default_str();
    cmd->add_option("--sign", sign, "Side of the peak (+ or -)")->capture_default_str();
    cmd->add_option("--scheme", scheme, "Averaging scheme")
        ->check(CLI::IsMember({"quadrature", "sampled"}))
        ->capture_default_str();
    cmd->add_option("--n", n, "Nodes per axis (quadrature, default 21) or samples (sampled, default 1000)");
    cmd->add_option("--seed", seed, "Seed for the sampled scheme")->capture_default_str();
  }

  Record run(const Globals& g) const {
    const Phase theta = phase.resolve();
    const Sign s = parse_sign(sign);
    imprecision::AveragingScheme chosen;
    std::size_t count = n;
    if (scheme == "quadrature") {
      count = n == 0 ? imprecision::QuadratureScheme{}.n : n;
      chosen = imprecision::QuadratureScheme{count};
    } else {
      count = n == 0 ? imprecision::SampledScheme{}.n : n;
      chosen = imprecision::SampledScheme{count, seed};
    }
    const auto report = imprecision::averaged_witness(theta, range.eps1(), range.eps2(), c, s,
                                                      chosen, g.quad_options());
    Record rec = witness_record("average", g, report);
    auto& in = rec.meta["inputs"];
    phase.echo(in);
    range.echo(in);
    in["c"] = json_number(c);
    in["sign"] = sign_text(s);
    in["scheme"] = scheme;
    in["n"] = count;
    if (scheme == "sampled") in["seed"] = seed;
    rec.meta["distribution"] = "uniform";
    return rec;
  }
};

struct DensitiesCmd {
  PhaseArgs phase;
  double y_min = -6.0;
  double y_max = 6.0;
  std::size_t points = 241;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("densities", "Unmeasured and branch densities on a grid");
    phase.add_to(cmd);
    cmd->add_option("--y-min", y_min, "Grid start (co-moving units)")->capture_default_str();
    cmd->add_option("--y-max", y_max, "Grid end (co-moving units)")->capture_default_str();
    cmd->add_option("--points", points, "Number of grid points")->capture_default_str();
  }

  Record run(const Globals& g) const {
    const Phase theta = phase.resolve();
    const auto p = quantum::density_profile(theta, y_min, y_max, points);
    Record rec;
    rec.meta = base_meta("densities", g);
    auto& in = rec.meta["inputs"];
    phase.echo(in);
    in["y_min"] = json_number(y_min);
    in["y_max"] = json_number(y_max);
    in["points"] = points;
    rec.table.header = {"y", "rho_free", "rho_plus", "rho_minus", "mr_defect"};
    for (std::size_t i = 0; i < p.y_grid.size(); ++i) {
      const double defect = p.rho_free[i] - (p.rho_plus[i] + p.rho_minus[i]);
      rec.table.rows.push_back({format_number(p.y_grid[i]), format_number(p.rho_free[i]),
                                format_number(p.rho_plus[i]), format_number(p.rho_minus[i]),
                                format_number(defect)});
    }
    return rec;
  }
};

struct FeasibilityCmd {
  double mass = 0.0;
  double omega = 0.0;
  double wavelength = 0.0;
  double photons = 0.0;
  double sqrt_sff = 0.0;
  double t2 = 0.0;
  double margin = feasibility::kDefaultDecoherenceMargin;
  CLI::Option* wavelength_opt = nullptr;
  CLI::Option* photons_opt = nullptr;
  CLI::Option* sff_opt = nullptr;
  CLI::Option* t2_opt = nullptr;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("feasibility", "Experimental requirements for a trapped mass");
    cmd->add_option("--mass", mass, "Mass in kg")->required();
    cmd->add_option("--omega", omega, "Trap angular frequency in rad/s")->required();
    wavelength_opt = cmd->add_option("--wavelength", wavelength, "Probe wavelength in m");
    photons_opt = cmd->add_option("--photons", photons, "Number of scattered photons");
    sff_opt = cmd->add_option("--sqrt-sff", sqrt_sff, "Force noise sqrt(S_FF) in N/sqrt(Hz)");
    t2_opt = cmd->add_option("--t2", t2, "Evolution time in s (default: one period)");
    cmd->add_option("--margin", margin, "Required rate * t2 upper bound")->capture_default_str();
    wavelength_opt->needs(photons_opt);
    photons_opt->needs(wavelength_opt);
    t2_opt->needs(sff_opt);
  }

  Record run(const Globals& g) const {
    feasibility::FeasibilityInputs in;
    in.mass = mass;
    in.omega = omega;
    in.margin = margin;
    if (wavelength_opt->count()) {
      in.wavelength = wavelength;
      in.photons = photons;
    }
    if (sff_opt->count()) {
      if (!(sqrt_sff >= 0.0)) throw UsageError("--sqrt-sff must be non-negative");
      in.s_ff = sqrt_sff * sqrt_sff;
    }
    if (t2_opt->count()) in.t2 = t2;
    const auto r = feasibility::feasibility_report(in);

    Record rec;
    rec.meta = base_meta("feasibility", g);
    auto& echo = rec.meta["inputs"];
    echo["mass"] = json_number(mass);
    echo["omega"] = json_number(omega);
    if (in.wavelength) echo["wavelength"] = json_number(*in.wavelength);
    if (in.photons) echo["photons"] = json_number(*in.photons);
    if (in.s_ff) echo["sqrt_sff"] = json_number(sqrt_sff);
    if (in.t2) echo["t2"] = json_number(*in.t2);
    rec.meta.erase("quadrature");

    auto& t = rec.table;
    t.header = {"sql", "offset_half_range", "force_noise_ceiling"};
    std::vector<std::string> row{format_number(r.sql), format_number(r.offset_half_range),
                                 format_number(r.force_noise_ceiling)};
    if (r.scatter_resolution) {
      t.header.push_back("scatter_resolution");
      row.push_back(format_number(*r.scatter_resolution));
    }
    if (r.decoherence_ok) {
      t.header.insert(t.header.end(), {"decoherence_rate", "margin", "decoherence_ok"});
      row.insert(row.end(), {format_number(*r.decoherence_rate), format_number(r.margin),
                             format_bool(*r.decoherence_ok)});
    }
    t.rows.push_back(std::move(row));
    return rec;
  }
};

struct VerifyCmd {
  PhaseArgs phase;
  double c = std::numbers::sqrt2;
  std::string sign = "+";
  double eps1 = 0.0;
  double eps2 = 0.0;
  double tol = 1e-3;
  oracle::SolverConfig config;
  CLI::Option* points_opt = nullptr;
  CLI::Option* half_width_opt = nullptr;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("verify", "Compare analytic probabilities with the grid solver");
    phase.add_to(cmd);
    cmd->add_option("--c", c, "Second boundary offset in peak standard deviations")
        ->capture_default_str();
    cmd->add_option("--sign", sign, "Side of the peak (+ or -)")->capture_default_str();
    cmd->add_option("--eps1", eps1, "First boundary offset")->capture_default_str();
    cmd->add_option("--eps2", eps2, "Second boundary offset")->capture_default_str();
    cmd->add_option("--tol", tol, "Largest accepted absolute discrepancy")->capture_default_str();
    points_opt = cmd->add_option("--points", config.points, "Solver grid points")
                     ->capture_default_str();
    half_width_opt = cmd->add_option("--half-width", config.y_half_width,
                                     "Solver half-width (default: balanced for --points)");
    cmd->add_option("--steps-per-radian", config.steps_per_radian, "Solver time steps per radian")
        ->capture_default_str();
    cmd->add_option("--momentum", config.momentum, "Initial momentum kick (dimensionless)")
        ->capture_default_str();
  }

  Record run(const Globals& g) const {
    const Phase theta = phase.resolve();
    const Sign s = parse_sign(sign);
    oracle::SolverConfig cfg = config;
    if (points_opt->count() && !half_width_opt->count()) {
      const auto balanced = oracle::SolverConfig::balanced(cfg.points);
      cfg.y_half_width = balanced.y_half_width;
    }
    const double gamma = witness::gamma_from_offset(c, s);
    const auto analytic = witness::probability_table(theta, gamma, eps1, eps2, g.quad_options());
    const auto grid = oracle::oracle_probability_table(theta, gamma, cfg, {eps1, eps2});

    Record rec;
    rec.meta = base_meta("verify", g);
    auto& in = rec.meta["inputs"];
    phase.echo(in);
    in["c"] = json_number(c);
    in["sign"] = sign_text(s);
    in["eps1"] = json_number(eps1);
    in["eps2"] = json_number(eps2);
    in["tol"] = json_number(tol);
    rec.meta["solver"] = Json::object();
    rec.meta["solver"]["points"] = cfg.points;
    rec.meta["solver"]["half_width"] = json_number(cfg.y_half_width);
    rec.meta["solver"]["steps_per_radian"] = cfg.steps_per_radian;
    rec.meta["solver"]["oversample"] = cfg.oversample;
    rec.meta["solver"]["momentum"] = json_number(cfg.momentum);

    rec.table.header = {"entry", "analytic", "oracle", "abs_diff"};
    double worst = 0.0;
    auto add = [&](const char* name, double a, double o) {
      worst = std::max(worst, std::abs(a - o));
      rec.table.rows.push_back(
          {name, format_number(a), format_number(o), format_number(std::abs(a - o))});
    };
    const auto P = witness::index(Sign::Plus);
    const auto M = witness::index(Sign::Minus);
    add("pQ_plus", analytic.pQ[P], grid.pQ[P]);
    add("pQ_minus", analytic.pQ[M], grid.pQ[M]);
    add("pR_plus", analytic.pR[P], grid.pR[P]);
    add("pR_minus", analytic.pR[M], grid.pR[M]);
    add("joint_pp", analytic.joint[P][P], grid.joint[P][P]);
    add("joint_pm", analytic.joint[P][M], grid.joint[P][M]);
    add("joint_mp", analytic.joint[M][P], grid.joint[M][P]);
    add("joint_mm", analytic.joint[M][M], grid.joint[M][M]);
    rec.meta["max_discrepancy"] = json_number(worst);
    rec.meta["passed"] = worst <= tol;
    return rec;
  }
};

struct DimensionalCmd {
  double mass = 0.0;
  double omega = 0.0;
  double p0 = 0.0;
  double t2 = 0.0;
  double beta2 = 0.0;
  double c = std::numbers::sqrt2;
  std::string sign = "+";
  double eps1 = 0.0;
  double eps2 = 0.0;
  double hbar = witness::kHbar;
  CLI::Option* beta2_opt = nullptr;
  CLI::Option* c_opt = nullptr;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("dimensional", "Witnesses from SI inputs");
    cmd->add_option("--mass", mass, "Mass in kg")->required();
    cmd->add_option("--omega", omega, "Trap angular frequency in rad/s")->required();
    cmd->add_option("--p0", p0, "Initial peak momentum in kg m/s")->capture_default_str();
    cmd->add_option("--t2", t2, "Second measurement time in s")->required();
    beta2_opt = cmd->add_option("--beta2", beta2, "Second boundary position in m");
    c_opt = cmd->add_option("--c", c, "Build beta2 c standard deviations from the peak instead");
    cmd->add_option("--sign", sign, "Side of the peak when using --c (+ or -)")
        ->capture_default_str();
    cmd->add_option("--eps1", eps1, "First boundary offset in m")->capture_default_str();
    cmd->add_option("--eps2", eps2, "Second boundary offset in m")->capture_default_str();
    cmd->add_option("--hbar", hbar, "Reduced Planck constant in J s")->capture_default_str();
    beta2_opt->excludes(c_opt);
  }

  Record run(const Globals& g) const {
    witness::OscillatorParams params{mass, omega, p0, hbar};
    const Sign s = parse_sign(sign);
    const double b2 =
        beta2_opt->count() ? beta2 : witness::beta2_from_offset(params, t2, c, s);
    const auto report = witness::witness_dimensional(params, t2, b2, eps1, eps2, g.quad_options());
    Record rec = witness_record("dimensional", g, report);
    auto& in = rec.meta["inputs"];
    in["mass"] = json_number(mass);
    in["omega"] = json_number(omega);
    in["p0"] = json_number(p0);
    in["t2"] = json_number(t2);
    in["beta2"] = json_number(b2);
    if (!beta2_opt->count()) {
      in["c"] = json_number(c);
      in["sign"] = sign_text(s);
    }
    in["eps1"] = json_number(eps1);
    in["eps2"] = json_number(eps2);
    in["hbar"] = json_number(hbar);
    return rec;
  }
};

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Overflow:
    case ErrorKind::QuadratureFailure:
    case ErrorKind::NormDrift:
      return kExitComputation;
    default:
      return kExitUsage;
  }
}

}  // namespace

std::string version() { return MACROREALISM_VERSION; }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Macrorealism witnesses for a harmonically trapped coherent state", "mrwitness"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--out", g.out, "Write to this file instead of standard output");
  app.add_option("--abs-tol", g.abs_tol, "Absolute quadrature tolerance per integral")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  Table1Cmd table1;
  WitnessCmd witness_cmd;
  SweepCmd sweep;
  HeatmapCmd heatmap;
  AverageCmd average;
  DensitiesCmd densities;
  FeasibilityCmd feasibility_cmd;
  VerifyCmd verify;
  DimensionalCmd dimensional;
  table1.add(app);
  witness_cmd.add(app);
  sweep.add(app);
  heatmap.add(app);
  average.add(app);
  densities.add(app);
  feasibility_cmd.add(app);
  verify.add(app);
  dimensional.add(app);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    Record rec;
    if (name == "table1") rec = table1.run(g);
    else if (name == "witness") rec = witness_cmd.run(g);
    else if (name == "sweep") rec = sweep.run(g);
    else if (name == "heatmap") rec = heatmap.run(g);
    else if (name == "average") rec = average.run(g);
    else if (name == "densities") rec = densities.run(g);
    else if (name == "feasibility") rec = feasibility_cmd.run(g);
    else if (name == "verify") rec = verify.run(g);
    else rec = dimensional.run(g);
    emit(rec, g, out);
    if (name == "verify" && !rec.meta["passed"].get<bool>()) {
      err << "mrwitness: verification failed: max discrepancy "
          << format_number(rec.meta["max_discrepancy"].get<double>()) << " > tol "
          << format_number(verify.tol) << "\n";
      return kExitVerification;
    }
    return kExitOk;
  } catch (const UsageError& e) {
    err << "mrwitness: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "mrwitness: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "mrwitness: " << e.what() << "\n";
    return kExitComputation;
  }
}

}  // namespace macrorealism::cli

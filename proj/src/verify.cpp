#include "contmech/verify.hpp"

#include "contmech/connection.hpp"
#include "contmech/dynamics.hpp"
#include "contmech/io.hpp"
#include "contmech/metric.hpp"
#include "contmech/variation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

namespace contmech::verify {

using config::ConfigError;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

BodyGrid unit_grid(const Resolution& r) { return BodyGrid(0.0, 1.0, r.n_nodes); }

Configuration identity(const BodyGrid& g, double eps) {
  return Configuration(ScalarField::sample(g, [](double x) { return x; }), eps);
}

double christoffel_symmetry(const Resolution& r) {
  const BodyGrid g = unit_grid(r);
  std::mt19937_64 rng(r.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < r.trials; ++trial) {
    double a[3];
    for (double& ak : a) ak = u(rng);
    const double sign = u(rng) < 0.0 ? -1.0 : 1.0;
    const Configuration phi(ScalarField::sample(g,
                                                [&](double x) {
                                                  double s = x;
                                                  for (int k = 0; k < 3; ++k)
                                                    s += a[k] * std::sin((k + 1) * kPi * x) /
                                                         (12.0 * (k + 1) * kPi);
                                                  return sign * s;
                                                }),
                            r.eps);
    std::vector<double> hv(g.size()), kv(g.size());
    for (auto& v : hv) v = u(rng);
    for (auto& v : kv) v = u(rng);
    const Section h = Section::free(ScalarField(g, hv));
    const Section k = Section::free(ScalarField(g, kv));
    worst = std::max(worst, (christoffel(phi, h, k) - christoffel(phi, k, h)).max_abs());
  }
  return worst;
}

double metric_compat(const Resolution& r) {
  const BodyGrid g = unit_grid(r);
  const auto mode = SupportMode::compact;
  const PathOnQ path = sample_path(
      g, {0.0, 1.0}, r.knots(),
      [](double t, double x) { return x + 0.2 * t * t * std::sin(kPi * x); }, mode,
      r.band_width, r.eps);
  const AlongPath v = sample_along(
      path,
      [](double t, double x) { return std::pow(std::sin(kPi * x), 2) * std::cos(t); }, mode,
      r.band_width);
  const AlongPath w = sample_along(
      path,
      [](double t, double x) {
        return std::sin(kPi * x) * std::sin(2.0 * kPi * x) * (1.0 + t * t);
      },
      mode, r.band_width);
  const AlongPath dv = covariant_derivative_along(path, v);
  const AlongPath dw = covariant_derivative_along(path, w);
  const auto& seg = path.segments().front();
  const std::size_t m = seg.knots();
  std::vector<double> gvw(m);
  for (std::size_t j = 0; j < m; ++j)
    gvw[j] = metric(seg.samples[j], v.segments[0][j], w.segments[0][j]);
  double worst = 0.0;
  for (std::size_t j = 2; j + 2 < m; ++j) {
    const double ddt = (gvw[j + 1] - gvw[j - 1]) / (2.0 * seg.dt());
    const double rhs = metric(seg.samples[j], dv.segments[0][j], w.segments[0][j]) +
                       metric(seg.samples[j], v.segments[0][j], dw.segments[0][j]);
    worst = std::max(worst, std::abs(ddt - rhs));
  }
  return worst;
}

double first_variation(const Resolution& r) {
  const auto errs =
      first_variation_errors(r.n_nodes, r.knots(), 0.64 * r.dt, r.trials, r.seed);
  return *std::max_element(errs.begin(), errs.end());
}

ForceModel bump_force() { return ForceModel(ForceModel::SpatialBump{0.1, 0.5, 0.1}); }

Trajectory forced_run(const Resolution& r) {
  const BodyGrid g = unit_grid(r);
  const State init{0.0, identity(g, r.eps), Section::pinned(ScalarField::zeros(g), r.band_width)};
  return simulate(init, bump_force(), 1.0, r.dt, Scheme::rk4, SupportMode::compact);
}

double motion(const Resolution& r) {
  return motion_residual(forced_run(r).to_path(), bump_force(), r.trials, r.seed);
}

// Same run with a smooth non-geodesic bump added in the interior of [0, 1].
double motion_perturbed(const Resolution& r) {
  const PathOnQ path = forced_run(r).to_path();
  AlongPath bump = sample_along(
      path,
      [](double t, double x) {
        return 0.01 * std::sin(kPi * t) * std::exp(-(x - 0.4) * (x - 0.4) / 0.02);
      },
      SupportMode::compact, r.band_width);
  const Variation var(path, std::move(bump), 1.0);
  return motion_residual(var.at(1.0), bump_force(), r.trials, r.seed);
}

double energy_drift(const Resolution& r) {
  const BodyGrid g = unit_grid(r);
  const State init{
      0.0, identity(g, r.eps),
      Section::pinned(ScalarField::sample(
                          g, [](double x) { return 0.005 * std::exp(-(x - 0.5) * (x - 0.5) / 0.02); }),
                      r.band_width)};
  return relative_energy_drift(
      simulate(init, ForceModel::zero(), 1.0, r.dt, Scheme::rk4, SupportMode::compact));
}

double flux_defect(const Resolution& r) {
  const BodyGrid g = unit_grid(r);
  const State init{0.0, identity(g, r.eps),
                   Section::free(ScalarField::sample(g, [](double x) { return x / 3.0; }))};
  return flux_balance_defect(
      simulate(init, ForceModel::zero(), 1.0, r.dt, Scheme::rk4, SupportMode::free), 0.1, 1.0);
}

} // namespace

std::size_t Resolution::knots() const {
  return static_cast<std::size_t>(std::llround(1.0 / dt)) + 1;
}

Resolution Resolution::refined(int levels) const {
  Resolution r = *this;
  r.n_nodes = (n_nodes - 1) * (std::size_t{1} << levels) + 1;
  r.dt = dt / static_cast<double>(1 << levels);
  return r;
}

Resolution resolution(const config::RunConfig& cfg) {
  const double steps = 1.0 / cfg.time.dt;
  const double whole = std::round(steps);
  if (std::abs(steps - whole) > 1e-9 * steps || std::fmod(whole, 2.0) != 0.0)
    throw ConfigError("time.dt", "verify needs dt dividing [0, 1] into an even number of steps");
  return Resolution{static_cast<std::size_t>(cfg.grid.n_nodes),
                    1.0 / whole,
                    static_cast<std::size_t>(cfg.grid.band_width),
                    cfg.grid.eps_emb,
                    static_cast<int>(cfg.verify.trials),
                    cfg.verify.seed};
}

std::optional<double> observed_order(double coarse, double fine) {
  if (!(coarse > 0.0) || !(fine > 0.0) || !std::isfinite(coarse) || !std::isfinite(fine))
    return std::nullopt;
  return std::log2(coarse / fine);
}

SuiteResult run_suite(const std::string& name, const Resolution& res, double tolerance) {
  SuiteResult out{name, 0.0, tolerance, std::nullopt, false};
  auto with_order = [&](double (*fn)(const Resolution&)) {
    out.residual = fn(res);
    const double fine = fn(res.refined());
    out.order = observed_order(out.residual, fine);
    out.detail["refined_residual"] = fine;
  };
  if (name == "christoffel_symmetry") {
    out.residual = christoffel_symmetry(res);
  } else if (name == "metric_compat") {
    with_order(metric_compat);
  } else if (name == "first_variation") {
    with_order(first_variation);
    out.detail["s_h"] = 0.64 * res.dt;
  } else if (name == "motion_residual") {
    with_order(motion);
    const double perturbed = motion_perturbed(res);
    out.detail["perturbed_residual"] = perturbed;
    out.detail["perturbed_ratio"] = out.residual > 0.0 ? perturbed / out.residual : INFINITY;
  } else if (name == "energy_conservation") {
    with_order(energy_drift);
  } else if (name == "flux_balance") {
    with_order(flux_defect);
  } else {
    throw ConfigError("verify.suites", "unknown suite '" + name + "'");
  }
  out.pass = out.residual <= tolerance;
  return out;
}

std::vector<SuiteResult> run_all(const config::RunConfig& cfg) {
  const Resolution res = resolution(cfg);
  std::vector<SuiteResult> results;
  for (const auto& name : cfg.verify.suites)
    results.push_back(run_suite(name, res, cfg.verify.tolerances.at(name)));
  return results;
}

json report(const std::vector<SuiteResult>& results, const Resolution& res) {
  json suites = json::array();
  bool all = true;
  for (const auto& r : results) {
    json j = {{"name", r.name},
              {"residual", r.residual},
              {"tolerance", r.tolerance},
              {"pass", r.pass}};
    j["order"] = r.order ? json(*r.order) : json(nullptr);
    if (!r.detail.empty()) j["detail"] = r.detail;
    suites.push_back(std::move(j));
    all = all && r.pass;
  }
  return {{"resolution",
           {{"n_nodes", res.n_nodes},
            {"dt", res.dt},
            {"band_width", res.band_width},
            {"trials", res.trials},
            {"seed", res.seed}}},
          {"tests", suites},
          {"pass", all}};
}

std::vector<NamedPath> first_variation_paths(std::size_t n_nodes, std::size_t knots) {
  if (knots < 5 || knots % 2 == 0)
    throw ConstructionError("knots", "must be odd and at least 5");
  const BodyGrid g(0.0, 1.0, n_nodes);
  const std::size_t half = (knots + 1) / 2;
  std::vector<NamedPath> out;
  out.push_back({"translation",
                 sample_path(g, {0.0, 1.0}, knots, [](double t, double x) { return x + 0.5 * t; })});
  out.push_back({"scaling", sample_path(g, {0.0, 1.0}, knots, [](double t, double x) {
                   return x * std::cbrt(1.0 + t);
                 })});
  out.push_back({"uniform_acceleration",
                 sample_path(g, {0.0, 1.0}, knots, [](double t, double x) { return x + t * t; })});
  out.push_back({"interior_acceleration", sample_path(g, {0.0, 1.0}, knots, [](double t, double x) {
                   return x + 0.2 * t * t * std::sin(kPi * x);
                 })});
  out.push_back({"translation_kink",
                 sample_path(g, {0.0, 0.5, 1.0}, half, [](double t, double x) {
                   return t <= 0.5 ? x + 0.5 * t : x + 0.25 - 0.3 * (t - 0.5);
                 })});
  out.push_back({"stretch_kink", sample_path(g, {0.0, 0.5, 1.0}, half, [](double t, double x) {
                   if (t <= 0.5) return x * (1.0 + 0.5 * t) + 0.1 * t * std::sin(kPi * x);
                   const double s = t - 0.5;
                   return x * (1.25 + 0.2 * s * s) + 0.05 * std::sin(kPi * x) +
                          0.1 * s * std::sin(2.0 * kPi * x) * x;
                 })});
  return out;
}

std::vector<double> first_variation_errors(std::size_t n_nodes, std::size_t knots,
                                           double s_h, int fields, std::uint64_t seed) {
  std::vector<double> out;
  for (const auto& [name, path] : first_variation_paths(n_nodes, knots)) {
    const PathKinematics kin = kinematics(path);
    double worst = 0.0;
    for (int f = 0; f < fields; ++f) {
      std::mt19937_64 rng(seed + static_cast<std::uint64_t>(f));
      AlongPath v = random_field(path, rng, /*proper=*/false);
      const double norm = path_norm(path, v);
      for (auto& row : v.segments)
        for (auto& sec : row) sec = sec.with_values((1.0 / norm) * sec.field());
      const double rhs = first_variation_terms(path, kin, v).total();
      const Variation var(path, std::move(v), 2.0 * s_h);
      worst = std::max(worst, std::abs(dE_ds_fd(var, s_h) - rhs));
    }
    out.push_back(worst);
  }
  return out;
}

std::vector<ConvergenceRow> convergence(const config::RunConfig& cfg, int levels) {
  if (levels < 1) throw ConfigError("levels", "must be at least 1");
  const std::string& preset = cfg.initial.preset;
  if (preset != "translation" && preset != "scaling")
    throw ConfigError("initial.preset",
                      "convergence needs an analytic case (translation, scaling), got '" +
                          preset + "'");
  const auto exact = config::analytic_solution(cfg);
  if (!exact)
    throw ConfigError("force.kind",
                      "convergence needs zero force and boundary_mode free");
  std::vector<ConvergenceRow> rows;
  for (int level = 0; level < levels; ++level) {
    config::RunConfig c = cfg;
    c.grid.n_nodes = (cfg.grid.n_nodes - 1) * (1LL << level) + 1;
    c.time.dt = cfg.time.dt / static_cast<double>(1LL << level);
    const Trajectory traj = simulate(config::initial_state(c), config::build_force(c),
                                     c.time.t_end, c.time.dt, c.time.scheme, c.boundary_mode);
    double err = 0.0;
    for (const auto& s : traj.states) {
      const auto& g = s.phi.grid();
      for (std::size_t i = 0; i < g.size(); ++i)
        err = std::max(err, std::abs(s.phi.field()[i] - (*exact)(s.t, g.node(i))));
    }
    ConvergenceRow row{level, config::build_grid(c).spacing(), c.time.dt, err, std::nullopt};
    if (!rows.empty()) row.order = observed_order(rows.back().error, err);
    rows.push_back(row);
  }
  return rows;
}

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows) {
  os << "level,h,dt,error,observed_order\n";
  for (const auto& r : rows)
    os << r.level << ',' << io::format_double(r.h) << ',' << io::format_double(r.dt) << ','
       << io::format_double(r.error) << ',' << (r.order ? io::format_double(*r.order) : "")
       << '\n';
}

} // namespace contmech::verify

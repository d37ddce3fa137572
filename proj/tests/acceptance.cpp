// Acceptance checks: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include "contmech/config.hpp"
#include "contmech/connection.hpp"
#include "contmech/dynamics.hpp"
#include "contmech/metric.hpp"
#include "contmech/run.hpp"
#include "contmech/variation.hpp"
#include "contmech/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

using namespace contmech;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool pass = o.pass;
  if (budget_s > 0.0 && secs > budget_s) {
    pass = false;
    o.detail += fmt(" over budget %.0fs", budget_s);
  }
  if (!pass) ++failures;
  std::printf("%s C%d %s: %s [%.2fs]\n", pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
  std::fflush(stdout);
}

Configuration identity(const BodyGrid& g) {
  return Configuration(ScalarField::sample(g, [](double x) { return x; }));
}

Outcome christoffel_triples() {
  const BodyGrid g(1.0, 2.0, 201);
  using F = double (*)(double);
  struct Triple {
    F phi, h, k, gamma;
  };
  const Triple triples[] = {
      {[](double x) { return x; }, [](double x) { return x; }, [](double x) { return x; },
       [](double x) { return -2.0 * x; }},
      {[](double x) { return 2.0 * x; }, [](double x) { return x; }, [](double) { return 1.0; },
       [](double) { return -0.5; }},
      {[](double x) { return x * x; }, [](double x) { return x; }, [](double x) { return x * x; },
       [](double x) { return -1.5 * x; }},
      {[](double x) { return -x; }, [](double x) { return x * x; }, [](double x) { return 1.0 - x; },
       [](double x) { return 2.0 * x - 3.0 * x * x; }},
      {[](double x) { return 3.0 * x + 0.5 * x * x; }, [](double x) { return x - 0.5; },
       [](double x) { return x + x * x; },
       [](double x) { return -(6.0 * x * x + 2.0 * x - 1.0) / (2.0 * (x + 3.0)); }},
  };
  double worst = 0.0;
  bool symmetric = true;
  for (const auto& tr : triples) {
    const Configuration phi(ScalarField::sample(g, tr.phi));
    const Section h = Section::free(ScalarField::sample(g, tr.h));
    const Section k = Section::free(ScalarField::sample(g, tr.k));
    const ScalarField hk = christoffel(phi, h, k), kh = christoffel(phi, k, h);
    for (std::size_t i = 1; i + 1 < g.size(); ++i)
      worst = std::max(worst, std::abs(hk[i] - tr.gamma(g.node(i))));
    symmetric = symmetric && hk == kh;
  }
  return {worst <= 1e-10 && symmetric,
          fmt("max interior error %.2e (<= 1e-10), symmetry %s", worst, symmetric ? "bitwise" : "broken")};
}

double max_deviation(const Trajectory& traj, const std::function<double(double, double)>& exact) {
  double err = 0.0;
  for (const auto& s : traj.states) {
    const BodyGrid& g = s.phi.grid();
    for (std::size_t i = 0; i < g.size(); ++i)
      err = std::max(err, std::abs(s.phi.field()[i] - exact(s.t, g.node(i))));
  }
  return err;
}

Outcome geodesic_oracles() {
  const BodyGrid g(0.0, 1.0, 201);
  const State trans{0.0, identity(g), Section::free(ScalarField::constant(g, 0.5))};
  const double e_trans = max_deviation(simulate(trans, ForceModel::zero(), 1.0, 1e-3),
                                       [](double t, double x) { return x + 0.5 * t; });
  const State scal{0.0, identity(g),
                   Section::free(ScalarField::sample(g, [](double x) { return x / 3.0; }))};
  const double e_scal = max_deviation(simulate(scal, ForceModel::zero(), 1.0, 1e-3),
                                      [](double t, double x) { return x * std::cbrt(1.0 + t); });

  const auto cfg = config::parse({{"grid", {{"n_nodes", 11}}},
                                  {"time", {{"t_end", 1.0}, {"dt", 0.1}}},
                                  {"initial", {{"preset", "scaling"}}}});
  const auto rows = verify::convergence(cfg, 3);
  bool orders_ok = rows.size() == 3;
  std::string orders;
  for (const auto& r : rows) {
    if (!r.order) continue;
    orders += fmt(" %.3f", *r.order);
    orders_ok = orders_ok && std::abs(*r.order - 4.0) <= 0.3;
  }
  return {e_trans <= 1e-10 && e_scal <= 1e-8 && orders_ok,
          fmt("translation %.2e (<= 1e-10), scaling %.2e (<= 1e-8), temporal orders%s (4 +- 0.3)", e_trans,
              e_scal, orders.c_str())};
}

Outcome energy_conservation() {
  const auto r = verify::run_suite("energy_conservation", {201, 1e-3, 1, kDefaultEmbeddingThreshold, 1, 0}, 1e-6);
  const double ratio = r.order ? std::exp2(*r.order) : 0.0;
  return {r.residual <= 1e-6 && ratio >= 4.0,
          fmt("relative drift %.3e (<= 1e-6), refinement ratio %.6f (>= 4)", r.residual, ratio)};
}

Outcome flux_balance() {
  const auto r = verify::run_suite("flux_balance", {201, 1e-3, 1, kDefaultEmbeddingThreshold, 1, 0}, 1e-6);
  const double order = r.order.value_or(0.0);
  return {order >= 2.0, fmt("defect %.3e over [0.1, 1], observed order %.6f (>= 2)", r.residual, order)};
}

Outcome first_variation() {
  const int levels = 4;
  std::vector<std::vector<double>> errs;
  for (int l = 0; l < levels; ++l) {
    const std::size_t scale = std::size_t{1} << l;
    errs.push_back(verify::first_variation_errors(100 * scale + 1, 400 * scale + 1, 0.0016 / scale, 10, 1000));
  }
  const auto names = verify::first_variation_paths(11, 5);
  bool ok = true;
  double finest = 0.0, lo = 1e9, hi = -1e9;
  std::string worst_path;
  for (std::size_t p = 0; p < errs[0].size(); ++p) {
    const auto order = verify::observed_order(errs[levels - 2][p], errs[levels - 1][p]);
    const double o = order.value_or(0.0);
    lo = std::min(lo, o);
    hi = std::max(hi, o);
    if (errs[levels - 1][p] > finest) {
      finest = errs[levels - 1][p];
      worst_path = names[p].name;
    }
    ok = ok && std::abs(o - 2.0) <= 0.3 && errs[levels - 1][p] < 1e-6;
  }
  return {ok, fmt("6 paths x 10 fields, orders in [%.3f, %.3f] (2 +- 0.3), finest max error %.2e on %s (< 1e-6)",
                  lo, hi, finest, worst_path.c_str())};
}

Outcome motion_residual_check() {
  const auto r = verify::run_suite("motion_residual", {201, 1e-3, 1, kDefaultEmbeddingThreshold, 20, 2024}, 1e-4);
  const double order = r.order.value_or(0.0);
  const double ratio = r.detail.value("perturbed_ratio", 0.0);
  return {r.residual <= 1e-4 && order >= 2.0 && ratio >= 1e3,
          fmt("residual %.3e (<= 1e-4), observed order %.6f (>= 2), perturbed/converged %.3e (>= 1e3)",
              r.residual, order, ratio)};
}

Outcome transport() {
  const BodyGrid g(0.0, 1.0, 10001);
  const double speed = 0.1;
  auto bump = [](double x) { return std::exp(-(x - 0.45) * (x - 0.45) / (2.0 * 0.08 * 0.08)); };
  const PathOnQ path = sample_path(g, {0.0, 1.0}, 1001, [&](double t, double x) { return x + speed * t; },
                                   SupportMode::compact);
  const Section v0 = Section::pinned(ScalarField::sample(g, bump));
  const AlongPath v = parallel_transport(path, v0);
  const auto& seg = path.segments()[0];
  const double n0 = metric(seg.samples[0], v0, v0);
  double err = 0.0, drift = 0.0;
  for (std::size_t j = 0; j < seg.knots(); ++j) {
    const double t = seg.time(j);
    const Section& s = v.segments[0][j];
    for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(s[i] - bump(g.node(i) - speed * t)));
    drift = std::max(drift, std::abs(metric(seg.samples[j], s, s) / n0 - 1.0));
  }
  return {err <= 1e-6 && drift <= 1e-6,
          fmt("characteristics error %.3e (<= 1e-6), relative norm drift %.3e (<= 1e-6)", err, drift)};
}

Outcome embedding_guard() {
  const auto cfg = config::parse({{"grid", {{"n_nodes", 201}}},
                                  {"time", {{"t_end", 1.0}, {"dt", 1e-3}}},
                                  {"initial", {{"preset", "compressive_ramp"}, {"params", {{"k", 2.0}}}}},
                                  {"boundary_mode", "free"}});
  const fs::path dir = fs::temp_directory_path() / "contmech_acceptance_ramp";
  fs::remove_all(dir);
  const RunOutcome out = run_simulation(cfg, dir);

  double min_slope = INFINITY;
  for (const auto& d : out.trajectory.diagnostics) min_slope = std::min(min_slope, d.min_phi_x);

  std::ifstream in(dir / "trajectory.csv");
  std::string line;
  std::getline(in, line);
  bool well_formed = line == "t,kinetic,flux,min_phi_x";
  std::size_t rows = 0;
  double last_t = -1.0, csv_min = INFINITY;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string cell;
    std::vector<double> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(std::stod(cell));
    well_formed = well_formed && cells.size() == 4 && cells[0] > last_t &&
                  std::all_of(cells.begin(), cells.end(), [](double c) { return std::isfinite(c); });
    if (cells.size() == 4) {
      last_t = cells[0];
      csv_min = std::min(csv_min, cells[3]);
    }
    ++rows;
  }
  well_formed = well_formed && rows == out.trajectory.states.size() && rows > 1;
  std::ifstream manifest(dir / "manifest.json");
  const auto m = nlohmann::json::parse(manifest);
  const bool aborted = out.aborted && m["run"]["status"] == "aborted";
  const double eps = cfg.grid.eps_emb;
  fs::remove_all(dir);
  return {aborted && well_formed && min_slope >= eps && csv_min >= eps,
          fmt("aborted %s at t=%.4f, %zu rows flushed, min |phi_x| recorded %.3e (>= %.0e), csv %s",
              aborted ? "yes" : "no", last_t, rows, std::min(min_slope, csv_min), eps,
              well_formed ? "well-formed" : "malformed")};
}

} // namespace

int main() {
  criterion(1, "christoffel closed forms", 1.0, christoffel_triples);
  criterion(2, "geodesic oracles", 30.0, geodesic_oracles);
  criterion(3, "energy conservation", 0.0, energy_conservation);
  criterion(4, "free-boundary flux balance", 0.0, flux_balance);
  criterion(5, "first variation formula", 60.0, first_variation);
  criterion(6, "variational characterization", 0.0, motion_residual_check);
  criterion(7, "metric compatibility and transport", 0.0, transport);
  criterion(8, "embedding guard", 0.0, embedding_guard);
  std::printf("%s: %d of 8 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}

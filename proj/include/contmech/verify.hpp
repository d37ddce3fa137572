#pragma once

// Verification suites and convergence studies driven by a run configuration.
// Every suite runs a fixed scenario on B = (0, 1), t in [0, 1], at the
// configured n_nodes and dt, and once more with h and dt halved to estimate
// an observed order.

#include "contmech/config.hpp"
#include "contmech/path.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace contmech::verify {

struct Resolution {
  std::size_t n_nodes;
  double dt;
  std::size_t band_width;
  double eps;
  int trials;
  std::uint64_t seed;

  std::size_t knots() const; ///< 1/dt + 1
  Resolution refined(int levels = 1) const;
};

/// Throws config::ConfigError unless dt divides [0, 1] into an even number of
/// steps.
Resolution resolution(const config::RunConfig& cfg);

struct SuiteResult {
  std::string name;
  double residual;
  double tolerance;
  std::optional<double> order;
  bool pass;
  nlohmann::json detail = nlohmann::json::object();
};

SuiteResult run_suite(const std::string& name, const Resolution& res, double tolerance);
std::vector<SuiteResult> run_all(const config::RunConfig& cfg);
nlohmann::json report(const std::vector<SuiteResult>& results, const Resolution& res);

/// log2(coarse / fine); empty unless both are positive and finite.
std::optional<double> observed_order(double coarse, double fine);

struct NamedPath {
  std::string name;
  PathOnQ path;
};

/// Two geodesics, two smooth non-geodesic paths and two paths with one
/// velocity jump at t = 1/2, on B = (0, 1), t in [0, 1]. `knots` counts the
/// whole interval and must be odd.
std::vector<NamedPath> first_variation_paths(std::size_t n_nodes, std::size_t knots);

/// For each path, max over `fields` unit-norm non-proper random fields (field
/// f seeded with seed + f) of |dE_ds_fd - first_variation_rhs|.
std::vector<double> first_variation_errors(std::size_t n_nodes, std::size_t knots,
                                           double s_h, int fields, std::uint64_t seed);

struct ConvergenceRow {
  int level;
  double h;
  double dt;
  double error;
  std::optional<double> order;
};

/// Halves h and dt `levels - 1` times starting from the configured grid and
/// step; error is the max nodal deviation from the closed-form solution over
/// every recorded state. Needs the translation or scaling preset with zero
/// force in free mode.
std::vector<ConvergenceRow> convergence(const config::RunConfig& cfg, int levels);
void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows);

} // namespace contmech::verify

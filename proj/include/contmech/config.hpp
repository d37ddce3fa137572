#pragma once

// Run configuration: strict JSON parsing, defaults, and construction of the
// grid, initial state and force model it describes.

#include "contmech/dynamics.hpp"
#include "contmech/grid.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace contmech::config {

/// A rejected configuration; path() is the dotted key, e.g. "grid.n_nodes".
class ConfigError : public std::invalid_argument {
public:
  ConfigError(std::string path, const std::string& what)
      : std::invalid_argument(path.empty() ? what : path + ": " + what),
        path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
};

struct GridSpec {
  double x_min = 0.0;
  double x_max = 1.0;
  long long n_nodes = 201;
  double eps_emb = kDefaultEmbeddingThreshold;
  long long band_width = 1;
};

struct TimeSpec {
  double t_end = 1.0;
  double dt = 1e-3;
  Scheme scheme = Scheme::rk4;
};

struct InitialSpec {
  std::string preset = "rest"; ///< "tabulated" when phi/v are given
  nlohmann::json params = nlohmann::json::object();
  std::vector<double> phi;
  std::vector<double> v;
};

struct ForceSpec {
  std::string kind = "zero";
  nlohmann::json params = nlohmann::json::object();
  double force_coefficient = 1.0;
  std::vector<double> times;
  std::vector<std::vector<double>> fields;
};

struct OutputSpec {
  std::string directory = "out";
  long long snapshot_every = 100;
  std::vector<std::string> formats{"trajectory", "diagnostics", "snapshots", "fields"};
};

struct VerifySpec {
  std::vector<std::string> suites;
  long long trials = 10;
  std::uint64_t seed = 1234;
  std::map<std::string, double> tolerances;
};

struct RunConfig {
  GridSpec grid;
  TimeSpec time;
  InitialSpec initial;
  ForceSpec force;
  SupportMode boundary_mode = SupportMode::compact;
  OutputSpec outputs;
  VerifySpec verify;
};

const std::vector<std::string>& preset_names();
const std::vector<std::string>& force_kinds();
const std::vector<std::string>& suite_names();
const std::vector<std::string>& output_formats();

/// Fills every default; throws ConfigError with the offending key path.
RunConfig parse(const nlohmann::json& j);
/// Reads and parses a file; unreadable or malformed JSON is a ConfigError.
RunConfig load(const std::string& path);

/// The resolved configuration with every default explicit. parse(to_json(c))
/// reproduces c.
nlohmann::json to_json(const RunConfig& cfg);

BodyGrid build_grid(const RunConfig& cfg);
/// State at t = 0. Presets are pinned on the band in compact mode.
State initial_state(const RunConfig& cfg);
ForceModel build_force(const RunConfig& cfg);

/// Closed-form phi(t, x) for rest, translation and scaling under zero force
/// in free mode (rest in either mode); empty otherwise.
std::optional<std::function<double(double, double)>> analytic_solution(const RunConfig& cfg);

std::string to_string(Scheme s);
std::string to_string(SupportMode m);

} // namespace contmech::config

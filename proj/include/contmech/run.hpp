#pragma once

// The simulate command: integrate a configured run and write its artifacts.

#include "contmech/config.hpp"
#include "contmech/dynamics.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>

namespace contmech {

const char* version();

struct RunOutcome {
  Trajectory trajectory;
  bool aborted = false;
  std::optional<std::string> error;
  nlohmann::json manifest;
};

/// Writes into `out_dir` (created if missing):
///   trajectory.csv   t,kinetic,flux,min_phi_x
///   diagnostics.csv  t,kinetic,flux,power,drift,min_phi_x
///   phi.csv, v.csv   snapshot matrices every outputs.snapshot_every steps
///                    plus the last state
///   final_phi.csv, final_v.csv  last state as x,value
///   manifest.json    resolved config, version, status, analytic check
/// A singular state ends the run early; everything recorded up to it is
/// still written and the outcome is marked aborted.
RunOutcome run_simulation(const config::RunConfig& cfg, const std::filesystem::path& out_dir);

} // namespace contmech

#include "contmech/run.hpp"

#include "contmech/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#ifndef CONTMECH_VERSION
#define CONTMECH_VERSION "0.0.0"
#endif

namespace contmech {

using nlohmann::json;

const char* version() { return CONTMECH_VERSION; }

namespace {

bool wants(const config::RunConfig& cfg, const std::string& format) {
  const auto& f = cfg.outputs.formats;
  return std::find(f.begin(), f.end(), format) != f.end();
}

template <class Fn>
void write_file(const std::filesystem::path& path, Fn&& fn) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  fn(os);
  if (!os) throw std::runtime_error("write failed for " + path.string());
}

} // namespace

RunOutcome run_simulation(const config::RunConfig& cfg, const std::filesystem::path& out_dir) {
  const State init = config::initial_state(cfg);
  const ForceModel force = config::build_force(cfg);

  RunOutcome out;
  json status = {{"status", "completed"}};
  try {
    out.trajectory =
        simulate(init, force, cfg.time.t_end, cfg.time.dt, cfg.time.scheme, cfg.boundary_mode);
  } catch (const SimulationAborted& e) {
    out.trajectory = e.partial();
    out.aborted = true;
    out.error = e.what();
    status = {{"status", "aborted"},
              {"error",
               {{"message", e.what()}, {"time", e.time()}, {"node", e.node()}, {"slope", e.slope()}}}};
  }
  const Trajectory& traj = out.trajectory;

  std::filesystem::create_directories(out_dir);
  std::vector<std::string> files;
  if (wants(cfg, "trajectory")) {
    write_file(out_dir / "trajectory.csv", [&](std::ostream& os) { io::write_trajectory_csv(os, traj); });
    files.push_back("trajectory.csv");
  }
  if (wants(cfg, "diagnostics")) {
    write_file(out_dir / "diagnostics.csv", [&](std::ostream& os) { io::write_diagnostics_csv(os, traj); });
    files.push_back("diagnostics.csv");
  }
  if (wants(cfg, "snapshots") && cfg.outputs.snapshot_every > 0) {
    const auto every = static_cast<std::size_t>(cfg.outputs.snapshot_every);
    std::vector<double> times;
    std::vector<const ScalarField*> phi, v;
    for (std::size_t j = 0; j < traj.states.size(); ++j) {
      if (j % every != 0 && j + 1 != traj.states.size()) continue;
      times.push_back(traj.states[j].t);
      phi.push_back(&traj.states[j].phi.field());
      v.push_back(&traj.states[j].v.field());
    }
    const BodyGrid& grid = init.phi.grid();
    write_file(out_dir / "phi.csv", [&](std::ostream& os) { io::write_matrix_csv(os, grid, times, phi); });
    write_file(out_dir / "v.csv", [&](std::ostream& os) { io::write_matrix_csv(os, grid, times, v); });
    files.push_back("phi.csv");
    files.push_back("v.csv");
  }
  if (wants(cfg, "fields")) {
    const State& last = traj.states.back();
    write_file(out_dir / "final_phi.csv", [&](std::ostream& os) { io::write_field_csv(os, last.phi.field()); });
    write_file(out_dir / "final_v.csv", [&](std::ostream& os) { io::write_field_csv(os, last.v.field()); });
    files.push_back("final_phi.csv");
    files.push_back("final_v.csv");
  }

  json m;
  m["version"] = version();
  m["config"] = config::to_json(cfg);
  m["run"] = status;
  m["run"]["steps"] = traj.states.size() - 1;
  m["run"]["t_final"] = traj.states.back().t;
  m["run"]["kinetic_initial"] = traj.diagnostics.front().kinetic;
  m["run"]["kinetic_final"] = traj.diagnostics.back().kinetic;
  m["run"]["min_phi_x"] = std::min_element(traj.diagnostics.begin(), traj.diagnostics.end(),
                                           [](const Diagnostics& a, const Diagnostics& b) {
                                             return a.min_phi_x < b.min_phi_x;
                                           })->min_phi_x;
  if (const auto exact = config::analytic_solution(cfg)) {
    double worst = 0.0, final_err = 0.0;
    for (const auto& s : traj.states) {
      const auto& g = s.phi.grid();
      double e = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i)
        e = std::max(e, std::abs(s.phi.field()[i] - (*exact)(s.t, g.node(i))));
      worst = std::max(worst, e);
      final_err = e;
    }
    const double tol = cfg.verify.tolerances.at("analytic");
    m["analytic_check"] = {{"case", cfg.initial.preset},
                           {"max_error", worst},
                           {"final_error", final_err},
                           {"tolerance", tol},
                           {"pass", worst <= tol}};
  } else {
    m["analytic_check"] = nullptr;
  }
  files.push_back("manifest.json");
  m["files"] = files;
  write_file(out_dir / "manifest.json", [&](std::ostream& os) { os << m.dump(2) << '\n'; });
  out.manifest = std::move(m);
  return out;
}

} // namespace contmech

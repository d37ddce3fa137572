#include "contmech/config.hpp"
#include "contmech/errors.hpp"
#include "contmech/run.hpp"
#include "contmech/verify.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

enum Exit { kOk = 0, kValidation = 1, kNumerical = 2, kVerification = 3 };

int cmd_simulate(const std::string& config_path, const std::string& out) {
  auto cfg = contmech::config::load(config_path);
  if (!out.empty()) cfg.outputs.directory = out;
  const auto outcome = contmech::run_simulation(cfg, cfg.outputs.directory);
  const auto& run = outcome.manifest["run"];
  std::cout << "steps " << run["steps"].get<std::size_t>() << ", t_final "
            << run["t_final"].get<double>() << ", outputs in " << cfg.outputs.directory
            << '\n';
  if (const auto& check = outcome.manifest["analytic_check"]; !check.is_null())
    std::cout << "analytic " << check["case"].get<std::string>() << ": max error "
              << check["max_error"].get<double>() << (check["pass"].get<bool>() ? " (within" : " (exceeds")
              << " tolerance " << check["tolerance"].get<double>() << ")\n";
  if (outcome.aborted) {
    std::cerr << "error: " << *outcome.error << '\n';
    return kNumerical;
  }
  return kOk;
}

int cmd_verify(const std::string& config_path) {
  const auto cfg = contmech::config::load(config_path);
  const auto res = contmech::verify::resolution(cfg);
  const auto results = contmech::verify::run_all(cfg);
  const auto report = contmech::verify::report(results, res);
  std::cout << report.dump(2) << '\n';
  for (const auto& r : results)
    if (!r.pass)
      std::cerr << "FAIL " << r.name << ": residual " << r.residual << " > tolerance "
                << r.tolerance << '\n';
  return report["pass"].get<bool>() ? kOk : kVerification;
}

int cmd_convergence(const std::string& config_path, int levels) {
  const auto cfg = contmech::config::load(config_path);
  contmech::verify::write_convergence_csv(std::cout,
                                          contmech::verify::convergence(cfg, levels));
  return kOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate and verify motion of a one-dimensional continuum"};
  app.require_subcommand(1);
  app.set_version_flag("--version", contmech::version());

  std::string config_path, out;
  int levels = 3;
  auto* sim = app.add_subcommand("simulate", "integrate a configured run and write artifacts");
  sim->add_option("--config", config_path, "run configuration (JSON)")->required();
  sim->add_option("--out", out, "output directory, overriding outputs.directory");
  auto* ver = app.add_subcommand("verify", "run verification suites and print a JSON report");
  ver->add_option("--config", config_path, "run configuration (JSON)")->required();
  auto* conv = app.add_subcommand("convergence", "refinement study against a closed-form case");
  conv->add_option("--config", config_path, "run configuration (JSON)")->required();
  conv->add_option("--levels", levels, "number of refinement levels")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidation;
  }

  try {
    if (*sim) return cmd_simulate(config_path, out);
    if (*ver) return cmd_verify(config_path);
    return cmd_convergence(config_path, levels);
  } catch (const contmech::SingularStateError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  }
}

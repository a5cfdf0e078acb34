// stagesim command-line front end.
//   run     execute a scenario config and write CSV/DOT/JSON outputs
//   factor  print the finest factorization of a state file
//   jw      check the fermionic anticommutation relations
// Exit codes: 0 success, 1 runtime failure, 2 invalid arguments or config.

#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <stdexcept>
#include <string>

#include "stagesim/cosmo.hpp"
#include "stagesim/factorize.hpp"
#include "stagesim/io.hpp"
#include "stagesim/jw.hpp"
#include "stagesim/log.hpp"
#include "stagesim/version.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& out_dir,
            bool seed_set, std::uint64_t seed) {
  stagesim::ScenarioConfig config;
  try {
    config = stagesim::ScenarioConfig::from_file(config_path);
    if (seed_set) {
      config.seed = seed;
      config.validate();
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  try {
    stagesim::run_scenario_to_dir(config, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int cmd_factor(const std::string& state_path, double eps) {
  stagesim::StateVector state;
  try {
    state = stagesim::load_state_file(state_path);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  try {
    const stagesim::FactorPartition partition =
        stagesim::finest_factorization(state, eps);
    std::cout << stagesim::partition_to_json_string(partition);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int cmd_jw(int num_qubits) {
  stagesim::jw::CarReport report;
  try {
    report = stagesim::jw::verify_car(num_qubits);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cout << stagesim::jw::car_report_to_json_string(report);
  if (report.max_deviation_delta > 1e-12 ||
      report.max_deviation_zero > 1e-12) {
    std::cerr << "error: anticommutation relations violated\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stagesim: discrete quantum-jump universe simulator"};
  app.set_version_flag("--version", stagesim::kToolVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "stagesim_out";
  std::uint64_t seed = 0;
  auto* run_cmd =
      app.add_subcommand("run", "run a scenario and write its outputs");
  run_cmd->add_option("--config", config_path, "scenario config JSON file")
      ->required();
  run_cmd->add_option("--out", out_dir, "output directory");
  auto* seed_opt =
      run_cmd->add_option("--seed", seed, "override the config seed");

  std::string state_path;
  double eps = stagesim::kDefaultFactorEps;
  auto* factor_cmd = app.add_subcommand(
      "factor", "print the finest factorization of a state file");
  factor_cmd->add_option("--state", state_path, "state JSON file")->required();
  factor_cmd->add_option("--eps", eps, "purity tolerance");

  int jw_qubits = 0;
  auto* jw_cmd = app.add_subcommand(
      "jw", "verify the fermionic anticommutation relations");
  jw_cmd->add_option("--qubits", jw_qubits, "number of modes (2..12)")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run_cmd->parsed()) {
      return cmd_run(config_path, out_dir, seed_opt->count() > 0, seed);
    }
    if (factor_cmd->parsed()) return cmd_factor(state_path, eps);
    if (jw_cmd->parsed()) return cmd_jw(jw_qubits);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

// cosmo.hpp
// Canned whole-universe scenarios built on the jump engine, the factor
// lattice (causal DAG) extracted from a run's information content, and the
// file exporters (CSV summaries, DOT/JSON graphs, run manifest).

#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "stagesim/rules.hpp"
#include "stagesim/stages.hpp"

namespace stagesim {

struct ScenarioConfig {
  std::string scenario = "chaos";  // chaos|genesis|inflation|heatdeath|custom
  int num_qubits = 4;
  int steps = 10;
  std::uint64_t seed = 1;
  nlohmann::json params = nlohmann::json::object();

  static ScenarioConfig from_json(const nlohmann::json& j);
  static ScenarioConfig from_file(const std::string& path);
  nlohmann::json to_json() const;
  void validate() const;
};

struct ScenarioSetup {
  Stage initial;
  std::shared_ptr<const Rule> rule;
  std::string initial_ref;  // human-readable description of the start state
};

// Initial stage (with its time-0 partition snapshot) plus the rule.
ScenarioSetup build_scenario(const ScenarioConfig& config);

Trajectory run_scenario(const ScenarioConfig& config,
                        const StepObserver& observer = {});

// Directed graph of factor blocks over time: one node per (time, block),
// edges from the recorded ancestry.
struct FactorLattice {
  struct Node {
    int time = 0;
    int block = 0;
    QubitSet qubits;
  };

  std::vector<Node> nodes;
  std::vector<AncestryEdge> edges;

  // Every edge joins an existing node at t to one at t + 1.
  bool edges_consecutive_times() const;
  // Kahn's algorithm; true when no cycle exists.
  bool acyclic() const;
};

FactorLattice build_factor_lattice(const InformationContent& info);

// Builds the lattice from the trajectory's final information content and
// writes it as Graphviz DOT and as a JSON adjacency structure.
FactorLattice export_causal_dag(const Trajectory& traj,
                                const std::string& dot_path,
                                const std::string& json_path);

// n,N_n,kappa,outcome_labels,path_log_probability
void write_trajectory_csv(const Trajectory& traj, const std::string& path);
// n,N_n,kappa,min_cross_MI,max_block_entropy
void write_metrics_csv(const Trajectory& traj, const std::string& path);

// Runs CSV row digests (FNV-1a 64 of each data line, hex).
std::vector<std::string> trajectory_digests(const Trajectory& traj);

nlohmann::json make_manifest(const ScenarioConfig& config,
                             const Trajectory& traj,
                             const std::vector<std::string>& output_names,
                             const std::string& started,
                             const std::string& finished);

// Runs the scenario and writes trajectory.csv, metrics.csv, dag.dot,
// dag.json and manifest.json into out_dir. Returns the trajectory.
Trajectory run_scenario_to_dir(const ScenarioConfig& config,
                               const std::string& out_dir);

}  // namespace stagesim

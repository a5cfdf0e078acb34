#include "stagesim/cosmo.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "stagesim/log.hpp"
#include "stagesim/version.hpp"

namespace stagesim {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string now_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int param_int(const nlohmann::json& params, const char* key, int fallback) {
  if (!params.contains(key)) return fallback;
  if (!params[key].is_number_integer()) {
    throw std::invalid_argument(std::string("config: ") + key +
                                " must be an integer");
  }
  return params[key].get<int>();
}

std::string param_str(const nlohmann::json& params, const char* key,
                      const std::string& fallback) {
  if (!params.contains(key)) return fallback;
  if (!params[key].is_string()) {
    throw std::invalid_argument(std::string("config: ") + key +
                                " must be a string");
  }
  return params[key].get<std::string>();
}

std::vector<QubitSet> param_groups(const nlohmann::json& params,
                                   int num_qubits) {
  std::vector<QubitSet> groups;
  if (params.contains("groups")) {
    if (!params["groups"].is_array()) {
      throw std::invalid_argument("config: groups must be an array of arrays");
    }
    for (const auto& g : params["groups"]) {
      if (!g.is_array()) {
        throw std::invalid_argument("config: each group must be an array");
      }
      std::vector<int> qs;
      for (const auto& q : g) {
        if (!q.is_number_integer()) {
          throw std::invalid_argument("config: group entries must be ints");
        }
        qs.push_back(q.get<int>());
      }
      groups.emplace_back(std::move(qs));
    }
  } else {
    const int half = num_qubits / 2;
    groups.push_back(QubitSet::range(0, half));
    groups.push_back(QubitSet::range(half, num_qubits));
  }
  return groups;
}

constexpr int kMaxDenseScenarioQubits = 12;

}  // namespace

ScenarioConfig ScenarioConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw std::invalid_argument("config: expected a JSON object");
  }
  ScenarioConfig c;
  if (j.contains("scenario")) {
    if (!j["scenario"].is_string()) {
      throw std::invalid_argument("config: scenario must be a string");
    }
    c.scenario = j["scenario"].get<std::string>();
  }
  if (j.contains("num_qubits")) {
    if (!j["num_qubits"].is_number_integer()) {
      throw std::invalid_argument("config: num_qubits must be an integer");
    }
    c.num_qubits = j["num_qubits"].get<int>();
  }
  if (j.contains("steps")) {
    if (!j["steps"].is_number_integer()) {
      throw std::invalid_argument("config: steps must be an integer");
    }
    c.steps = j["steps"].get<int>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) {
      throw std::invalid_argument("config: seed must be an integer");
    }
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("params")) {
    if (!j["params"].is_object()) {
      throw std::invalid_argument("config: params must be an object");
    }
    c.params = j["params"];
  }
  c.validate();
  return c;
}

ScenarioConfig ScenarioConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: parse error: ") +
                                e.what());
  }
  return from_json(j);
}

nlohmann::json ScenarioConfig::to_json() const {
  nlohmann::json j;
  j["scenario"] = scenario;
  j["num_qubits"] = num_qubits;
  j["steps"] = steps;
  j["seed"] = seed;
  j["params"] = params;
  return j;
}

void ScenarioConfig::validate() const {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw std::invalid_argument("config: num_qubits outside [1, 20]");
  }
  if (steps < 1) throw std::invalid_argument("config: steps must be >= 1");
  if (scenario == "chaos" || scenario == "genesis") {
    if (num_qubits > kMaxDenseScenarioQubits) {
      throw std::invalid_argument(
          "config: " + scenario +
          " needs a dense full-register test operator; num_qubits <= 12");
    }
    if (scenario == "genesis" && param_int(params, "onset_step", 2) < 1) {
      throw std::invalid_argument("config: onset_step must be >= 1");
    }
  } else if (scenario == "heatdeath") {
    if (num_qubits < 2) {
      throw std::invalid_argument("config: heatdeath needs >= 2 qubits");
    }
    const int unlink = param_int(params, "unlink_step", 1);
    if (unlink < 1 || unlink >= steps) {
      throw std::invalid_argument(
          "config: unlink_step must satisfy 1 <= unlink_step < steps");
    }
    const auto groups = param_groups(params, num_qubits);
    if (groups.size() < 2) {
      throw std::invalid_argument("config: heatdeath needs >= 2 groups");
    }
    std::uint32_t seen = 0;
    for (const QubitSet& g : groups) {
      if (g.empty()) throw std::invalid_argument("config: empty group");
      g.validate(num_qubits);
      if (g.size() > kMaxDenseScenarioQubits) {
        throw std::invalid_argument("config: group larger than 12 qubits");
      }
      if (seen & g.mask()) throw std::invalid_argument("config: groups overlap");
      seen |= g.mask();
    }
    if (seen != (1u << num_qubits) - 1u) {
      throw std::invalid_argument("config: groups must cover the register");
    }
  } else if (scenario == "inflation") {
    // Dense operators stay small: blocks are halved before measuring.
  } else if (scenario == "custom") {
    const std::string rule = param_str(params, "rule", "fixed_z");
    if (rule != "fixed_z" && rule != "random_entangle" &&
        rule != "split_doubling") {
      throw std::invalid_argument("config: unknown custom rule " + rule);
    }
    if (rule == "random_entangle" && num_qubits > kMaxDenseScenarioQubits &&
        !params.contains("groups")) {
      throw std::invalid_argument(
          "config: random_entangle over the full register needs <= 12 qubits");
    }
    const std::string init = param_str(params, "initial", "haar");
    if (init != "haar" && init != "ghz" && init != "w" &&
        init.rfind("basis:", 0) != 0) {
      throw std::invalid_argument("config: unknown initial state " + init);
    }
  } else {
    throw std::invalid_argument("config: unknown scenario " + scenario);
  }
}

ScenarioSetup build_scenario(const ScenarioConfig& config) {
  config.validate();
  const int nq = config.num_qubits;
  ScenarioSetup setup;

  StateVector init;
  std::string init_ref;
  const std::string init_kind = config.scenario == "custom"
                                    ? param_str(config.params, "initial", "haar")
                                    : "haar";
  if (init_kind == "haar") {
    RngStream rng = RngStream::derive(config.seed, "init");
    init = StateVector::haar_random(nq, rng);
    init_ref = "haar(seed=" + std::to_string(config.seed) + ")";
  } else if (init_kind == "ghz") {
    init = StateVector::ghz(nq);
    init_ref = "ghz";
  } else if (init_kind == "w") {
    init = StateVector::w_state(nq);
    init_ref = "w";
  } else {
    const std::uint64_t index = std::stoull(init_kind.substr(6));
    init = StateVector::basis(nq, index);
    init_ref = init_kind;
  }

  std::shared_ptr<const Rule> rule;
  if (config.scenario == "chaos") {
    rule = std::make_shared<RandomEntangleRule>(config.seed);
  } else if (config.scenario == "genesis") {
    const int onset = param_int(config.params, "onset_step", 2);
    std::vector<ScheduleRule::Phase> phases;
    phases.push_back({0, std::make_shared<RandomEntangleRule>(config.seed)});
    phases.push_back({onset, std::make_shared<SplitDoublingRule>()});
    rule = std::make_shared<ScheduleRule>("genesis", std::move(phases));
  } else if (config.scenario == "inflation") {
    rule = std::make_shared<SplitDoublingRule>();
  } else if (config.scenario == "heatdeath") {
    const int unlink = param_int(config.params, "unlink_step", 1);
    const auto groups = param_groups(config.params, nq);
    std::vector<ScheduleRule::Phase> phases;
    phases.push_back({0, std::make_shared<GroupSplitRule>(groups)});
    phases.push_back(
        {1, std::make_shared<RandomEntangleRule>(config.seed, groups)});
    rule = std::make_shared<ScheduleRule>("heatdeath", std::move(phases),
                                          unlink, groups);
  } else {  // custom
    const std::string rule_kind = param_str(config.params, "rule", "fixed_z");
    if (rule_kind == "fixed_z") {
      rule = std::make_shared<FixedZRule>();
    } else if (rule_kind == "random_entangle") {
      std::vector<QubitSet> groups;
      if (config.params.contains("groups")) {
        groups = param_groups(config.params, nq);
      }
      rule = std::make_shared<RandomEntangleRule>(config.seed,
                                                  std::move(groups));
    } else {
      rule = std::make_shared<SplitDoublingRule>();
    }
  }

  setup.initial = make_stage(std::move(init), rule->id());
  snapshot_partition(setup.initial);
  setup.rule = std::move(rule);
  setup.initial_ref = std::move(init_ref);
  return setup;
}

Trajectory run_scenario(const ScenarioConfig& config,
                        const StepObserver& observer) {
  ScenarioSetup setup = build_scenario(config);
  const bool watch_chaos = config.scenario == "chaos";
  StepObserver chained = [&](const Stage& stage, const TrajectoryStep& row) {
    if (watch_chaos && row.num_factors > 1) {
      const FactorPartition* p = stage.info.partition_at(stage.n);
      const bool banded = p && !p->warn_blocks.empty();
      log_warn("chaos run factorized at step " + std::to_string(row.n) +
               " (measure-zero event; near-threshold band: " +
               (banded ? "yes" : "no") + ")");
    }
    if (observer) observer(stage, row);
  };
  Trajectory traj =
      run(std::move(setup.initial), *setup.rule, config.steps, config.seed,
          chained);
  traj.initial_ref = setup.initial_ref;
  return traj;
}

bool FactorLattice::edges_consecutive_times() const {
  std::map<std::pair<int, int>, bool> present;
  for (const Node& n : nodes) present[{n.time, n.block}] = true;
  for (const AncestryEdge& e : edges) {
    if (!present.count({e.time, e.parent})) return false;
    if (!present.count({e.time + 1, e.child})) return false;
  }
  return true;
}

bool FactorLattice::acyclic() const {
  std::map<std::pair<int, int>, int> id;
  for (const Node& n : nodes) {
    id[{n.time, n.block}] = static_cast<int>(id.size());
  }
  std::vector<std::vector<int>> adj(nodes.size());
  std::vector<int> indeg(nodes.size(), 0);
  for (const AncestryEdge& e : edges) {
    const auto a = id.find({e.time, e.parent});
    const auto b = id.find({e.time + 1, e.child});
    if (a == id.end() || b == id.end()) return false;
    adj[a->second].push_back(b->second);
    ++indeg[b->second];
  }
  std::vector<int> queue;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (indeg[i] == 0) queue.push_back(static_cast<int>(i));
  }
  std::size_t seen = 0;
  while (!queue.empty()) {
    const int v = queue.back();
    queue.pop_back();
    ++seen;
    for (int w : adj[v]) {
      if (--indeg[w] == 0) queue.push_back(w);
    }
  }
  return seen == nodes.size();
}

FactorLattice build_factor_lattice(const InformationContent& info) {
  FactorLattice lat;
  for (const auto& [time, partition] : info.partitions) {
    for (int b = 0; b < partition.num_blocks(); ++b) {
      lat.nodes.push_back({time, b, partition.blocks[b]});
    }
  }
  lat.edges = info.ancestry;
  return lat;
}

FactorLattice export_causal_dag(const Trajectory& traj,
                                const std::string& dot_path,
                                const std::string& json_path) {
  const InformationContent& info = traj.final_stage.info;
  if (info.partitions.empty()) {
    throw std::invalid_argument("export_causal_dag: no partition snapshots");
  }
  for (std::size_t i = 1; i < info.partitions.size(); ++i) {
    if (info.partitions[i].first != info.partitions[i - 1].first + 1) {
      throw std::invalid_argument(
          "export_causal_dag: partition snapshots are not consecutive "
          "(retention dropped history)");
    }
  }
  const FactorLattice lat = build_factor_lattice(info);

  std::ofstream dot(dot_path);
  if (!dot) throw std::runtime_error("cannot write " + dot_path);
  dot << "digraph factor_lattice {\n  rankdir=LR;\n  node [shape=box];\n";
  for (const FactorLattice::Node& n : lat.nodes) {
    dot << "  \"t" << n.time << "_b" << n.block << "\" [label=\"n=" << n.time
        << " " << n.qubits.to_string() << "\"];\n";
  }
  for (const AncestryEdge& e : lat.edges) {
    dot << "  \"t" << e.time << "_b" << e.parent << "\" -> \"t" << e.time + 1
        << "_b" << e.child << "\";\n";
  }
  dot << "}\n";
  dot.close();

  nlohmann::json j;
  auto& nodes = j["nodes"] = nlohmann::json::array();
  for (const FactorLattice::Node& n : lat.nodes) {
    nodes.push_back({{"time", n.time}, {"block", n.block},
                     {"qubits", n.qubits.idx}});
  }
  auto& edges = j["edges"] = nlohmann::json::array();
  for (const AncestryEdge& e : lat.edges) {
    edges.push_back({{"time", e.time}, {"parent", e.parent},
                     {"child", e.child}});
  }
  std::ofstream js(json_path);
  if (!js) throw std::runtime_error("cannot write " + json_path);
  js << j.dump(2) << "\n";
  return lat;
}

namespace {

std::string trajectory_row(const TrajectoryStep& s) {
  std::ostringstream os;
  os << s.n << "," << s.num_factors << "," << fmt_double(s.kappa) << ","
     << s.outcome_label << "," << fmt_double(s.path_log_prob);
  return os.str();
}

}  // namespace

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "n,N_n,kappa,outcome_labels,path_log_probability\n";
  for (const TrajectoryStep& s : traj.steps) {
    out << trajectory_row(s) << "\n";
  }
}

void write_metrics_csv(const Trajectory& traj, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "n,N_n,kappa,min_cross_MI,max_block_entropy\n";
  for (const TrajectoryStep& s : traj.steps) {
    out << s.n << "," << s.num_factors << "," << fmt_double(s.kappa) << ","
        << fmt_double(s.min_cross_group_mi) << ","
        << fmt_double(s.max_block_entropy) << "\n";
  }
}

std::vector<std::string> trajectory_digests(const Trajectory& traj) {
  std::vector<std::string> out;
  for (const TrajectoryStep& s : traj.steps) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(trajectory_row(s))));
    out.emplace_back(buf);
  }
  return out;
}

nlohmann::json make_manifest(const ScenarioConfig& config,
                             const Trajectory& traj,
                             const std::vector<std::string>& output_names,
                             const std::string& started,
                             const std::string& finished) {
  nlohmann::json j;
  j["tool_version"] = kToolVersion;
  j["config"] = config.to_json();
  j["seed"] = traj.seed;
  j["initial_state"] = traj.initial_ref;
  j["rule"] = traj.rule_id;
  j["started"] = started;
  j["finished"] = finished;
  j["outputs"] = output_names;
  j["step_digests"] = trajectory_digests(traj);
  return j;
}

Trajectory run_scenario_to_dir(const ScenarioConfig& config,
                               const std::string& out_dir) {
  const std::string started = now_utc();
  Trajectory traj = run_scenario(config);
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  write_trajectory_csv(traj, (dir / "trajectory.csv").string());
  write_metrics_csv(traj, (dir / "metrics.csv").string());
  export_causal_dag(traj, (dir / "dag.dot").string(),
                    (dir / "dag.json").string());
  const std::vector<std::string> outputs = {
      "trajectory.csv", "metrics.csv", "dag.dot", "dag.json",
      "manifest.json"};
  const nlohmann::json manifest =
      make_manifest(config, traj, outputs, started, now_utc());
  std::ofstream mf(dir / "manifest.json");
  if (!mf) throw std::runtime_error("cannot write manifest.json");
  mf << manifest.dump(2) << "\n";
  log_info("scenario " + config.scenario + " finished: " +
           std::to_string(traj.steps.size()) + " rows written to " + out_dir);
  return traj;
}

}  // namespace stagesim

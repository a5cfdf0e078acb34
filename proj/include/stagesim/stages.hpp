// stages.hpp
// The jump engine: a stage bundles the current state with the accumulated
// information record; a rule deterministically selects the next test; the
// engine enumerates joint outcomes, samples one by inverse CDF, projects and
// renormalizes, and appends the outcome plus the new factorization to the
// information content.

#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "stagesim/density.hpp"
#include "stagesim/factorize.hpp"
#include "stagesim/rng.hpp"
#include "stagesim/state.hpp"

namespace stagesim {

// Eigenvalues closer than this are one degenerate outcome.
inline constexpr double kEigenClusterTol = 1e-9;
// Joint outcomes below this probability are dropped from distributions.
inline constexpr double kOutcomeProbFloor = 1e-15;

struct BlockEigensystem {
  Eigen::MatrixXcd vectors;          // orthonormal columns
  std::vector<double> eigenvalues;   // ascending, one per column
  std::vector<int> group_of_col;     // degenerate cluster per column
  std::vector<double> group_value;   // representative eigenvalue per cluster
  bool is_identity = false;          // lets the engine skip the rotation

  int num_groups() const { return static_cast<int>(group_value.size()); }
};

struct TestBlock {
  QubitSet qubits;
  HermitianOperator op;
  // Filled on demand by the engine; rules that construct the operator from
  // an explicit eigenbasis attach it up front so nothing re-diagonalizes.
  mutable std::shared_ptr<const BlockEigensystem> eig;
};

TestBlock make_test_block(QubitSet qubits, HermitianOperator op);
// Builds the operator sum_k values[k] |col_k><col_k| and attaches the
// eigensystem. Values must be ascending.
TestBlock make_test_block(QubitSet qubits, const Eigen::MatrixXcd& vectors,
                          const std::vector<double>& values);
TestBlock make_identity_block(QubitSet qubits);
TestBlock make_pauli_z_block(int qubit);

struct TestSpec {
  std::vector<TestBlock> blocks;

  // Blocks must disjointly cover the register and carry self-adjoint
  // operators of matching dimension.
  void validate(int num_qubits) const;
};

struct OutcomeRecord {
  int n = 0;
  std::vector<double> eigenvalues;  // per block, ascending block order
  std::vector<int> outcome_index;   // degenerate-group index per block
  double probability_at_jump = 1.0;
};

// Edge between block `parent` of the partition at `time` and block `child`
// of the partition at time + 1 (the blocks share at least one qubit).
struct AncestryEdge {
  int time = 0;
  int parent = 0;
  int child = 0;
};

struct InformationContent {
  std::vector<OutcomeRecord> records;
  std::vector<std::pair<int, FactorPartition>> partitions;  // (time, snapshot)
  std::vector<AncestryEdge> ancestry;
  // Once declared, sectors stay mutually isolated: no later test block may
  // span two of them.
  std::vector<QubitSet> unlinked_groups;
  int latest_time = 0;

  const FactorPartition* partition_at(int time) const;
};

struct Stage {
  int n = 0;
  StateVector state;
  InformationContent info;
  std::string rule_id;
};

Stage make_stage(StateVector state, std::string rule_id);
// Records the finest factorization of the current state at the current time
// (so time-0 partitions show up in exports).
void snapshot_partition(Stage& stage, double eps = kDefaultFactorEps);

struct RetentionPolicy {
  // Keep records and snapshots from the most recent keep_last time steps;
  // -1 keeps everything. Unlinked groups are never dropped.
  int keep_last = -1;
};

class Rule {
 public:
  virtual ~Rule() = default;
  virtual std::string id() const = 0;
  // Must be a pure function of the stage.
  virtual TestSpec select_test(const Stage& stage) const = 0;
  virtual RetentionPolicy retention() const { return {}; }
  // Groups to declare mutually isolated in the info written by the jump out
  // of `stage`; empty means none.
  virtual std::vector<QubitSet> unlink_request(const Stage& /*stage*/) const {
    return {};
  }
  // Rule label stamped on the successor stage.
  virtual std::string successor_id(int /*next_n*/) const { return id(); }
};

// Rule consultation plus validation: block layout, Hermiticity, and (when
// unlinked groups exist) confinement of every block to a single group.
TestSpec select_test(const Stage& stage, const Rule& rule);

struct Outcome {
  std::vector<int> group_index;    // per block
  std::vector<double> eigenvalue;  // per block
  double probability = 0.0;

  std::string label() const;  // eigenvalues joined with '|'
};

// Joint Born distribution of a test on a state: one entry per eigenvalue
// combination with probability above kOutcomeProbFloor, in ascending label
// order; probabilities sum to 1 within 1e-9.
std::vector<Outcome> outcome_distribution(const StateVector& state,
                                          const TestSpec& spec);

// |<next|prev>|^2.
double transition_probability(const StateVector& prev,
                              const StateVector& next);

// Append-only information update: one new record, one new partition
// snapshot, ancestry edges against the previous snapshot when present.
InformationContent update_information(const InformationContent& old_info,
                                      const OutcomeRecord& record,
                                      const FactorPartition& new_partition,
                                      RetentionPolicy policy);

// One full transition. Consumes one uniform draw from `rng` to sample the
// outcome; everything else is deterministic.
Stage jump(const Stage& stage, const Rule& rule, RngStream& rng);

struct TrajectoryStep {
  int n = 0;
  int num_factors = 1;
  double kappa = 0.0;
  std::string outcome_label;
  double probability = 1.0;        // Born weight of the sampled outcome
  double path_log_prob = 0.0;      // running sum of ln(probability)
  double max_block_entropy = 0.0;  // strongest single-qubit entanglement
                                   // inside any multi-qubit block
  double min_cross_group_mi = 0.0; // NaN unless >= 2 unlinked groups
};

struct Trajectory {
  std::uint64_t seed = 0;
  std::string rule_id;
  std::string initial_ref;
  std::vector<TrajectoryStep> steps;  // row for n = initial plus one per jump
  Stage final_stage;
};

using StepObserver =
    std::function<void(const Stage& stage, const TrajectoryStep& step)>;

// Runs `steps` jumps (steps >= 1) with per-step generators derived from
// (seed, "jump", n). The observer fires for the initial row and after every
// jump.
Trajectory run(Stage initial, const Rule& rule, int steps, std::uint64_t seed,
               const StepObserver& observer = {});

}  // namespace stagesim

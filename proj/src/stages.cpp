#include "stagesim/stages.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>

#include "stagesim/kernels.hpp"
#include "stagesim/log.hpp"

namespace stagesim {

namespace {

std::string fmt_eigenvalue(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::shared_ptr<BlockEigensystem> cluster_eigensystem(
    Eigen::MatrixXcd vectors, std::vector<double> values) {
  auto eig = std::make_shared<BlockEigensystem>();
  eig->vectors = std::move(vectors);
  eig->eigenvalues = std::move(values);
  const std::size_t d = eig->eigenvalues.size();
  eig->group_of_col.resize(d);
  double sum = 0.0;
  int count = 0;
  for (std::size_t k = 0; k < d; ++k) {
    if (k > 0 && eig->eigenvalues[k] - eig->eigenvalues[k - 1] >
                     kEigenClusterTol) {
      eig->group_value.push_back(sum / count);
      sum = 0.0;
      count = 0;
    }
    eig->group_of_col[k] = static_cast<int>(eig->group_value.size());
    sum += eig->eigenvalues[k];
    ++count;
  }
  eig->group_value.push_back(sum / count);
  return eig;
}

const BlockEigensystem& eigensystem_of(const TestBlock& block) {
  if (!block.eig) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(block.op.mat);
    if (es.info() != Eigen::Success) {
      throw std::runtime_error("test operator diagonalization failed");
    }
    std::vector<double> values(es.eigenvalues().data(),
                               es.eigenvalues().data() +
                                   es.eigenvalues().size());
    block.eig = cluster_eigensystem(es.eigenvectors(), std::move(values));
  }
  if (block.eig->vectors.rows() != block.op.dim()) {
    throw std::invalid_argument("attached eigensystem does not match operator");
  }
  return *block.eig;
}

// Sorted block order plus the per-index outcome key machinery shared by
// distribution enumeration and jumping. Keys are mixed-radix group indices,
// earlier blocks most significant, so ascending key order is exactly the
// deterministic label order.
struct JointTest {
  std::vector<const TestBlock*> blocks;             // ascending first qubit
  std::vector<const BlockEigensystem*> eigs;
  std::vector<kernels::BlockIndexer> indexers;
  std::vector<std::uint64_t> radix;                 // group counts

  explicit JointTest(const TestSpec& spec, int num_qubits) {
    for (const TestBlock& b : spec.blocks) blocks.push_back(&b);
    std::sort(blocks.begin(), blocks.end(),
              [](const TestBlock* a, const TestBlock* b) {
                return a->qubits.idx[0] < b->qubits.idx[0];
              });
    double total_groups_log = 0.0;
    for (const TestBlock* b : blocks) {
      eigs.push_back(&eigensystem_of(*b));
      indexers.emplace_back(num_qubits, b->qubits);
      radix.push_back(static_cast<std::uint64_t>(eigs.back()->num_groups()));
      total_groups_log += std::log2(static_cast<double>(radix.back()));
    }
    if (total_groups_log > 62.0) {
      throw std::invalid_argument("joint outcome space too large");
    }
  }

  // Rotate amplitudes into (out of) the joint eigenbasis.
  void to_eigenbasis(std::vector<cplx>& amps, int num_qubits) const {
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (eigs[b]->is_identity) continue;
      kernels::apply_block(eigs[b]->vectors.adjoint(), amps, num_qubits,
                           blocks[b]->qubits);
    }
  }
  void from_eigenbasis(std::vector<cplx>& amps, int num_qubits) const {
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (eigs[b]->is_identity) continue;
      kernels::apply_block(eigs[b]->vectors, amps, num_qubits,
                           blocks[b]->qubits);
    }
  }

  std::uint64_t key_of_index(std::uint64_t i, int num_qubits) const {
    std::uint64_t key = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const QubitSet& qs = blocks[b]->qubits;
      const int k = qs.size();
      std::uint64_t local = 0;
      for (int j = 0; j < k; ++j) {
        local |= static_cast<std::uint64_t>(bit_of(i, qs.idx[j], num_qubits))
                 << (k - 1 - j);
      }
      key = key * radix[b] + eigs[b]->group_of_col[local];
    }
    return key;
  }

  Outcome decode(std::uint64_t key, double probability) const {
    Outcome o;
    o.probability = probability;
    o.group_index.resize(blocks.size());
    o.eigenvalue.resize(blocks.size());
    for (std::size_t b = blocks.size(); b-- > 0;) {
      const int g = static_cast<int>(key % radix[b]);
      key /= radix[b];
      o.group_index[b] = g;
      o.eigenvalue[b] = eigs[b]->group_value[g];
    }
    return o;
  }

  // Grouped probabilities in ascending key order, above the floor.
  std::vector<std::pair<std::uint64_t, double>> grouped_probabilities(
      const std::vector<cplx>& rotated, int num_qubits) const {
    std::map<std::uint64_t, double> acc;
    for (std::uint64_t i = 0; i < rotated.size(); ++i) {
      const double w = std::norm(rotated[i]);
      if (w == 0.0) continue;
      acc[key_of_index(i, num_qubits)] += w;
    }
    std::vector<std::pair<std::uint64_t, double>> out;
    out.reserve(acc.size());
    for (const auto& [key, p] : acc) {
      if (p > kOutcomeProbFloor) out.emplace_back(key, p);
    }
    return out;
  }
};

void check_unlink_groups(const std::vector<QubitSet>& groups,
                         const FactorPartition& partition,
                         const std::vector<QubitSet>& existing,
                         int num_qubits) {
  if (groups.size() < 2) {
    throw std::invalid_argument("unlink request needs at least two groups");
  }
  std::uint32_t seen = 0;
  for (const QubitSet& g : groups) {
    if (g.empty()) throw std::invalid_argument("unlink group is empty");
    g.validate(num_qubits);
    if (seen & g.mask()) {
      throw std::invalid_argument("unlink groups overlap");
    }
    seen |= g.mask();
  }
  if (seen != (1u << num_qubits) - 1u) {
    throw std::invalid_argument("unlink groups must cover the register");
  }
  if (partition.num_blocks() == 1) {
    throw std::invalid_argument(
        "cannot unlink: the universe is a single factor");
  }
  for (const QubitSet& blk : partition.blocks) {
    bool inside = false;
    for (const QubitSet& g : groups) {
      if (blk.subset_of(g)) {
        inside = true;
        break;
      }
    }
    if (!inside) {
      throw std::invalid_argument(
          "unlink groups must be unions of current factor blocks");
    }
  }
  for (const QubitSet& g : groups) {
    bool refined = existing.empty();
    for (const QubitSet& old : existing) {
      if (g.subset_of(old)) {
        refined = true;
        break;
      }
    }
    if (!refined) {
      throw std::invalid_argument(
          "unlink groups must refine the existing groups");
    }
  }
}

double stage_kappa(const FactorPartition& p) {
  if (p.num_qubits < 2) return std::numeric_limits<double>::quiet_NaN();
  return classicity(p);
}

// Strongest single-qubit entanglement entropy inside any multi-qubit block.
double max_block_entropy(const StateVector& state, const FactorPartition& p) {
  double best = 0.0;
  for (const QubitSet& b : p.blocks) {
    if (b.size() < 2) continue;
    for (int q : b.idx) {
      best = std::max(best, entanglement_entropy(state, QubitSet{q}));
    }
  }
  return best;
}

double min_cross_group_mi(const StateVector& state,
                          const std::vector<QubitSet>& groups) {
  if (groups.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < groups.size(); ++a) {
    for (std::size_t b = a + 1; b < groups.size(); ++b) {
      for (int i : groups[a].idx) {
        for (int j : groups[b].idx) {
          best = std::min(best, mutual_information(state, i, j));
        }
      }
    }
  }
  return best;
}

TrajectoryStep summarize(const Stage& stage, const FactorPartition& partition,
                         const std::string& label, double probability,
                         double path_log_prob) {
  TrajectoryStep row;
  row.n = stage.n;
  row.num_factors = partition.num_blocks();
  row.kappa = stage_kappa(partition);
  row.outcome_label = label;
  row.probability = probability;
  row.path_log_prob = path_log_prob;
  row.max_block_entropy = max_block_entropy(stage.state, partition);
  row.min_cross_group_mi =
      min_cross_group_mi(stage.state, stage.info.unlinked_groups);
  return row;
}

}  // namespace

TestBlock make_test_block(QubitSet qubits, HermitianOperator op) {
  return {std::move(qubits), std::move(op), nullptr};
}

TestBlock make_test_block(QubitSet qubits, const Eigen::MatrixXcd& vectors,
                          const std::vector<double>& values) {
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k] < values[k - 1]) {
      throw std::invalid_argument("make_test_block: values must be ascending");
    }
  }
  TestBlock b;
  b.qubits = std::move(qubits);
  b.op = HermitianOperator::from_eigensystem(vectors, values);
  b.eig = cluster_eigensystem(vectors, values);
  return b;
}

TestBlock make_identity_block(QubitSet qubits) {
  const int d = 1 << qubits.size();
  TestBlock b;
  b.qubits = std::move(qubits);
  b.op = HermitianOperator::identity(d);
  auto eig = cluster_eigensystem(Eigen::MatrixXcd::Identity(d, d),
                                 std::vector<double>(d, 1.0));
  eig->is_identity = true;
  b.eig = std::move(eig);
  return b;
}

TestBlock make_pauli_z_block(int qubit) {
  Eigen::MatrixXcd v(2, 2);
  // Ascending eigenvalues: -1 on |1>, +1 on |0>.
  v << 0.0, 1.0, 1.0, 0.0;
  return make_test_block(QubitSet{qubit}, v, {-1.0, 1.0});
}

void TestSpec::validate(int num_qubits) const {
  if (blocks.empty()) throw std::invalid_argument("test has no blocks");
  std::uint32_t seen = 0;
  for (const TestBlock& b : blocks) {
    if (b.qubits.empty()) throw std::invalid_argument("test block is empty");
    b.qubits.validate(num_qubits);
    if (seen & b.qubits.mask()) {
      throw std::invalid_argument("test blocks overlap");
    }
    seen |= b.qubits.mask();
    b.op.validate();
    if (b.op.dim() != (1 << b.qubits.size())) {
      throw std::invalid_argument(
          "test operator dimension does not match its block");
    }
  }
  if (seen != (1u << num_qubits) - 1u) {
    throw std::invalid_argument("test blocks must cover the register");
  }
}

const FactorPartition* InformationContent::partition_at(int time) const {
  for (const auto& [t, p] : partitions) {
    if (t == time) return &p;
  }
  return nullptr;
}

Stage make_stage(StateVector state, std::string rule_id) {
  state.validate();
  Stage stage;
  stage.n = 0;
  stage.state = std::move(state);
  stage.info.latest_time = 0;
  stage.rule_id = std::move(rule_id);
  return stage;
}

void snapshot_partition(Stage& stage, double eps) {
  if (stage.info.partition_at(stage.n)) return;
  stage.info.partitions.emplace_back(
      stage.n, finest_factorization(stage.state, eps));
}

TestSpec select_test(const Stage& stage, const Rule& rule) {
  TestSpec spec = rule.select_test(stage);
  spec.validate(stage.state.num_qubits);
  if (!stage.info.unlinked_groups.empty()) {
    for (const TestBlock& b : spec.blocks) {
      bool inside = false;
      for (const QubitSet& g : stage.info.unlinked_groups) {
        if (b.qubits.subset_of(g)) {
          inside = true;
          break;
        }
      }
      if (!inside) {
        throw std::runtime_error("test block " + b.qubits.to_string() +
                                 " spans unlinked groups");
      }
    }
  }
  return spec;
}

std::string Outcome::label() const {
  std::string s;
  for (std::size_t i = 0; i < eigenvalue.size(); ++i) {
    if (i) s += "|";
    s += fmt_eigenvalue(eigenvalue[i]);
  }
  return s;
}

std::vector<Outcome> outcome_distribution(const StateVector& state,
                                          const TestSpec& spec) {
  state.validate();
  spec.validate(state.num_qubits);
  const JointTest joint(spec, state.num_qubits);
  std::vector<cplx> rotated = state.amps;
  joint.to_eigenbasis(rotated, state.num_qubits);
  std::vector<Outcome> out;
  for (const auto& [key, p] :
       joint.grouped_probabilities(rotated, state.num_qubits)) {
    out.push_back(joint.decode(key, p));
  }
  return out;
}

double transition_probability(const StateVector& prev,
                              const StateVector& next) {
  return fidelity(next, prev);
}

InformationContent update_information(const InformationContent& old_info,
                                      const OutcomeRecord& record,
                                      const FactorPartition& new_partition,
                                      RetentionPolicy policy) {
  if (record.n != old_info.latest_time + 1) {
    throw std::invalid_argument(
        "information update must advance time by exactly one step");
  }
  InformationContent out = old_info;
  out.records.push_back(record);
  if (!out.partitions.empty() &&
      out.partitions.back().first == record.n - 1) {
    const FactorPartition& prev = out.partitions.back().second;
    for (int i = 0; i < prev.num_blocks(); ++i) {
      const std::uint32_t pm = prev.blocks[i].mask();
      for (int j = 0; j < new_partition.num_blocks(); ++j) {
        if (pm & new_partition.blocks[j].mask()) {
          out.ancestry.push_back({record.n - 1, i, j});
        }
      }
    }
  }
  out.partitions.emplace_back(record.n, new_partition);
  out.latest_time = record.n;
  if (policy.keep_last >= 0) {
    const int cutoff = record.n - policy.keep_last;
    std::erase_if(out.records,
                  [cutoff](const OutcomeRecord& r) { return r.n < cutoff; });
    std::erase_if(out.partitions,
                  [cutoff](const auto& tp) { return tp.first < cutoff; });
    std::erase_if(out.ancestry, [cutoff](const AncestryEdge& e) {
      return e.time < cutoff;
    });
  }
  return out;
}

Stage jump(const Stage& stage, const Rule& rule, RngStream& rng) {
  stage.state.validate();
  if (stage.info.latest_time != stage.n) {
    throw std::invalid_argument("stage information is not up to date");
  }
  const int nq = stage.state.num_qubits;
  const TestSpec spec = select_test(stage, rule);
  const JointTest joint(spec, nq);

  std::vector<cplx> rotated = stage.state.amps;
  joint.to_eigenbasis(rotated, nq);
  const auto outcomes = joint.grouped_probabilities(rotated, nq);
  if (outcomes.empty()) {
    throw std::runtime_error("no outcome carries probability");
  }

  // Inverse-CDF draw in ascending label order.
  const double u = rng.uniform01();
  double cdf = 0.0;
  std::size_t pick = outcomes.size() - 1;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    cdf += outcomes[i].second;
    if (u < cdf) {
      pick = i;
      break;
    }
  }
  const std::uint64_t chosen_key = outcomes[pick].first;
  const double probability = outcomes[pick].second;

  // Projection: zero everything outside the sampled joint eigenspace.
  for (std::uint64_t i = 0; i < rotated.size(); ++i) {
    if (rotated[i] != cplx{0.0, 0.0} &&
        joint.key_of_index(i, nq) != chosen_key) {
      rotated[i] = cplx{0.0, 0.0};
    }
  }
  const double nrm = std::sqrt(kernels::norm2(rotated));
  if (nrm <= 0.0) throw std::runtime_error("projection produced a null state");
  const double inv = 1.0 / nrm;
  for (cplx& a : rotated) a *= inv;
  joint.from_eigenbasis(rotated, nq);

  Stage next;
  next.n = stage.n + 1;
  next.state.num_qubits = nq;
  next.state.amps = std::move(rotated);
  next.state.normalize();

  const Outcome outcome = joint.decode(chosen_key, probability);
  OutcomeRecord record;
  record.n = next.n;
  record.eigenvalues = outcome.eigenvalue;
  record.outcome_index = outcome.group_index;
  record.probability_at_jump = probability;

  const FactorPartition partition =
      finest_factorization(next.state, kDefaultFactorEps);
  next.info = update_information(stage.info, record, partition,
                                 rule.retention());
  const std::vector<QubitSet> groups = rule.unlink_request(stage);
  if (!groups.empty()) {
    check_unlink_groups(groups, partition, stage.info.unlinked_groups, nq);
    next.info.unlinked_groups = groups;
  }
  next.rule_id = rule.successor_id(next.n);
  return next;
}

Trajectory run(Stage initial, const Rule& rule, int steps, std::uint64_t seed,
               const StepObserver& observer) {
  if (steps < 1) throw std::invalid_argument("run: steps must be >= 1");
  initial.state.validate();
  if (initial.info.latest_time != initial.n) {
    throw std::invalid_argument("run: stage information is not up to date");
  }

  Trajectory traj;
  traj.seed = seed;
  traj.rule_id = rule.id();

  // Row for the starting stage. Use the stored snapshot when there is one;
  // otherwise summarize from a throwaway factorization.
  const FactorPartition* snap = initial.info.partition_at(initial.n);
  const FactorPartition initial_partition =
      snap ? *snap : finest_factorization(initial.state, kDefaultFactorEps);
  TrajectoryStep row = summarize(initial, initial_partition, "", 1.0, 0.0);
  traj.steps.push_back(row);
  if (observer) observer(initial, row);

  Stage stage = std::move(initial);
  double path_log = 0.0;
  for (int t = 0; t < steps; ++t) {
    RngStream rng = RngStream::derive(seed, "jump",
                                      static_cast<std::uint64_t>(stage.n + 1));
    stage = jump(stage, rule, rng);
    const OutcomeRecord& rec = stage.info.records.back();
    path_log += std::log(rec.probability_at_jump);
    const FactorPartition* part = stage.info.partition_at(stage.n);
    if (!part) throw std::logic_error("run: missing partition snapshot");
    Outcome oc;
    oc.group_index = rec.outcome_index;
    oc.eigenvalue = rec.eigenvalues;
    oc.probability = rec.probability_at_jump;
    row = summarize(stage, *part, oc.label(), rec.probability_at_jump,
                    path_log);
    traj.steps.push_back(row);
    if (observer) observer(stage, row);
  }
  traj.final_stage = std::move(stage);
  return traj;
}

}  // namespace stagesim

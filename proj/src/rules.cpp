#include "stagesim/rules.hpp"

#include <algorithm>
#include <stdexcept>

#include "stagesim/kernels.hpp"

namespace stagesim {

namespace {

constexpr int kMaxDenseTestQubits = 12;

// Nondegenerate test block on `qubits` whose eigenbasis diagonalizes the
// reduced density matrix there; eigenvalues are 0..d-1 in the order of the
// reduced spectrum.
TestBlock schmidt_basis_block(const StateVector& state,
                              const QubitSet& qubits) {
  Eigen::MatrixXcd rho;
  kernels::reduced_gram(state.amps, state.num_qubits, qubits, rho);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("reduced density matrix diagonalization failed");
  }
  const int d = static_cast<int>(rho.rows());
  std::vector<double> values(d);
  for (int k = 0; k < d; ++k) values[k] = k;
  return make_test_block(qubits, es.eigenvectors(), values);
}

void check_groups_cover(const std::vector<QubitSet>& groups, int num_qubits) {
  std::uint32_t seen = 0;
  for (const QubitSet& g : groups) {
    if (g.empty()) throw std::invalid_argument("rule group is empty");
    g.validate(num_qubits);
    if (seen & g.mask()) throw std::invalid_argument("rule groups overlap");
    seen |= g.mask();
  }
  if (seen != (1u << num_qubits) - 1u) {
    throw std::invalid_argument("rule groups must cover the register");
  }
}

}  // namespace

TestSpec FixedZRule::select_test(const Stage& stage) const {
  TestSpec spec;
  for (int q = 0; q < stage.state.num_qubits; ++q) {
    spec.blocks.push_back(make_pauli_z_block(q));
  }
  return spec;
}

FixedTestRule::FixedTestRule(TestSpec spec, std::string id)
    : spec_(std::move(spec)), id_(std::move(id)) {}

TestSpec FixedTestRule::select_test(const Stage&) const { return spec_; }

RandomEntangleRule::RandomEntangleRule(std::uint64_t rule_seed,
                                       std::vector<QubitSet> groups,
                                       std::string id)
    : seed_(rule_seed), groups_(std::move(groups)), id_(std::move(id)) {}

TestSpec RandomEntangleRule::select_test(const Stage& stage) const {
  const int nq = stage.state.num_qubits;
  std::vector<QubitSet> groups = groups_;
  if (groups.empty()) groups.push_back(QubitSet::range(0, nq));
  check_groups_cover(groups, nq);
  TestSpec spec;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].size() > kMaxDenseTestQubits) {
      throw std::invalid_argument(
          "random entangling test over more than 12 qubits");
    }
    const int d = 1 << groups[g].size();
    RngStream rng = RngStream::derive(
        seed_, "test", static_cast<std::uint64_t>(stage.n), g);
    const Eigen::MatrixXcd basis = random_orthobasis(d, rng);
    std::vector<double> values(d);
    for (int k = 0; k < d; ++k) values[k] = k;
    spec.blocks.push_back(make_test_block(groups[g], basis, values));
  }
  return spec;
}

SplitDoublingRule::SplitDoublingRule(double eps) : eps_(eps) {}

TestSpec SplitDoublingRule::select_test(const Stage& stage) const {
  const FactorPartition* snap = stage.info.partition_at(stage.n);
  const FactorPartition partition =
      snap ? *snap : finest_factorization(stage.state, eps_);
  TestSpec spec;
  for (const QubitSet& block : partition.blocks) {
    if (block.size() == 1) {
      spec.blocks.push_back(make_pauli_z_block(block.idx[0]));
      continue;
    }
    const int half = block.size() / 2;
    const QubitSet head(
        std::vector<int>(block.idx.begin(), block.idx.begin() + half));
    const QubitSet tail(
        std::vector<int>(block.idx.begin() + half, block.idx.end()));
    spec.blocks.push_back(schmidt_basis_block(stage.state, head));
    spec.blocks.push_back(make_identity_block(tail));
  }
  return spec;
}

GroupSplitRule::GroupSplitRule(std::vector<QubitSet> groups)
    : groups_(std::move(groups)) {
  if (groups_.size() < 2) {
    throw std::invalid_argument("GroupSplitRule: need at least two groups");
  }
}

TestSpec GroupSplitRule::select_test(const Stage& stage) const {
  check_groups_cover(groups_, stage.state.num_qubits);
  TestSpec spec;
  for (const QubitSet& g : groups_) {
    if (g.size() == stage.state.num_qubits) {
      throw std::invalid_argument("GroupSplitRule: group is whole register");
    }
    spec.blocks.push_back(schmidt_basis_block(stage.state, g));
  }
  return spec;
}

ScheduleRule::ScheduleRule(std::string id, std::vector<Phase> phases,
                           int unlink_step,
                           std::vector<QubitSet> unlink_groups)
    : id_(std::move(id)),
      phases_(std::move(phases)),
      unlink_step_(unlink_step),
      unlink_groups_(std::move(unlink_groups)) {
  if (phases_.empty()) {
    throw std::invalid_argument("ScheduleRule: no phases");
  }
  std::sort(phases_.begin(), phases_.end(),
            [](const Phase& a, const Phase& b) {
              return a.from_step < b.from_step;
            });
  if (phases_.front().from_step != 0) {
    throw std::invalid_argument("ScheduleRule: first phase must start at 0");
  }
  for (const Phase& p : phases_) {
    if (!p.rule) throw std::invalid_argument("ScheduleRule: null phase rule");
  }
  if (unlink_step_ >= 0 && unlink_groups_.size() < 2) {
    throw std::invalid_argument(
        "ScheduleRule: unlink event needs at least two groups");
  }
}

const Rule& ScheduleRule::phase_rule(int n) const {
  const Rule* active = phases_.front().rule.get();
  for (const Phase& p : phases_) {
    if (p.from_step <= n) active = p.rule.get();
  }
  return *active;
}

TestSpec ScheduleRule::select_test(const Stage& stage) const {
  return phase_rule(stage.n).select_test(stage);
}

std::vector<QubitSet> ScheduleRule::unlink_request(const Stage& stage) const {
  if (unlink_step_ >= 0 && stage.n == unlink_step_ - 1) {
    return unlink_groups_;
  }
  return phase_rule(stage.n).unlink_request(stage);
}

std::string ScheduleRule::successor_id(int next_n) const {
  return id_ + ":" + phase_rule(next_n).id();
}

}  // namespace stagesim

// rules.hpp
// Concrete deterministic rules. Rules that need randomness derive it from
// their own seed and the stage time, so the same stage always selects the
// same test.

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "stagesim/stages.hpp"

namespace stagesim {

// sigma_z on every qubit.
class FixedZRule : public Rule {
 public:
  std::string id() const override { return "fixed_z"; }
  TestSpec select_test(const Stage& stage) const override;
};

// Always the same spec; handy for regression cases and targeted probes.
class FixedTestRule : public Rule {
 public:
  FixedTestRule(TestSpec spec, std::string id = "fixed_test");
  std::string id() const override { return id_; }
  TestSpec select_test(const Stage& stage) const override;

 private:
  TestSpec spec_;
  std::string id_;
};

// Measures each group in a random entangled eigenbasis with distinct integer
// eigenvalues, drawn from (rule seed, stage time, group index). An empty
// group list means the whole register as one group. Groups are capped at 12
// qubits: the test operator is dense.
class RandomEntangleRule : public Rule {
 public:
  explicit RandomEntangleRule(std::uint64_t rule_seed,
                              std::vector<QubitSet> groups = {},
                              std::string id = "random_entangle");
  std::string id() const override { return id_; }
  TestSpec select_test(const Stage& stage) const override;

 private:
  std::uint64_t seed_;
  std::vector<QubitSet> groups_;
  std::string id_;
};

// Splits every current factor block of two or more qubits by measuring the
// block's first half in the eigenbasis of that half's reduced density
// matrix, with distinct integer eigenvalues; single-qubit blocks get
// sigma_z. Factor count doubles (up to block parity) each jump.
class SplitDoublingRule : public Rule {
 public:
  explicit SplitDoublingRule(double eps = kDefaultFactorEps);
  std::string id() const override { return "split_doubling"; }
  TestSpec select_test(const Stage& stage) const override;

 private:
  double eps_;
};

// Measures each listed group in the eigenbasis of its reduced density
// matrix, making every group a factor in one jump while leaving the groups
// internally entangled.
class GroupSplitRule : public Rule {
 public:
  explicit GroupSplitRule(std::vector<QubitSet> groups);
  std::string id() const override { return "group_split"; }
  TestSpec select_test(const Stage& stage) const override;

 private:
  std::vector<QubitSet> groups_;
};

// Phase schedule over inner rules plus one optional unlink event: the phase
// whose from_step is the largest one <= stage time selects the test, and the
// groups are declared isolated on the jump that lands on unlink_step.
class ScheduleRule : public Rule {
 public:
  struct Phase {
    int from_step = 0;
    std::shared_ptr<const Rule> rule;
  };

  ScheduleRule(std::string id, std::vector<Phase> phases,
               int unlink_step = -1, std::vector<QubitSet> unlink_groups = {});
  std::string id() const override { return id_; }
  TestSpec select_test(const Stage& stage) const override;
  std::vector<QubitSet> unlink_request(const Stage& stage) const override;
  std::string successor_id(int next_n) const override;

 private:
  const Rule& phase_rule(int n) const;

  std::string id_;
  std::vector<Phase> phases_;
  int unlink_step_;
  std::vector<QubitSet> unlink_groups_;
};

}  // namespace stagesim

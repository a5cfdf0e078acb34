// factorize.hpp
// Finest tensor factorization of a pure state, the classicity measure built
// on it, and the exhaustive cross-check used to validate the fast path.
//
// A subset qualifies as a factor when the purity of its reduced state is at
// least 1 - eps. Purity in [1 - 10 eps, 1 - eps) is a near-threshold band:
// such cuts are still treated as factors but flagged in warn_blocks, and the
// exhaustive route applies the same widened predicate so the two
// implementations stay comparable.

#pragma once

#include <string>
#include <vector>

#include "stagesim/density.hpp"
#include "stagesim/state.hpp"

namespace stagesim {

inline constexpr double kDefaultFactorEps = 1e-10;
inline constexpr double kSchmidtRankEps = 1e-12;

struct FactorPartition {
  int num_qubits = 0;
  std::vector<QubitSet> blocks;  // disjoint cover, ascending by first qubit
  // Per-factor pure states (same order as blocks), phase-fixed so the
  // largest-magnitude amplitude is real positive.
  std::vector<StateVector> block_states;
  // Indices of blocks whose defining cut purity fell in the warning band.
  std::vector<int> warn_blocks;

  int num_blocks() const { return static_cast<int>(blocks.size()); }
};

bool same_blocks(const FactorPartition& a, const FactorPartition& b);

// Number of reduced-state eigenvalues across `cut` exceeding eps.
int schmidt_rank(const StateVector& s, const QubitSet& cut,
                 double eps = kSchmidtRankEps);

// True when `sub` (proper nonempty subset) carries purity >= 1 - eps.
bool is_product(const StateVector& s, const QubitSet& sub,
                double eps = kDefaultFactorEps);

// Unique finest partition into factor blocks. Minimal qualifying subsets are
// selected in (size, lexicographic) order; a mutual-information graph over
// the qubits prunes subsets that cannot qualify.
FactorPartition finest_factorization(const StateVector& s,
                                     double eps = kDefaultFactorEps);

// Exhaustive search over all set partitions (guarded to N <= 8): every
// candidate block is checked directly against the same purity predicate and
// the valid partition with the most blocks wins. No pruning, no shared
// search logic with the fast path.
FactorPartition brute_force_factorization(const StateVector& s,
                                          double eps = kDefaultFactorEps);

// ln(number of blocks) / ln(N); 0 for one block, 1 for N blocks. N >= 2.
double classicity(const FactorPartition& p);

// Tensor the block states back together in register order. Requires
// block_states to be populated.
StateVector reconstruct(const FactorPartition& p);

// {"blocks": [[...], ...], "classicity": x} plus "warn_blocks" when any.
std::string partition_to_json_string(const FactorPartition& p);

}  // namespace stagesim

// kernels.hpp
// Amplitude-level inner loops. Every kernel has a plain serial reference
// implementation under kernels::serial and an OpenMP front door under
// kernels::. The parallel versions are deterministic: reductions accumulate
// fixed-size chunks in a fixed order regardless of thread count, and the
// remaining kernels only ever write disjoint elements.

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "stagesim/types.hpp"

namespace stagesim::kernels {

namespace serial {

double norm2(const std::vector<cplx>& amps);
cplx dot(const std::vector<cplx>& a, const std::vector<cplx>& b);

// amps <- (m acting on `block`) amps, identity elsewhere. m is d x d with
// d = 2^|block|; within the block the lowest-numbered qubit is the most
// significant bit of the local index, matching the global layout.
void apply_block(const Eigen::MatrixXcd& m, std::vector<cplx>& amps,
                 int num_qubits, const QubitSet& block);

// out(a, b) = sum_e amp(a, e) * conj(amp(b, e)) where the kept qubits carry
// local index a and the rest carry e: the reduced density matrix on `keep`.
void reduced_gram(const std::vector<cplx>& amps, int num_qubits,
                  const QubitSet& keep, Eigen::MatrixXcd& out);

}  // namespace serial

double norm2(const std::vector<cplx>& amps);
cplx dot(const std::vector<cplx>& a, const std::vector<cplx>& b);
void apply_block(const Eigen::MatrixXcd& m, std::vector<cplx>& amps,
                 int num_qubits, const QubitSet& block);
void reduced_gram(const std::vector<cplx>& amps, int num_qubits,
                  const QubitSet& keep, Eigen::MatrixXcd& out);

// Offsets shared by both implementations: for each local index of `block`,
// the contribution to the global basis index, and the positions of the
// complement bits for enumerating the environment.
struct BlockIndexer {
  std::vector<std::uint64_t> block_offset;  // 2^|block| entries
  std::vector<int> env_positions;           // complement bit positions
  std::uint64_t env_mask = 0;               // union of the complement bits
  BlockIndexer(int num_qubits, const QubitSet& block);
  std::uint64_t env_base(std::uint64_t env_counter) const {
    std::uint64_t base = 0;
    for (std::size_t t = 0; t < env_positions.size(); ++t) {
      if ((env_counter >> t) & 1u) base |= std::uint64_t{1} << env_positions[t];
    }
    return base;
  }
  // Successor of an environment base: increment a counter embedded in the
  // scattered mask bits (non-mask bits are filled so the carry passes
  // through them). O(1) instead of re-scattering every bit.
  std::uint64_t env_next(std::uint64_t base) const {
    return ((base | ~env_mask) + 1) & env_mask;
  }
};

}  // namespace stagesim::kernels

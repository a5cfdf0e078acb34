// Independent reference implementations used to cross-check the library.
// Everything here is built on dense Eigen matrices with straightforward
// index arithmetic — no code shared with the optimized paths under test.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "stagesim/stages.hpp"
#include "stagesim/state.hpp"
#include "stagesim/types.hpp"

namespace oracle {

using stagesim::QubitSet;
using stagesim::StateVector;
using stagesim::cplx;

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a,
                             const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline Eigen::MatrixXcd pauli_i() { return Eigen::MatrixXcd::Identity(2, 2); }

inline Eigen::MatrixXcd pauli_z() {
  Eigen::MatrixXcd z(2, 2);
  z << 1.0, 0.0, 0.0, -1.0;
  return z;
}

inline Eigen::MatrixXcd pauli_x() {
  Eigen::MatrixXcd x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  return x;
}

inline Eigen::VectorXcd to_vector(const StateVector& s) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(s.dim()));
  for (std::uint64_t i = 0; i < s.dim(); ++i) {
    v(static_cast<Eigen::Index>(i)) = s.amps[i];
  }
  return v;
}

inline Eigen::MatrixXcd density_of(const StateVector& s) {
  const Eigen::VectorXcd v = to_vector(s);
  return v * v.adjoint();
}

// Reduced density matrix on `keep`, computed element by element from the
// full outer product: rho_keep(a, b) = sum_e <a, e| rho |b, e>.
inline Eigen::MatrixXcd partial_trace_dense(const StateVector& s,
                                            const QubitSet& keep) {
  const int n = s.num_qubits;
  const int k = keep.size();
  const QubitSet rest = keep.complement(n);
  const int r = rest.size();
  const auto global_index = [&](std::uint64_t kept_bits,
                                std::uint64_t env_bits) {
    std::uint64_t g = 0;
    for (int t = 0; t < k; ++t) {
      if ((kept_bits >> (k - 1 - t)) & 1u) {
        g |= std::uint64_t{1} << stagesim::bit_position(keep.idx[t], n);
      }
    }
    for (int t = 0; t < r; ++t) {
      if ((env_bits >> (r - 1 - t)) & 1u) {
        g |= std::uint64_t{1} << stagesim::bit_position(rest.idx[t], n);
      }
    }
    return g;
  };
  const std::uint64_t dk = std::uint64_t{1} << k;
  const std::uint64_t dr = std::uint64_t{1} << r;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dk),
                                                static_cast<Eigen::Index>(dk));
  for (std::uint64_t a = 0; a < dk; ++a) {
    for (std::uint64_t b = 0; b < dk; ++b) {
      cplx acc = 0.0;
      for (std::uint64_t e = 0; e < dr; ++e) {
        acc += s.amps[global_index(a, e)] * std::conj(s.amps[global_index(b, e)]);
      }
      rho(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = acc;
    }
  }
  return rho;
}

// Embeds a d x d operator acting on `block` into the full 2^n space by
// summing dyads over explicit global indices.
inline Eigen::MatrixXcd embed(const Eigen::MatrixXcd& op, int num_qubits,
                              const QubitSet& block) {
  const int k = block.size();
  const QubitSet rest = block.complement(num_qubits);
  const int r = rest.size();
  const std::uint64_t dk = std::uint64_t{1} << k;
  const std::uint64_t dr = std::uint64_t{1} << r;
  const std::uint64_t dim = std::uint64_t{1} << num_qubits;
  const auto global_index = [&](std::uint64_t local, std::uint64_t env) {
    std::uint64_t g = 0;
    for (int t = 0; t < k; ++t) {
      if ((local >> (k - 1 - t)) & 1u) {
        g |= std::uint64_t{1} << stagesim::bit_position(block.idx[t], num_qubits);
      }
    }
    for (int t = 0; t < r; ++t) {
      if ((env >> (r - 1 - t)) & 1u) {
        g |= std::uint64_t{1} << stagesim::bit_position(rest.idx[t], num_qubits);
      }
    }
    return g;
  };
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                static_cast<Eigen::Index>(dim));
  for (std::uint64_t a = 0; a < dk; ++a) {
    for (std::uint64_t b = 0; b < dk; ++b) {
      const cplx v = op(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      if (v == cplx{0.0, 0.0}) continue;
      for (std::uint64_t e = 0; e < dr; ++e) {
        out(static_cast<Eigen::Index>(global_index(a, e)),
            static_cast<Eigen::Index>(global_index(b, e))) += v;
      }
    }
  }
  return out;
}

// Joint outcome distribution of a test computed with explicit projectors:
// for every combination of degenerate eigenspaces (one per block) build the
// product projector in the full space and take <psi| P |psi>.
struct ProjectorOutcome {
  std::vector<int> group_index;
  std::vector<double> eigenvalue;
  double probability = 0.0;
};

inline std::vector<ProjectorOutcome> outcome_distribution_projectors(
    const StateVector& state, const stagesim::TestSpec& spec,
    double cluster_tol = stagesim::kEigenClusterTol,
    double prob_floor = stagesim::kOutcomeProbFloor) {
  // Blocks in ascending first-qubit order, as the engine reports them.
  std::vector<const stagesim::TestBlock*> blocks;
  for (const auto& b : spec.blocks) blocks.push_back(&b);
  std::sort(blocks.begin(), blocks.end(),
            [](const auto* a, const auto* b) {
              return a->qubits.idx.front() < b->qubits.idx.front();
            });

  struct BlockGroups {
    std::vector<double> values;                  // representative per group
    std::vector<Eigen::MatrixXcd> projectors;    // embedded, per group
  };
  std::vector<BlockGroups> per_block;
  for (const auto* tb : blocks) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(tb->op.mat);
    const auto& evals = es.eigenvalues();
    const auto& evecs = es.eigenvectors();
    BlockGroups bg;
    Eigen::Index c = 0;
    while (c < evals.size()) {
      Eigen::Index c2 = c;
      double sum = 0.0;
      Eigen::MatrixXcd proj =
          Eigen::MatrixXcd::Zero(evals.size(), evals.size());
      while (c2 < evals.size() && evals(c2) - evals(c) <= cluster_tol) {
        proj += evecs.col(c2) * evecs.col(c2).adjoint();
        sum += evals(c2);
        ++c2;
      }
      bg.values.push_back(sum / static_cast<double>(c2 - c));
      bg.projectors.push_back(embed(proj, state.num_qubits, tb->qubits));
      c = c2;
    }
    per_block.push_back(std::move(bg));
  }

  const Eigen::VectorXcd psi = to_vector(state);
  std::vector<ProjectorOutcome> out;
  std::vector<int> idx(per_block.size(), 0);
  while (true) {
    Eigen::VectorXcd v = psi;
    for (std::size_t b = 0; b < per_block.size(); ++b) {
      v = per_block[b].projectors[static_cast<std::size_t>(idx[b])] * v;
    }
    const double p = v.squaredNorm();
    if (p > prob_floor) {
      ProjectorOutcome o;
      o.group_index = idx;
      for (std::size_t b = 0; b < per_block.size(); ++b) {
        o.eigenvalue.push_back(
            per_block[b].values[static_cast<std::size_t>(idx[b])]);
      }
      o.probability = p;
      out.push_back(std::move(o));
    }
    // Odometer increment, last block fastest, matching ascending key order.
    int b = static_cast<int>(per_block.size()) - 1;
    while (b >= 0) {
      if (++idx[static_cast<std::size_t>(b)] <
          static_cast<int>(per_block[static_cast<std::size_t>(b)].values.size())) {
        break;
      }
      idx[static_cast<std::size_t>(b)] = 0;
      --b;
    }
    if (b < 0) break;
  }
  return out;
}

// Jordan-Wigner annihilation operator as an explicit Kronecker chain:
// Z on every mode before j, the lowering matrix |0><1| at j, identity after.
// Qubit 0 is the leftmost factor (most significant bit), matching the
// register layout.
inline Eigen::MatrixXcd jw_annihilation_dense(int mode, int num_qubits) {
  Eigen::MatrixXcd lower(2, 2);
  lower << 0.0, 1.0, 0.0, 0.0;  // |0><1|
  Eigen::MatrixXcd acc(1, 1);
  acc(0, 0) = 1.0;
  for (int q = 0; q < num_qubits; ++q) {
    if (q < mode) {
      acc = kron(acc, pauli_z());
    } else if (q == mode) {
      acc = kron(acc, lower);
    } else {
      acc = kron(acc, pauli_i());
    }
  }
  return acc;
}

inline double entropy_base2(const std::vector<double>& probs,
                            double zero_tol = 1e-12) {
  double s = 0.0;
  for (double p : probs) {
    if (p > zero_tol) s -= p * std::log2(p);
  }
  return s;
}

}  // namespace oracle

#include "stagesim/kernels.hpp"

#include <cstddef>
#include <stdexcept>

namespace stagesim::kernels {

namespace {

// Chunked reduction: partial sums per fixed-size chunk, combined in chunk
// order. The chunk grid is independent of the thread count, so the result is
// bit-identical no matter how the chunks were scheduled.
constexpr std::size_t kChunk = 8192;

// Same idea for loops over block environments, which are coarser units of
// work than single amplitudes.
constexpr std::uint64_t kEnvChunk = 2048;

}  // namespace

BlockIndexer::BlockIndexer(int num_qubits, const QubitSet& block) {
  block.validate(num_qubits);
  const int k = block.size();
  block_offset.assign(std::size_t{1} << k, 0);
  for (std::uint64_t s = 0; s < block_offset.size(); ++s) {
    std::uint64_t off = 0;
    for (int j = 0; j < k; ++j) {
      if ((s >> (k - 1 - j)) & 1u) off |= basis_bit(block.idx[j], num_qubits);
    }
    block_offset[s] = off;
  }
  for (int q = num_qubits - 1; q >= 0; --q) {
    // Ascending bit positions so bit t of the counter lands at env_positions[t].
    if (!block.contains(q)) env_positions.push_back(bit_position(q, num_qubits));
  }
  for (int pos : env_positions) env_mask |= std::uint64_t{1} << pos;
}

namespace serial {

double norm2(const std::vector<cplx>& amps) {
  double s = 0.0;
  for (const cplx& a : amps) s += std::norm(a);
  return s;
}

cplx dot(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

void apply_block(const Eigen::MatrixXcd& m, std::vector<cplx>& amps,
                 int num_qubits, const QubitSet& block) {
  const BlockIndexer ix(num_qubits, block);
  const std::uint64_t d = ix.block_offset.size();
  if (m.rows() != static_cast<Eigen::Index>(d) || m.cols() != m.rows()) {
    throw std::invalid_argument("apply_block: operator dimension mismatch");
  }
  const std::uint64_t envs = amps.size() >> block.size();
  Eigen::VectorXcd v(d), y(d);
  std::uint64_t base = 0;
  for (std::uint64_t e = 0; e < envs; ++e) {
    for (std::uint64_t s = 0; s < d; ++s) v(s) = amps[base | ix.block_offset[s]];
    y.noalias() = m * v;
    for (std::uint64_t s = 0; s < d; ++s) amps[base | ix.block_offset[s]] = y(s);
    base = ix.env_next(base);
  }
}

void reduced_gram(const std::vector<cplx>& amps, int num_qubits,
                  const QubitSet& keep, Eigen::MatrixXcd& out) {
  const BlockIndexer ix(num_qubits, keep);
  const std::uint64_t d = ix.block_offset.size();
  const std::uint64_t envs = amps.size() >> keep.size();
  out.setZero(d, d);
  std::vector<cplx> v(d);
  std::uint64_t base = 0;
  for (std::uint64_t e = 0; e < envs; ++e) {
    for (std::uint64_t s = 0; s < d; ++s) v[s] = amps[base | ix.block_offset[s]];
    for (std::uint64_t a = 0; a < d; ++a) {
      const cplx va = v[a];
      for (std::uint64_t b = a; b < d; ++b) {
        out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) +=
            va * std::conj(v[b]);
      }
    }
    base = ix.env_next(base);
  }
  for (std::uint64_t a = 0; a < d; ++a) {
    for (std::uint64_t b = a + 1; b < d; ++b) {
      out(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) =
          std::conj(out(static_cast<Eigen::Index>(a),
                        static_cast<Eigen::Index>(b)));
    }
  }
}

}  // namespace serial

double norm2(const std::vector<cplx>& amps) {
  const std::size_t n = amps.size();
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  if (chunks <= 1) return serial::norm2(amps);
  std::vector<double> partial(chunks, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
    const std::size_t hi = std::min(lo + kChunk, n);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += std::norm(amps[i]);
    partial[c] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

cplx dot(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  const std::size_t n = a.size();
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  if (chunks <= 1) return serial::dot(a, b);
  std::vector<cplx> partial(chunks, cplx{0.0, 0.0});
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
    const std::size_t hi = std::min(lo + kChunk, n);
    cplx s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += std::conj(a[i]) * b[i];
    partial[c] = s;
  }
  cplx total = 0.0;
  for (const cplx& p : partial) total += p;
  return total;
}

void apply_block(const Eigen::MatrixXcd& m, std::vector<cplx>& amps,
                 int num_qubits, const QubitSet& block) {
  const BlockIndexer ix(num_qubits, block);
  const std::uint64_t d = ix.block_offset.size();
  if (m.rows() != static_cast<Eigen::Index>(d) || m.cols() != m.rows()) {
    throw std::invalid_argument("apply_block: operator dimension mismatch");
  }
  const std::uint64_t envs = amps.size() >> block.size();
  const std::uint64_t chunks = (envs + kEnvChunk - 1) / kEnvChunk;
  if (chunks <= 1) {
    serial::apply_block(m, amps, num_qubits, block);
    return;
  }
  // Environments touch disjoint index sets, so parallel writes never race
  // and the result is independent of scheduling.
#pragma omp parallel
  {
    Eigen::VectorXcd v(d), y(d);
#pragma omp for schedule(static)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
      const std::uint64_t lo = static_cast<std::uint64_t>(c) * kEnvChunk;
      const std::uint64_t hi = std::min(lo + kEnvChunk, envs);
      std::uint64_t base = ix.env_base(lo);
      for (std::uint64_t e = lo; e < hi; ++e) {
        for (std::uint64_t s = 0; s < d; ++s) {
          v(s) = amps[base | ix.block_offset[s]];
        }
        y.noalias() = m * v;
        for (std::uint64_t s = 0; s < d; ++s) {
          amps[base | ix.block_offset[s]] = y(s);
        }
        base = ix.env_next(base);
      }
    }
  }
}

void reduced_gram(const std::vector<cplx>& amps, int num_qubits,
                  const QubitSet& keep, Eigen::MatrixXcd& out) {
  const BlockIndexer ix(num_qubits, keep);
  const std::uint64_t d = ix.block_offset.size();
  const std::uint64_t envs = amps.size() >> keep.size();
  const std::uint64_t chunks = (envs + kEnvChunk - 1) / kEnvChunk;
  if (chunks <= 1) {
    serial::reduced_gram(amps, num_qubits, keep, out);
    return;
  }
  // One partial Gram per fixed-size environment chunk; partials are combined
  // in chunk order afterwards, so the result is independent of thread count.
  std::vector<Eigen::MatrixXcd> partial(chunks);
#pragma omp parallel
  {
    std::vector<cplx> v(d);
#pragma omp for schedule(static)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
      Eigen::MatrixXcd& g = partial[static_cast<std::size_t>(c)];
      g.setZero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
      const std::uint64_t lo = static_cast<std::uint64_t>(c) * kEnvChunk;
      const std::uint64_t hi = std::min(lo + kEnvChunk, envs);
      std::uint64_t base = ix.env_base(lo);
      for (std::uint64_t e = lo; e < hi; ++e) {
        for (std::uint64_t s = 0; s < d; ++s) {
          v[s] = amps[base | ix.block_offset[s]];
        }
        for (std::uint64_t a = 0; a < d; ++a) {
          const cplx va = v[a];
          for (std::uint64_t b = a; b < d; ++b) {
            g(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) +=
                va * std::conj(v[b]);
          }
        }
        base = ix.env_next(base);
      }
    }
  }
  out.setZero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::uint64_t c = 0; c < chunks; ++c) out += partial[c];
  for (std::uint64_t a = 0; a < d; ++a) {
    for (std::uint64_t b = a + 1; b < d; ++b) {
      out(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) =
          std::conj(out(static_cast<Eigen::Index>(a),
                        static_cast<Eigen::Index>(b)));
    }
  }
}

}  // namespace stagesim::kernels

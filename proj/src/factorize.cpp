#include "stagesim/factorize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <json.hpp>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "stagesim/kernels.hpp"

namespace stagesim {

namespace {

enum class CutClass { factor, warn, entangled };

void check_eps(double eps) {
  if (!(eps > 0.0) || eps >= 0.5) {
    throw std::invalid_argument("factorization eps must lie in (0, 0.5)");
  }
}

// Purity classification memo. A cut and its complement share one entry.
struct PurityCache {
  const StateVector& s;
  double eps;
  std::uint32_t full_mask;
  std::unordered_map<std::uint32_t, double> memo;

  PurityCache(const StateVector& state, double e)
      : s(state), eps(e), full_mask((1u << state.num_qubits) - 1u) {}

  double purity_of(std::uint32_t mask) {
    const std::uint32_t canon = std::min(mask, full_mask & ~mask);
    auto it = memo.find(canon);
    if (it != memo.end()) return it->second;
    const double p = cut_purity(s, QubitSet::from_mask(canon));
    memo.emplace(canon, p);
    return p;
  }

  CutClass classify(std::uint32_t mask) {
    const double p = purity_of(mask);
    if (p >= 1.0 - eps) return CutClass::factor;
    if (p >= 1.0 - 10.0 * eps) return CutClass::warn;
    return CutClass::entangled;
  }
};

// Ceiling on the mutual information between qubits living in different
// factor blocks, given that block cuts may miss purity 1 by up to 10 eps.
// Data processing bounds MI(i, j) by 2 S(rho_B), and a reduced state with
// purity 1 - delta has entropy at most about delta (N + log2(1/delta) + 3)
// bits. A factor of 20 on top keeps the prune fail-safe: a threshold that is
// too high only costs extra purity evaluations, never a wrong split.
double mi_prune_threshold(double eps, int num_qubits) {
  const double delta = 10.0 * eps;
  const double bits = num_qubits + std::log2(1.0 / delta) + 3.0;
  const double thr = 40.0 * delta * bits;
  if (thr >= 0.05) return std::numeric_limits<double>::infinity();
  return thr;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void merge(int a, int b) { parent[find(a)] = find(b); }
};

// Masks of the connected components of the thresholded MI graph. Pairs that
// are already connected are skipped; that cannot change the components.
std::vector<std::uint32_t> mi_components(const StateVector& s, double eps) {
  const int n = s.num_qubits;
  const double thr = mi_prune_threshold(eps, n);
  UnionFind uf(n);
  if (std::isfinite(thr)) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (uf.find(i) == uf.find(j)) continue;
        if (mutual_information(s, i, j) > thr) uf.merge(i, j);
      }
    }
  }
  std::unordered_map<int, std::uint32_t> comp;
  for (int i = 0; i < n; ++i) comp[uf.find(i)] |= 1u << i;
  std::vector<std::uint32_t> masks;
  for (const auto& [root, mask] : comp) masks.push_back(mask);
  std::sort(masks.begin(), masks.end());
  return masks;
}

// True when the candidate slices through a component (so its cut cannot
// reach factor purity and is skipped).
bool splits_component(std::uint32_t cand,
                      const std::vector<std::uint32_t>& comps) {
  for (std::uint32_t c : comps) {
    const std::uint32_t overlap = cand & c;
    if (overlap != 0 && overlap != c) return true;
  }
  return false;
}

void phase_fix(StateVector& v) {
  std::size_t k = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < v.amps.size(); ++i) {
    const double m = std::abs(v.amps[i]);
    if (m > best + 1e-15) {
      best = m;
      k = i;
    }
  }
  if (best <= 0.0) return;
  const cplx ph = v.amps[k] / std::abs(v.amps[k]);
  const cplx rot = std::conj(ph);
  for (cplx& a : v.amps) a *= rot;
}

// Per-factor state: dominant eigenvector of the reduced density matrix on
// the block. Small blocks go through a dense eigensolve; larger ones use a
// deterministic power iteration on the amplitude matrix, which computes the
// same vector without materializing the density matrix.
StateVector extract_block_state(const StateVector& s, const QubitSet& block) {
  StateVector out;
  out.num_qubits = block.size();
  if (block.size() == s.num_qubits) {
    out.amps = s.amps;
    phase_fix(out);
    return out;
  }
  const std::uint64_t d = std::uint64_t{1} << block.size();
  if (block.size() <= 10) {
    Eigen::MatrixXcd rho;
    kernels::reduced_gram(s.amps, s.num_qubits, block, rho);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
    const Eigen::VectorXcd v = es.eigenvectors().col(es.eigenvectors().cols() - 1);
    out.amps.assign(v.data(), v.data() + d);
  } else {
    const kernels::BlockIndexer ix(s.num_qubits, block);
    const std::uint64_t envs = s.amps.size() >> block.size();
    // Start from the basis row with the largest weight.
    std::uint64_t best_a = 0;
    double best_w = -1.0;
    for (std::uint64_t a = 0; a < d; ++a) {
      double w = 0.0;
      for (std::uint64_t e = 0; e < envs; ++e) {
        w += std::norm(s.amps[ix.env_base(e) | ix.block_offset[a]]);
      }
      if (w > best_w) {
        best_w = w;
        best_a = a;
      }
    }
    std::vector<cplx> u(d, cplx{0.0, 0.0}), w(envs);
    u[best_a] = 1.0;
    for (int iter = 0; iter < 3; ++iter) {
      for (std::uint64_t e = 0; e < envs; ++e) {
        cplx acc = 0.0;
        const std::uint64_t base = ix.env_base(e);
        for (std::uint64_t a = 0; a < d; ++a) {
          acc += std::conj(s.amps[base | ix.block_offset[a]]) * u[a];
        }
        w[e] = acc;
      }
      for (std::uint64_t a = 0; a < d; ++a) {
        cplx acc = 0.0;
        for (std::uint64_t e = 0; e < envs; ++e) {
          acc += s.amps[ix.env_base(e) | ix.block_offset[a]] * w[e];
        }
        u[a] = acc;
      }
      double nrm = std::sqrt(kernels::norm2(u));
      if (nrm <= 0.0) throw std::runtime_error("block state extraction failed");
      for (cplx& a : u) a /= nrm;
    }
    out.amps = std::move(u);
  }
  const double nrm = out.norm();
  if (nrm <= 0.0) throw std::runtime_error("block state extraction failed");
  for (cplx& a : out.amps) a /= nrm;
  phase_fix(out);
  return out;
}

struct FoundBlock {
  QubitSet qubits;
  bool warn = false;
};

// Lexicographic combinations of size k from `pool` (ascending indices).
struct Combinations {
  const std::vector<int>& pool;
  int k;
  std::vector<int> c;
  bool first = true;

  Combinations(const std::vector<int>& p, int kk) : pool(p), k(kk) {
    c.resize(k);
    for (int i = 0; i < k; ++i) c[i] = i;
  }

  bool next() {
    const int n = static_cast<int>(pool.size());
    if (first) {
      first = false;
      return k <= n;
    }
    int i = k - 1;
    while (i >= 0 && c[i] == n - k + i) --i;
    if (i < 0) return false;
    ++c[i];
    for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
    return true;
  }

  std::uint32_t mask() const {
    std::uint32_t m = 0;
    for (int i : c) m |= 1u << pool[i];
    return m;
  }
};

void split_recursive(PurityCache& cache,
                     const std::vector<std::uint32_t>& comps,
                     std::vector<int> qubits, int num_qubits,
                     std::vector<FoundBlock>& out) {
  const int nb = static_cast<int>(qubits.size());
  if (nb == 1) {
    FoundBlock fb{QubitSet{qubits[0]}, false};
    fb.warn = cache.classify(1u << qubits[0]) == CutClass::warn;
    out.push_back(std::move(fb));
    return;
  }
  for (int k = 1; k <= nb / 2; ++k) {
    Combinations gen(qubits, k);
    while (gen.next()) {
      const std::uint32_t cand = gen.mask();
      if (splits_component(cand, comps)) continue;
      const CutClass c = cache.classify(cand);
      if (c == CutClass::entangled) continue;
      // First qualifying subset in (size, lex) order: necessarily minimal,
      // hence irreducible. Emit it and keep splitting the remainder.
      out.push_back({QubitSet::from_mask(cand), c == CutClass::warn});
      std::vector<int> rest;
      for (int q : qubits) {
        if (!(cand & (1u << q))) rest.push_back(q);
      }
      split_recursive(cache, comps, std::move(rest), num_qubits, out);
      return;
    }
  }
  // Irreducible block. If it is a proper subset its own cut class is known;
  // the whole register has no cut to classify.
  FoundBlock fb{QubitSet(qubits), false};
  if (nb < num_qubits) {
    fb.warn = cache.classify(fb.qubits.mask()) == CutClass::warn;
  }
  out.push_back(std::move(fb));
}

FactorPartition assemble(const StateVector& s,
                         std::vector<FoundBlock> found) {
  std::sort(found.begin(), found.end(),
            [](const FoundBlock& a, const FoundBlock& b) {
              return a.qubits.idx[0] < b.qubits.idx[0];
            });
  FactorPartition p;
  p.num_qubits = s.num_qubits;
  for (std::size_t i = 0; i < found.size(); ++i) {
    p.blocks.push_back(found[i].qubits);
    if (found[i].warn) p.warn_blocks.push_back(static_cast<int>(i));
  }
  for (const QubitSet& b : p.blocks) {
    p.block_states.push_back(extract_block_state(s, b));
  }
  return p;
}

}  // namespace

bool same_blocks(const FactorPartition& a, const FactorPartition& b) {
  return a.num_qubits == b.num_qubits && a.blocks == b.blocks;
}

int schmidt_rank(const StateVector& s, const QubitSet& cut, double eps) {
  s.validate();
  cut.validate(s.num_qubits);
  if (cut.empty() || cut.size() >= s.num_qubits) {
    throw std::invalid_argument(
        "schmidt_rank: cut must be a proper nonempty subset");
  }
  if (!(eps > 0.0)) throw std::invalid_argument("schmidt_rank: eps <= 0");
  // Both sides of the cut carry the same nonzero spectrum, so the count can
  // be taken on the cheaper one.
  const QubitSet side =
      2 * cut.size() <= s.num_qubits ? cut : cut.complement(s.num_qubits);
  Eigen::MatrixXcd rho;
  kernels::reduced_gram(s.amps, s.num_qubits, side, rho);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho,
                                                     Eigen::EigenvaluesOnly);
  int rank = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) > eps) ++rank;
  }
  return rank;
}

bool is_product(const StateVector& s, const QubitSet& sub, double eps) {
  s.validate();
  check_eps(eps);
  return cut_purity(s, sub) >= 1.0 - eps;
}

FactorPartition finest_factorization(const StateVector& s, double eps) {
  s.validate();
  check_eps(eps);
  const int n = s.num_qubits;
  FactorPartition p;
  p.num_qubits = n;
  if (n == 1) {
    p.blocks.push_back(QubitSet{0});
    StateVector copy = s;
    phase_fix(copy);
    p.block_states.push_back(std::move(copy));
    return p;
  }

  // Collapse output is typically one exact computational ket. When the tail
  // mass is this tiny every single-qubit cut has purity >= 1 - 4e-12, which
  // clears eps without entering the warning band, so the all-singleton
  // answer can be emitted without any purity evaluations.
  if (eps >= 1e-10) {
    std::uint64_t imax = 0;
    double pmax = -1.0;
    for (std::uint64_t i = 0; i < s.amps.size(); ++i) {
      const double w = std::norm(s.amps[i]);
      if (w > pmax) {
        pmax = w;
        imax = i;
      }
    }
    double tail = 0.0;
    for (std::uint64_t i = 0; i < s.amps.size(); ++i) {
      if (i != imax) tail += std::norm(s.amps[i]);
    }
    if (tail <= 1e-24) {
      for (int q = 0; q < n; ++q) {
        p.blocks.push_back(QubitSet{q});
        p.block_states.push_back(
            StateVector::basis(1, static_cast<std::uint64_t>(
                                      bit_of(imax, q, n))));
      }
      return p;
    }
  }

  PurityCache cache(s, eps);
  const std::vector<std::uint32_t> comps = mi_components(s, eps);
  std::vector<FoundBlock> found;
  std::vector<int> all(n);
  for (int q = 0; q < n; ++q) all[q] = q;
  split_recursive(cache, comps, std::move(all), n, found);
  return assemble(s, std::move(found));
}

FactorPartition brute_force_factorization(const StateVector& s, double eps) {
  s.validate();
  check_eps(eps);
  const int n = s.num_qubits;
  if (n > 8) {
    throw std::invalid_argument(
        "brute_force_factorization: guarded to at most 8 qubits");
  }
  FactorPartition p;
  p.num_qubits = n;
  if (n == 1) {
    p.blocks.push_back(QubitSet{0});
    StateVector copy = s;
    phase_fix(copy);
    p.block_states.push_back(std::move(copy));
    return p;
  }

  PurityCache cache(s, eps);
  // Restricted-growth strings enumerate every set partition exactly once in
  // lexicographic order; block labels appear in first-occurrence order, so
  // blocks come out sorted by their smallest member.
  std::vector<int> rgs(n, 0);
  std::vector<std::uint32_t> best_masks = {(1u << n) - 1u};
  int best_count = 1;
  for (;;) {
    int nb = 0;
    for (int i = 0; i < n; ++i) nb = std::max(nb, rgs[i] + 1);
    if (nb > best_count) {
      std::vector<std::uint32_t> masks(nb, 0);
      for (int i = 0; i < n; ++i) masks[rgs[i]] |= 1u << i;
      bool ok = true;
      if (nb > 1) {
        for (std::uint32_t m : masks) {
          if (cache.classify(m) == CutClass::entangled) {
            ok = false;
            break;
          }
        }
      }
      if (ok) {
        best_masks = masks;
        best_count = nb;
      }
    }
    // Advance to the next restricted-growth string.
    int i = n - 1;
    for (; i >= 1; --i) {
      int m = 0;
      for (int j = 0; j < i; ++j) m = std::max(m, rgs[j]);
      if (rgs[i] <= m) {
        ++rgs[i];
        for (int j = i + 1; j < n; ++j) rgs[j] = 0;
        break;
      }
    }
    if (i < 1) break;
  }

  std::vector<FoundBlock> found;
  for (std::uint32_t m : best_masks) {
    FoundBlock fb{QubitSet::from_mask(m), false};
    if (best_count > 1) fb.warn = cache.classify(m) == CutClass::warn;
    found.push_back(std::move(fb));
  }
  return assemble(s, std::move(found));
}

double classicity(const FactorPartition& p) {
  if (p.num_qubits < 2) {
    throw std::invalid_argument("classicity: defined for registers of >= 2");
  }
  if (p.blocks.empty()) {
    throw std::invalid_argument("classicity: empty partition");
  }
  return std::log(static_cast<double>(p.num_blocks())) /
         std::log(static_cast<double>(p.num_qubits));
}

StateVector reconstruct(const FactorPartition& p) {
  if (p.block_states.size() != p.blocks.size()) {
    throw std::invalid_argument("reconstruct: block states missing");
  }
  StateVector out;
  out.num_qubits = p.num_qubits;
  out.amps.assign(std::uint64_t{1} << p.num_qubits, cplx{1.0, 0.0});
  for (std::size_t b = 0; b < p.blocks.size(); ++b) {
    const QubitSet& qs = p.blocks[b];
    const int k = qs.size();
    for (std::uint64_t i = 0; i < out.amps.size(); ++i) {
      std::uint64_t local = 0;
      for (int j = 0; j < k; ++j) {
        local |= static_cast<std::uint64_t>(bit_of(i, qs.idx[j], p.num_qubits))
                 << (k - 1 - j);
      }
      out.amps[i] *= p.block_states[b].amps[local];
    }
  }
  return out;
}

std::string partition_to_json_string(const FactorPartition& p) {
  nlohmann::json j;
  auto& blocks = j["blocks"] = nlohmann::json::array();
  for (const QubitSet& b : p.blocks) blocks.push_back(b.idx);
  if (p.num_qubits >= 2) {
    j["classicity"] = classicity(p);
  } else {
    j["classicity"] = nullptr;
  }
  if (!p.warn_blocks.empty()) j["warn_blocks"] = p.warn_blocks;
  return j.dump(2) + "\n";
}

}  // namespace stagesim

#include "stagesim/jw.hpp"

#include <algorithm>
#include <bit>
#include <json.hpp>
#include <stdexcept>

namespace stagesim::jw {

namespace {

void check_modes(int num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxModes) {
    throw std::invalid_argument("jw: qubit count outside [1, " +
                                std::to_string(kMaxModes) + "]");
  }
}

}  // namespace

SparseMatrix SparseMatrix::zero(int dim) {
  SparseMatrix m;
  m.dim = dim;
  m.cols.resize(dim);
  return m;
}

SparseMatrix SparseMatrix::identity(int dim) {
  SparseMatrix m = zero(dim);
  for (int c = 0; c < dim; ++c) m.cols[c].emplace_back(c, cplx{1.0, 0.0});
  return m;
}

SparseMatrix SparseMatrix::adjoint() const {
  SparseMatrix m = zero(dim);
  for (int c = 0; c < dim; ++c) {
    for (const auto& [r, v] : cols[c]) {
      m.cols[r].emplace_back(c, std::conj(v));
    }
  }
  for (auto& col : m.cols) {
    std::sort(col.begin(), col.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  }
  return m;
}

Eigen::MatrixXcd SparseMatrix::dense() const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (int c = 0; c < dim; ++c) {
    for (const auto& [r, v] : cols[c]) m(r, c) += v;
  }
  return m;
}

double SparseMatrix::max_abs() const {
  double best = 0.0;
  for (const auto& col : cols) {
    for (const auto& [r, v] : col) best = std::max(best, std::abs(v));
  }
  return best;
}

std::size_t SparseMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& col : cols) n += col.size();
  return n;
}

SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.dim != b.dim) throw std::invalid_argument("sparse mul: dim mismatch");
  SparseMatrix out = SparseMatrix::zero(a.dim);
  for (int c = 0; c < b.dim; ++c) {
    // Accumulate a * b.col(c).
    std::vector<std::pair<int, cplx>> acc;
    for (const auto& [k, bv] : b.cols[c]) {
      for (const auto& [r, av] : a.cols[k]) {
        acc.emplace_back(r, av * bv);
      }
    }
    std::sort(acc.begin(), acc.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    auto& col = out.cols[c];
    for (const auto& [r, v] : acc) {
      if (!col.empty() && col.back().first == r) {
        col.back().second += v;
      } else {
        col.emplace_back(r, v);
      }
    }
  }
  return out;
}

namespace {

SparseMatrix add_scaled(const SparseMatrix& a, const SparseMatrix& b,
                        double sign) {
  if (a.dim != b.dim) throw std::invalid_argument("sparse add: dim mismatch");
  SparseMatrix out = SparseMatrix::zero(a.dim);
  for (int c = 0; c < a.dim; ++c) {
    auto& col = out.cols[c];
    std::size_t i = 0, j = 0;
    const auto& ca = a.cols[c];
    const auto& cb = b.cols[c];
    while (i < ca.size() || j < cb.size()) {
      if (j >= cb.size() || (i < ca.size() && ca[i].first < cb[j].first)) {
        col.emplace_back(ca[i].first, ca[i].second);
        ++i;
      } else if (i >= ca.size() || cb[j].first < ca[i].first) {
        col.emplace_back(cb[j].first, sign * cb[j].second);
        ++j;
      } else {
        col.emplace_back(ca[i].first, ca[i].second + sign * cb[j].second);
        ++i;
        ++j;
      }
    }
  }
  return out;
}

}  // namespace

SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b) {
  return add_scaled(a, b, 1.0);
}

SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b) {
  return add_scaled(a, b, -1.0);
}

LadderOperator build_ladder(int mode, LadderKind kind, int num_qubits) {
  check_modes(num_qubits);
  if (mode < 0 || mode >= num_qubits) {
    throw std::invalid_argument("build_ladder: mode out of range");
  }
  const int dim = 1 << num_qubits;
  const std::uint64_t occ_bit = basis_bit(mode, num_qubits);
  // String mask: all modes strictly below `mode`.
  std::uint64_t string_mask = 0;
  for (int k = 0; k < mode; ++k) string_mask |= basis_bit(k, num_qubits);

  // Annihilation first; creation is its adjoint.
  SparseMatrix a = SparseMatrix::zero(dim);
  for (int c = 0; c < dim; ++c) {
    const std::uint64_t uc = static_cast<std::uint64_t>(c);
    if (!(uc & occ_bit)) continue;  // mode empty: a_j kills the state
    const int row = static_cast<int>(uc & ~occ_bit);
    const int parity = std::popcount(uc & string_mask) & 1;
    a.cols[c].emplace_back(row, cplx{parity ? -1.0 : 1.0, 0.0});
  }

  LadderOperator op;
  op.mode = mode;
  op.kind = kind;
  op.num_qubits = num_qubits;
  op.matrix = kind == LadderKind::annihilation ? std::move(a) : a.adjoint();
  return op;
}

SparseMatrix number_operator(int mode, int num_qubits) {
  const LadderOperator a = build_ladder(mode, LadderKind::annihilation,
                                        num_qubits);
  return a.matrix.adjoint() * a.matrix;
}

SparseMatrix anticommutator(const LadderOperator& a, const LadderOperator& b) {
  if (a.num_qubits != b.num_qubits) {
    throw std::invalid_argument("anticommutator: register size mismatch");
  }
  return a.matrix * b.matrix + b.matrix * a.matrix;
}

CarReport verify_car(int num_qubits) {
  if (num_qubits < 2) {
    throw std::invalid_argument("verify_car: need at least 2 modes");
  }
  check_modes(num_qubits);
  const int n = num_qubits;
  std::vector<LadderOperator> ann;
  ann.reserve(n);
  for (int j = 0; j < n; ++j) {
    ann.push_back(build_ladder(j, LadderKind::annihilation, n));
  }
  std::vector<LadderOperator> cre;
  cre.reserve(n);
  for (int j = 0; j < n; ++j) {
    LadderOperator c = ann[j];
    c.kind = LadderKind::creation;
    c.matrix = ann[j].matrix.adjoint();
    cre.push_back(std::move(c));
  }
  const SparseMatrix eye = SparseMatrix::identity(1 << n);

  CarReport rep;
  rep.num_modes = n;
  double dev_delta = 0.0;
  double dev_zero = 0.0;
  // Pairs are independent; the reduction below is a plain max, so order
  // cannot affect the result.
#pragma omp parallel for collapse(2) schedule(static) \
    reduction(max : dev_delta, dev_zero)
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const SparseMatrix mixed = anticommutator(ann[i], cre[j]);
      const double d = i == j ? (mixed - eye).max_abs() : mixed.max_abs();
      dev_delta = std::max(dev_delta, d);
      const double z = anticommutator(ann[i], ann[j]).max_abs();
      dev_zero = std::max(dev_zero, z);
    }
  }
  rep.max_deviation_delta = dev_delta;
  rep.max_deviation_zero = dev_zero;
  return rep;
}

std::string car_report_to_json_string(const CarReport& r) {
  nlohmann::json j;
  j["num_modes"] = r.num_modes;
  j["max_deviation_delta"] = r.max_deviation_delta;
  j["max_deviation_zero"] = r.max_deviation_zero;
  return j.dump(2) + "\n";
}

}  // namespace stagesim::jw

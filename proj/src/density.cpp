#include "stagesim/density.hpp"

#include <cmath>
#include <stdexcept>

#include "stagesim/kernels.hpp"

namespace stagesim {

namespace {

constexpr int kMaxDenseQubits = 12;

void check_hermitian(const Eigen::MatrixXcd& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument(std::string(what) + ": matrix not square");
  }
  const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (dev > kHermTol) {
    throw std::invalid_argument(std::string(what) +
                                ": self-adjointness violated by " +
                                std::to_string(dev));
  }
}

Eigen::MatrixXcd gram_on(const StateVector& s, const QubitSet& keep) {
  Eigen::MatrixXcd out;
  kernels::reduced_gram(s.amps, s.num_qubits, keep, out);
  return out;
}

// Side of the cut with fewer qubits; either side has the same reduced
// spectrum, so purity and entropy can use whichever is cheaper.
QubitSet smaller_side(const StateVector& s, const QubitSet& cut) {
  if (2 * cut.size() <= s.num_qubits) return cut;
  return cut.complement(s.num_qubits);
}

}  // namespace

void DensityMatrix::validate() const {
  check_hermitian(mat, "DensityMatrix");
  const double tr_dev = std::abs(mat.trace() - cplx{1.0, 0.0});
  if (tr_dev > kHermTol) {
    throw std::invalid_argument("DensityMatrix: trace deviates from 1 by " +
                                std::to_string(tr_dev));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(mat,
                                                     Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) {
    throw std::invalid_argument("DensityMatrix: negative eigenvalue " +
                                std::to_string(es.eigenvalues().minCoeff()));
  }
}

void HermitianOperator::validate() const {
  check_hermitian(mat, "HermitianOperator");
}

HermitianOperator HermitianOperator::identity(int dim) {
  return {Eigen::MatrixXcd::Identity(dim, dim)};
}

HermitianOperator HermitianOperator::pauli_z() {
  Eigen::MatrixXcd z(2, 2);
  z << 1.0, 0.0, 0.0, -1.0;
  return {z};
}

HermitianOperator HermitianOperator::from_eigensystem(
    const Eigen::MatrixXcd& vectors, const std::vector<double>& values) {
  if (vectors.rows() != vectors.cols() ||
      vectors.cols() != static_cast<Eigen::Index>(values.size())) {
    throw std::invalid_argument("from_eigensystem: dimension mismatch");
  }
  const Eigen::Index n = vectors.rows();
  // Group the eigenvectors by eigenvalue sign and build the operator from two
  // Hermitian rank-k updates. That halves the flops of a dense V * D * V^H
  // and is self-adjoint by construction, so no symmetrization pass is needed.
  Eigen::Index np = 0, nn = 0;
  for (double v : values) {
    if (v > 0.0) ++np;
    if (v < 0.0) ++nn;
  }
  Eigen::MatrixXcd wp(n, np), wn(n, nn);
  Eigen::Index ip = 0, in = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double v = values[static_cast<std::size_t>(k)];
    if (v > 0.0) wp.col(ip++) = vectors.col(k) * std::sqrt(v);
    if (v < 0.0) wn.col(in++) = vectors.col(k) * std::sqrt(-v);
  }
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  if (np > 0) m.selfadjointView<Eigen::Lower>().rankUpdate(wp, 1.0);
  if (nn > 0) m.selfadjointView<Eigen::Lower>().rankUpdate(wn, -1.0);
  Eigen::MatrixXcd full = m.selfadjointView<Eigen::Lower>();
  return {std::move(full)};
}

DensityMatrix partial_trace(const StateVector& s, const QubitSet& keep) {
  keep.validate(s.num_qubits);
  if (keep.empty() || keep.size() >= s.num_qubits) {
    throw std::invalid_argument(
        "partial_trace: keep must be a proper nonempty subset");
  }
  if (keep.size() > kMaxDenseQubits) {
    throw std::invalid_argument(
        "partial_trace: dense reduced matrix over more than 12 qubits");
  }
  return {gram_on(s, keep)};
}

double purity(const DensityMatrix& rho) {
  return rho.mat.squaredNorm();  // sum |rho_ab|^2 = Tr(rho^2) for Hermitian rho
}

double cut_purity(const StateVector& s, const QubitSet& cut) {
  cut.validate(s.num_qubits);
  if (cut.empty() || cut.size() >= s.num_qubits) {
    throw std::invalid_argument(
        "cut_purity: cut must be a proper nonempty subset");
  }
  return gram_on(s, smaller_side(s, cut)).squaredNorm();
}

double spectrum_entropy(const Eigen::MatrixXcd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho,
                                                     Eigen::EigenvaluesOnly);
  double h = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double p = es.eigenvalues()(i);
    if (p > kSpectrumZeroTol) h -= p * std::log2(p);
  }
  return h;
}

double entanglement_entropy(const StateVector& s, const QubitSet& cut) {
  cut.validate(s.num_qubits);
  if (cut.empty() || cut.size() >= s.num_qubits) {
    throw std::invalid_argument(
        "entanglement_entropy: cut must be a proper nonempty subset");
  }
  return spectrum_entropy(gram_on(s, smaller_side(s, cut)));
}

double mutual_information(const StateVector& s, int i, int j) {
  if (i == j) throw std::invalid_argument("mutual_information: i == j");
  if (s.num_qubits < 2) {
    throw std::invalid_argument("mutual_information: need at least 2 qubits");
  }
  // One reduced matrix on the pair is enough: both single-qubit marginals
  // come from tracing one local index of the 4x4, so the amplitude vector is
  // swept once instead of three times. When the pair is the whole register
  // the 4x4 is a pure-state dyad and its entropy is zero, as it should be.
  const QubitSet pair{i, j};
  Eigen::MatrixXcd rho_pair;
  kernels::reduced_gram(s.amps, s.num_qubits, pair, rho_pair);
  Eigen::MatrixXcd rho_p(2, 2), rho_q(2, 2);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      rho_p(a, b) = rho_pair(2 * a, 2 * b) + rho_pair(2 * a + 1, 2 * b + 1);
      rho_q(a, b) = rho_pair(a, b) + rho_pair(2 + a, 2 + b);
    }
  }
  const double mi = spectrum_entropy(rho_p) + spectrum_entropy(rho_q) -
                    spectrum_entropy(rho_pair);
  if (mi < 0.0) {
    if (mi < -kMiClampTol) {
      throw std::runtime_error(
          "mutual_information: negative beyond tolerance: " +
          std::to_string(mi));
    }
    return 0.0;
  }
  return mi;
}

}  // namespace stagesim

// density.hpp
// Reduced density matrices, Hermitian test operators and the entropy /
// mutual-information measures built on them. Entropy is base 2 throughout;
// eigenvalues below kSpectrumZeroTol are treated as exact zeros.

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "stagesim/state.hpp"
#include "stagesim/types.hpp"

namespace stagesim {

inline constexpr double kHermTol = 1e-12;
inline constexpr double kSpectrumZeroTol = 1e-12;
// Mutual information is clamped to 0 when it lands within this band below 0;
// anything more negative indicates a real defect and throws.
inline constexpr double kMiClampTol = 1e-9;

struct DensityMatrix {
  Eigen::MatrixXcd mat;

  int dim() const { return static_cast<int>(mat.rows()); }
  // Hermitian within kHermTol, unit trace within kHermTol, eigenvalues
  // >= -1e-10. The eigenvalue check diagonalizes, so call it in tests and at
  // trust boundaries rather than in inner loops.
  void validate() const;
};

struct HermitianOperator {
  Eigen::MatrixXcd mat;

  int dim() const { return static_cast<int>(mat.rows()); }
  void validate() const;  // square, self-adjoint within kHermTol

  static HermitianOperator identity(int dim);
  static HermitianOperator pauli_z();
  // sum_k values[k] |vectors.col(k)><vectors.col(k)|
  static HermitianOperator from_eigensystem(const Eigen::MatrixXcd& vectors,
                                            const std::vector<double>& values);
};

// Reduced state on `keep` (proper nonempty subset). Dense output, so the
// kept side is capped at 12 qubits.
DensityMatrix partial_trace(const StateVector& s, const QubitSet& keep);

double purity(const DensityMatrix& rho);

// Tr(rho_cut^2) evaluated on the smaller side of the cut; equal to the purity
// of either side by the symmetry of the reduced spectra.
double cut_purity(const StateVector& s, const QubitSet& cut);

// Base-2 von Neumann entropy of the reduced state on `cut`.
double entanglement_entropy(const StateVector& s, const QubitSet& cut);

// S(rho_i) + S(rho_j) - S(rho_ij) for single qubits i != j.
double mutual_information(const StateVector& s, int i, int j);

// Entropy of the spectrum of a PSD Hermitian matrix (base 2).
double spectrum_entropy(const Eigen::MatrixXcd& rho);

}  // namespace stagesim

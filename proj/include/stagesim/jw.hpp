// jw.hpp
// Fermionic ladder operators on the qubit register via the Jordan-Wigner
// encoding: mode j lives on qubit j, |1> means occupied, and the sign string
// runs over modes below j. Ladder matrices have at most one entry per
// column, so a small column-compressed representation keeps products and
// anticommutators exact and cheap at any register size up to the guard.

#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "stagesim/types.hpp"

namespace stagesim::jw {

inline constexpr int kMaxModes = 12;

struct SparseMatrix {
  int dim = 0;
  // cols[c] holds (row, value) entries sorted by row.
  std::vector<std::vector<std::pair<int, cplx>>> cols;

  static SparseMatrix zero(int dim);
  static SparseMatrix identity(int dim);

  SparseMatrix adjoint() const;
  Eigen::MatrixXcd dense() const;
  double max_abs() const;
  std::size_t nonzeros() const;
};

SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b);
SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b);
SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b);

enum class LadderKind { annihilation, creation };

struct LadderOperator {
  int mode = 0;
  LadderKind kind = LadderKind::annihilation;
  int num_qubits = 0;
  SparseMatrix matrix;
};

LadderOperator build_ladder(int mode, LadderKind kind, int num_qubits);

// a_j^dag a_j; diagonal with the occupation of mode j.
SparseMatrix number_operator(int mode, int num_qubits);

// {A, B} = AB + BA on the underlying matrices.
SparseMatrix anticommutator(const LadderOperator& a, const LadderOperator& b);

struct CarReport {
  int num_modes = 0;
  // max over (i, j) of || {a_i, a_j^dag} - delta_ij I ||_max
  double max_deviation_delta = 0.0;
  // max over (i, j) of || {a_i, a_j} ||_max
  double max_deviation_zero = 0.0;
};

// Checks the canonical anticommutation relations over all mode pairs.
CarReport verify_car(int num_qubits);

std::string car_report_to_json_string(const CarReport& r);

}  // namespace stagesim::jw

// state.hpp
// Pure states of an N-qubit register as dense amplitude vectors, plus the
// standard constructions and inner-product algebra.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stagesim/rng.hpp"
#include "stagesim/types.hpp"

namespace stagesim {

inline constexpr double kNormTol = 1e-12;

struct StateVector {
  int num_qubits = 0;
  std::vector<cplx> amps;

  static StateVector basis(int num_qubits, std::uint64_t index);
  static StateVector ghz(int num_qubits);
  static StateVector w_state(int num_qubits);
  static StateVector bell() { return ghz(2); }
  // Haar-random pure state: normalized vector of iid complex gaussians.
  static StateVector haar_random(int num_qubits, RngStream& rng);

  std::uint64_t dim() const { return amps.size(); }
  double norm() const;
  void normalize();
  // Throws unless 1 <= N <= kMaxQubits, |amps| = 2^N and the norm is within
  // kNormTol of 1.
  void validate() const;
};

cplx inner_product(const StateVector& a, const StateVector& b);
StateVector tensor_product(const StateVector& a, const StateVector& b);
double fidelity(const StateVector& a, const StateVector& b);

}  // namespace stagesim

#include "stagesim/state.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "stagesim/kernels.hpp"

namespace stagesim {

namespace {

void check_qubit_count(int num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw std::invalid_argument("StateVector: qubit count " +
                                std::to_string(num_qubits) +
                                " outside [1, " + std::to_string(kMaxQubits) +
                                "]");
  }
}

}  // namespace

StateVector StateVector::basis(int num_qubits, std::uint64_t index) {
  check_qubit_count(num_qubits);
  const std::uint64_t d = std::uint64_t{1} << num_qubits;
  if (index >= d) throw std::invalid_argument("basis: index out of range");
  StateVector s;
  s.num_qubits = num_qubits;
  s.amps.assign(d, cplx{0.0, 0.0});
  s.amps[index] = 1.0;
  return s;
}

StateVector StateVector::ghz(int num_qubits) {
  check_qubit_count(num_qubits);
  const std::uint64_t d = std::uint64_t{1} << num_qubits;
  StateVector s;
  s.num_qubits = num_qubits;
  s.amps.assign(d, cplx{0.0, 0.0});
  const double a = 1.0 / std::sqrt(2.0);
  s.amps[0] = a;
  s.amps[d - 1] = a;
  return s;
}

StateVector StateVector::w_state(int num_qubits) {
  check_qubit_count(num_qubits);
  const std::uint64_t d = std::uint64_t{1} << num_qubits;
  StateVector s;
  s.num_qubits = num_qubits;
  s.amps.assign(d, cplx{0.0, 0.0});
  const double a = 1.0 / std::sqrt(static_cast<double>(num_qubits));
  for (int q = 0; q < num_qubits; ++q) {
    s.amps[basis_bit(q, num_qubits)] = a;
  }
  return s;
}

StateVector StateVector::haar_random(int num_qubits, RngStream& rng) {
  check_qubit_count(num_qubits);
  const std::uint64_t d = std::uint64_t{1} << num_qubits;
  StateVector s;
  s.num_qubits = num_qubits;
  s.amps.resize(d);
  for (std::uint64_t i = 0; i < d; ++i) s.amps[i] = rng.gaussian_cplx();
  s.normalize();
  return s;
}

double StateVector::norm() const { return std::sqrt(kernels::norm2(amps)); }

void StateVector::normalize() {
  const double n = norm();
  if (n <= 0.0) throw std::runtime_error("normalize: zero state");
  const double inv = 1.0 / n;
  for (cplx& a : amps) a *= inv;
}

void StateVector::validate() const {
  check_qubit_count(num_qubits);
  if (amps.size() != (std::uint64_t{1} << num_qubits)) {
    throw std::invalid_argument("StateVector: amplitude count is not 2^N");
  }
  if (std::abs(norm() - 1.0) > kNormTol) {
    char buf[96];
    std::snprintf(buf, sizeof(buf),
                  "StateVector: norm %.12g deviates from 1 beyond %.1g", norm(),
                  kNormTol);
    throw std::invalid_argument(buf);
  }
}

cplx inner_product(const StateVector& a, const StateVector& b) {
  if (a.num_qubits != b.num_qubits) {
    throw std::invalid_argument("inner_product: dimension mismatch");
  }
  return kernels::dot(a.amps, b.amps);
}

StateVector tensor_product(const StateVector& a, const StateVector& b) {
  if (a.num_qubits + b.num_qubits > kMaxQubits) {
    throw std::invalid_argument("tensor_product: combined register too large");
  }
  StateVector out;
  out.num_qubits = a.num_qubits + b.num_qubits;
  out.amps.resize(a.dim() * b.dim());
  // a's qubits come first, i.e. occupy the high bits of the joint index.
  for (std::uint64_t i = 0; i < a.dim(); ++i) {
    const std::uint64_t base = i * b.dim();
    for (std::uint64_t j = 0; j < b.dim(); ++j) {
      out.amps[base + j] = a.amps[i] * b.amps[j];
    }
  }
  return out;
}

double fidelity(const StateVector& a, const StateVector& b) {
  return std::norm(inner_product(a, b));
}

}  // namespace stagesim

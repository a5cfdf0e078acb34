// types.hpp
// Basic register-level types: complex amplitudes, qubit index sets and the
// basis-index bit layout used across the whole simulator.

#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace stagesim {

using cplx = std::complex<double>;

// Dense amplitude vectors only; 2^20 doubles-pairs is the practical ceiling.
inline constexpr int kMaxQubits = 20;

// Basis-index layout: qubit 0 is the most significant bit of the index.
inline constexpr int bit_position(int qubit, int num_qubits) {
  return num_qubits - 1 - qubit;
}

inline constexpr std::uint64_t basis_bit(int qubit, int num_qubits) {
  return std::uint64_t{1} << bit_position(qubit, num_qubits);
}

inline constexpr int bit_of(std::uint64_t index, int qubit, int num_qubits) {
  return static_cast<int>((index >> bit_position(qubit, num_qubits)) & 1u);
}

// Ordered set of distinct qubit indices.
struct QubitSet {
  std::vector<int> idx;  // strictly increasing

  QubitSet() = default;
  QubitSet(std::initializer_list<int> qs) : QubitSet(std::vector<int>(qs)) {}
  explicit QubitSet(std::vector<int> qs) : idx(std::move(qs)) {
    std::sort(idx.begin(), idx.end());
    for (std::size_t i = 1; i < idx.size(); ++i) {
      if (idx[i] == idx[i - 1]) {
        throw std::invalid_argument("QubitSet: duplicate qubit index " +
                                    std::to_string(idx[i]));
      }
    }
  }

  // Half-open range [lo, hi).
  static QubitSet range(int lo, int hi) {
    std::vector<int> qs;
    for (int q = lo; q < hi; ++q) qs.push_back(q);
    return QubitSet(std::move(qs));
  }

  static QubitSet from_mask(std::uint32_t mask) {
    std::vector<int> qs;
    for (int q = 0; q < 32; ++q) {
      if (mask & (1u << q)) qs.push_back(q);
    }
    return QubitSet(std::move(qs));
  }

  int size() const { return static_cast<int>(idx.size()); }
  bool empty() const { return idx.empty(); }

  bool contains(int q) const {
    return std::binary_search(idx.begin(), idx.end(), q);
  }

  // Bit q of the mask corresponds to qubit q (set algebra only; unrelated to
  // the basis-index layout above).
  std::uint32_t mask() const {
    std::uint32_t m = 0;
    for (int q : idx) m |= 1u << q;
    return m;
  }

  QubitSet complement(int num_qubits) const {
    std::vector<int> qs;
    for (int q = 0; q < num_qubits; ++q) {
      if (!contains(q)) qs.push_back(q);
    }
    return QubitSet(std::move(qs));
  }

  bool subset_of(const QubitSet& other) const {
    return (mask() & ~other.mask()) == 0;
  }

  bool intersects(const QubitSet& other) const {
    return (mask() & other.mask()) != 0;
  }

  void validate(int num_qubits) const {
    for (int q : idx) {
      if (q < 0 || q >= num_qubits) {
        throw std::invalid_argument("QubitSet: qubit " + std::to_string(q) +
                                    " out of range [0, " +
                                    std::to_string(num_qubits) + ")");
      }
    }
  }

  std::string to_string() const {
    std::string s = "{";
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(idx[i]);
    }
    return s + "}";
  }

  bool operator==(const QubitSet&) const = default;
};

}  // namespace stagesim

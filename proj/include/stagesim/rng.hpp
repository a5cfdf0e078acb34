// rng.hpp
// Seedable randomness with stream splitting. Every consumer derives its own
// generator from (master seed, purpose tag, counters), so adding or removing
// one draw site never perturbs another. Bit-to-double mappings are spelled
// out here instead of using std::*_distribution, which the standard leaves
// implementation-defined; mt19937_64 itself is specified exactly, so streams
// reproduce bit-for-bit everywhere.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string_view>

#include "stagesim/types.hpp"

namespace stagesim {

std::uint64_t fnv1a64(std::string_view s);
std::uint64_t splitmix64(std::uint64_t& x);

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  // Independent stream keyed by a purpose tag and up to two counters.
  static RngStream derive(std::uint64_t master, std::string_view purpose,
                          std::uint64_t a = 0, std::uint64_t b = 0);

  std::uint64_t next_u64();
  double uniform01();    // [0, 1), 53-bit resolution
  double gaussian();     // standard normal, Box-Muller
  cplx gaussian_cplx();  // independent N(0,1) real and imaginary parts

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Random orthonormal basis: identity hit by a product of random complex
// Householder reflections. Columns are dense, generic vectors, which is what
// an entangling eigenbasis needs; the construction costs O(k d^2) instead of
// the O(d^3) QR route.
Eigen::MatrixXcd random_orthobasis(int dim, RngStream& rng);

}  // namespace stagesim

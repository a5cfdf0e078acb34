#include "stagesim/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace stagesim {

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

RngStream::RngStream(std::uint64_t seed) : gen_(seed) {}

RngStream RngStream::derive(std::uint64_t master, std::string_view purpose,
                            std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = master;
  std::uint64_t h = splitmix64(x);
  x ^= fnv1a64(purpose);
  h ^= splitmix64(x);
  x ^= a;
  h ^= splitmix64(x);
  x ^= b;
  h ^= splitmix64(x);
  return RngStream(h);
}

std::uint64_t RngStream::next_u64() { return gen_(); }

double RngStream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // 1 - u keeps the log argument in (0, 1].
  const double u = 1.0 - uniform01();
  const double v = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u));
  const double t = 2.0 * std::numbers::pi * v;
  spare_ = r * std::sin(t);
  have_spare_ = true;
  return r * std::cos(t);
}

cplx RngStream::gaussian_cplx() { return {gaussian(), gaussian()}; }

Eigen::MatrixXcd random_orthobasis(int dim, RngStream& rng) {
  if (dim < 1) throw std::invalid_argument("random_orthobasis: dim < 1");
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Identity(dim, dim);
  if (dim == 1) {
    // A random phase is all there is.
    const double t = 2.0 * std::numbers::pi * rng.uniform01();
    v(0, 0) = cplx(std::cos(t), std::sin(t));
    return v;
  }
  int reflections = 8;
  for (int d = dim; d > 1; d >>= 1) reflections += 2;
  for (int r = 0; r < reflections; ++r) {
    Eigen::VectorXcd w(dim);
    for (int i = 0; i < dim; ++i) w(i) = rng.gaussian_cplx();
    w.normalize();
    // v <- (I - 2 w w^dag) v
    const Eigen::RowVectorXcd t = w.adjoint() * v;
    v.noalias() -= 2.0 * w * t;
  }
  return v;
}

}  // namespace stagesim

#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>

#include "stagesim/io.hpp"
#include "stagesim/rng.hpp"
#include "stagesim/state.hpp"

using stagesim::RngStream;
using stagesim::StateVector;
using stagesim::cplx;

TEST_SUITE("state") {

TEST_CASE("basis states") {
  const StateVector s = StateVector::basis(3, 0b101);
  REQUIRE(s.dim() == 8);
  for (std::uint64_t i = 0; i < 8; ++i) {
    CHECK(s.amps[i] == (i == 0b101 ? cplx{1.0, 0.0} : cplx{0.0, 0.0}));
  }
  CHECK_THROWS_AS(StateVector::basis(2, 4), std::invalid_argument);
}

TEST_CASE("ghz and w constructions") {
  const StateVector ghz = StateVector::ghz(3);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(ghz.amps[0] - r) < 1e-15);
  CHECK(std::abs(ghz.amps[7] - r) < 1e-15);
  CHECK(std::abs(ghz.amps[3]) == 0.0);

  const StateVector w = StateVector::w_state(3);
  const double t = 1.0 / std::sqrt(3.0);
  // One-hot indices: qubit 0 set -> 0b100, qubit 1 -> 0b010, qubit 2 -> 0b001.
  CHECK(std::abs(w.amps[0b100] - t) < 1e-15);
  CHECK(std::abs(w.amps[0b010] - t) < 1e-15);
  CHECK(std::abs(w.amps[0b001] - t) < 1e-15);
  CHECK(std::abs(w.amps[0]) == 0.0);
}

TEST_CASE("frozen inner products") {
  const StateVector ghz = StateVector::ghz(3);
  const cplx ip = inner_product(StateVector::basis(3, 0), ghz);
  CHECK(ip.real() == doctest::Approx(0.7071067811865476).epsilon(1e-15));
  CHECK(ip.imag() == 0.0);
  CHECK(fidelity(ghz, ghz) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(fidelity(StateVector::basis(3, 0), StateVector::basis(3, 1)) == 0.0);
}

TEST_CASE("tensor product layout puts the first factor in the high bits") {
  const StateVector one = StateVector::basis(1, 1);
  const StateVector zero = StateVector::basis(1, 0);
  const StateVector s = tensor_product(one, zero);
  REQUIRE(s.num_qubits == 2);
  CHECK(std::abs(s.amps[0b10] - 1.0) < 1e-15);

  const StateVector bell = StateVector::bell();
  const StateVector t = tensor_product(bell, one);
  REQUIRE(t.num_qubits == 3);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(t.amps[0b001] - r) < 1e-15);
  CHECK(std::abs(t.amps[0b111] - r) < 1e-15);
}

TEST_CASE("haar states are normalized and seed-deterministic") {
  RngStream a(5), b(5), c(6);
  const StateVector sa = StateVector::haar_random(5, a);
  const StateVector sb = StateVector::haar_random(5, b);
  const StateVector sc = StateVector::haar_random(5, c);
  CHECK(sa.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sa.amps == sb.amps);
  CHECK(sa.amps != sc.amps);
}

TEST_CASE("validate rejects broken states") {
  StateVector s = StateVector::basis(2, 0);
  CHECK_NOTHROW(s.validate());
  s.amps[0] = 0.5;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.amps[0] = 1.0;
  s.amps.push_back(cplx{0.0, 0.0});
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("json round trip") {
  RngStream rng(31);
  const StateVector s = StateVector::haar_random(4, rng);
  const std::string text = stagesim::state_to_json_string(s);
  const StateVector back = stagesim::state_from_json_string(text);
  REQUIRE(back.num_qubits == 4);
  for (std::uint64_t i = 0; i < s.dim(); ++i) {
    CHECK(std::abs(back.amps[i] - s.amps[i]) < 1e-15);
  }
}

TEST_CASE("json schema violations throw") {
  CHECK_THROWS_AS(stagesim::state_from_json_string("not json"),
                  std::invalid_argument);
  CHECK_THROWS_AS(stagesim::state_from_json_string("{}"),
                  std::invalid_argument);
  CHECK_THROWS_AS(stagesim::state_from_json_string(
                      R"({"num_qubits": 2, "amplitudes": [[1, 0]]})"),
                  std::invalid_argument);
  // Wrong norm.
  CHECK_THROWS_AS(
      stagesim::state_from_json_string(
          R"({"num_qubits": 1, "amplitudes": [[0.5, 0], [0, 0]]})"),
      std::invalid_argument);
  // Amplitude entries must be [re, im] pairs.
  CHECK_THROWS_AS(
      stagesim::state_from_json_string(
          R"({"num_qubits": 1, "amplitudes": [[1, 0, 0], [0, 0]]})"),
      std::invalid_argument);
}

}  // TEST_SUITE

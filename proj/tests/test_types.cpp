#include <doctest.h>

#include <stdexcept>

#include "stagesim/types.hpp"

using stagesim::QubitSet;

TEST_SUITE("types") {

TEST_CASE("bit position puts qubit 0 in the most significant bit") {
  CHECK(stagesim::bit_position(0, 4) == 3);
  CHECK(stagesim::bit_position(3, 4) == 0);
  CHECK(stagesim::bit_position(0, 1) == 0);
  // Basis index 0b100 of a 3-qubit register means qubit 0 is set.
  CHECK(stagesim::bit_of(0b100, 0, 3) == 1);
  CHECK(stagesim::bit_of(0b100, 1, 3) == 0);
  CHECK(stagesim::bit_of(0b100, 2, 3) == 0);
}

TEST_CASE("construction sorts and rejects duplicates") {
  const QubitSet s{3, 1, 2};
  CHECK(s.idx == std::vector<int>{1, 2, 3});
  CHECK_THROWS_AS(QubitSet({1, 1}), std::invalid_argument);
}

TEST_CASE("range and mask round trip") {
  const QubitSet s = QubitSet::range(2, 5);
  CHECK(s.idx == std::vector<int>{2, 3, 4});
  CHECK(QubitSet::from_mask(s.mask()).idx == s.idx);
  CHECK(QubitSet::from_mask(0b101).idx == std::vector<int>{0, 2});
}

TEST_CASE("complement and set predicates") {
  const QubitSet s{0, 2};
  CHECK(s.complement(4).idx == std::vector<int>{1, 3});
  CHECK(s.contains(2));
  CHECK_FALSE(s.contains(1));
  CHECK(s.subset_of(QubitSet{0, 1, 2}));
  CHECK_FALSE(s.subset_of(QubitSet{0, 1}));
  CHECK(s.intersects(QubitSet{2, 3}));
  CHECK_FALSE(s.intersects(QubitSet{1, 3}));
}

TEST_CASE("validate rejects out-of-range members") {
  const QubitSet s{0, 5};
  CHECK_NOTHROW(s.validate(6));
  CHECK_THROWS_AS(s.validate(5), std::invalid_argument);
  CHECK_THROWS_AS(QubitSet{-1}.validate(4), std::invalid_argument);
}

TEST_CASE("formatting") {
  CHECK(QubitSet{0, 1, 3}.to_string() == "{0,1,3}");
  CHECK(QubitSet{}.to_string() == "{}");
}

}  // TEST_SUITE

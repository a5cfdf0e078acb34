#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "stagesim/density.hpp"
#include "stagesim/rng.hpp"
#include "stagesim/state.hpp"

using stagesim::DensityMatrix;
using stagesim::HermitianOperator;
using stagesim::QubitSet;
using stagesim::RngStream;
using stagesim::StateVector;

TEST_SUITE("density") {

TEST_CASE("partial trace matches the dense oracle") {
  RngStream rng(21);
  const StateVector s = StateVector::haar_random(6, rng);
  for (const QubitSet& keep :
       {QubitSet{0}, QubitSet{3}, QubitSet{1, 4}, QubitSet{0, 2, 5}}) {
    const DensityMatrix rho = stagesim::partial_trace(s, keep);
    const Eigen::MatrixXcd expect = oracle::partial_trace_dense(s, keep);
    CHECK((rho.mat - expect).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_NOTHROW(rho.validate());
  }
  CHECK_THROWS_AS(stagesim::partial_trace(s, QubitSet{}),
                  std::invalid_argument);
  CHECK_THROWS_AS(stagesim::partial_trace(s, QubitSet::range(0, 6)),
                  std::invalid_argument);
}

TEST_CASE("bell pair frozen values") {
  const StateVector bell = StateVector::bell();
  CHECK(stagesim::entanglement_entropy(bell, QubitSet{0}) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(stagesim::cut_purity(bell, QubitSet{0}) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(stagesim::mutual_information(bell, 0, 1) ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("ghz3 frozen values") {
  const StateVector ghz = StateVector::ghz(3);
  CHECK(stagesim::entanglement_entropy(ghz, QubitSet{0}) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(stagesim::entanglement_entropy(ghz, QubitSet{0, 1}) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(stagesim::mutual_information(ghz, 0, 1) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("w3 frozen values") {
  const StateVector w = StateVector::w_state(3);
  const DensityMatrix rho0 = stagesim::partial_trace(w, QubitSet{0});
  CHECK(stagesim::purity(rho0) == doctest::Approx(5.0 / 9.0).epsilon(1e-12));
  const double h_one_third = 0.9182958340544896;  // binary entropy of 1/3
  CHECK(stagesim::entanglement_entropy(w, QubitSet{0}) ==
        doctest::Approx(h_one_third).epsilon(1e-12));
  CHECK(stagesim::mutual_information(w, 0, 1) ==
        doctest::Approx(h_one_third).epsilon(1e-12));
}

TEST_CASE("cut purity is symmetric under complement") {
  RngStream rng(22);
  const StateVector s = StateVector::haar_random(5, rng);
  for (const QubitSet& cut : {QubitSet{0}, QubitSet{1, 3}, QubitSet{0, 2, 4}}) {
    const double a = stagesim::cut_purity(s, cut);
    const double b = stagesim::cut_purity(s, cut.complement(5));
    CHECK(a == doctest::Approx(b).epsilon(1e-11));
  }
}

TEST_CASE("entropy of a product cut is zero") {
  const StateVector s =
      tensor_product(StateVector::bell(), StateVector::basis(1, 0));
  CHECK(stagesim::entanglement_entropy(s, QubitSet{2}) ==
        doctest::Approx(0.0).epsilon(1e-10));
  CHECK(stagesim::cut_purity(s, QubitSet{2}) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mutual information of independent qubits vanishes") {
  const StateVector s =
      tensor_product(StateVector::bell(), StateVector::bell());
  CHECK(stagesim::mutual_information(s, 0, 2) ==
        doctest::Approx(0.0).epsilon(1e-10));
  CHECK(stagesim::mutual_information(s, 2, 3) ==
        doctest::Approx(2.0).epsilon(1e-11));
}

TEST_CASE("spectrum entropy") {
  Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(4, 4);
  diag(0, 0) = 0.5;
  diag(1, 1) = 0.5;
  CHECK(stagesim::spectrum_entropy(diag) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(stagesim::spectrum_entropy(Eigen::MatrixXcd::Identity(2, 2) * 0.5) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("hermitian operator constructors") {
  const HermitianOperator z = HermitianOperator::pauli_z();
  CHECK(z.mat(0, 0).real() == 1.0);
  CHECK(z.mat(1, 1).real() == -1.0);
  CHECK_NOTHROW(z.validate());

  RngStream rng(23);
  const Eigen::MatrixXcd basis = stagesim::random_orthobasis(4, rng);
  const HermitianOperator h =
      HermitianOperator::from_eigensystem(basis, {0.0, 1.0, 2.0, 3.0});
  CHECK_NOTHROW(h.validate());
  // Reconstructed operator must have the given eigenvalues.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.mat);
  for (int i = 0; i < 4; ++i) {
    CHECK(es.eigenvalues()(i) == doctest::Approx(double(i)).epsilon(1e-12));
  }

  Eigen::MatrixXcd not_herm = Eigen::MatrixXcd::Zero(2, 2);
  not_herm(0, 1) = 1.0;
  CHECK_THROWS_AS(HermitianOperator{not_herm}.validate(),
                  std::invalid_argument);
}

TEST_CASE("density matrix validation") {
  DensityMatrix good{Eigen::MatrixXcd::Identity(2, 2) * 0.5};
  CHECK_NOTHROW(good.validate());
  DensityMatrix bad_trace{Eigen::MatrixXcd::Identity(2, 2)};
  CHECK_THROWS_AS(bad_trace.validate(), std::invalid_argument);
  Eigen::MatrixXcd neg = Eigen::MatrixXcd::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  DensityMatrix bad_spectrum{neg};
  CHECK_THROWS_AS(bad_spectrum.validate(), std::invalid_argument);
}

}  // TEST_SUITE

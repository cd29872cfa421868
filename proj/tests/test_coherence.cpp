#include <doctest.h>

#include <cmath>
#include <random>

#include "cohex/coherence.hpp"
#include "cohex/protocols.hpp"
#include "test_helpers.hpp"

using namespace cohex;
using cohex::testing::random_density;
using cohex::testing::total_hamiltonian;

namespace {

DensityOperator plus_state() {
  ComplexVector v(2);
  v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  return DensityOperator::from_pure(v);
}

}  // namespace

TEST_CASE("l1 coherence") {
  CHECK(l1_coherence(plus_state()) == doctest::Approx(1.0).epsilon(1e-14));

  std::mt19937_64 rng(23);
  DensityOperator mixed = random_density(rng, 5);
  const ComplexMatrix diag = mixed.matrix().diagonal().asDiagonal();
  CHECK(l1_coherence(diag) == 0.0);

  // maximally coherent state of dimension d carries d - 1 units
  for (long d : {2L, 3L, 4L, 7L}) {
    ComplexVector v = ComplexVector::Constant(d, 1.0 / std::sqrt(double(d)));
    CHECK(l1_coherence(DensityOperator::from_pure(v)) ==
          doctest::Approx(double(d - 1)).epsilon(1e-12));
  }
}

TEST_CASE("l1 coherence is invariant under diagonal rotations and convex") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> angle(0.0, 6.28);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityOperator rho = random_density(rng, 6);
    ComplexMatrix u = ComplexMatrix::Zero(6, 6);
    for (long i = 0; i < 6; ++i) u(i, i) = std::polar(1.0, angle(rng));
    CHECK(l1_coherence(ComplexMatrix(u * rho.matrix() * u.adjoint())) ==
          doctest::Approx(l1_coherence(rho)).epsilon(1e-12));

    const DensityOperator rho2 = random_density(rng, 6);
    const double lambda = unit(rng);
    const ComplexMatrix blend =
        lambda * rho.matrix() + (1.0 - lambda) * rho2.matrix();
    CHECK(l1_coherence(blend) <=
          lambda * l1_coherence(rho) + (1.0 - lambda) * l1_coherence(rho2) +
              1e-9);
  }
}

TEST_CASE("free/useful split") {
  std::mt19937_64 rng(31);
  const DensityOperator rho = random_density(rng, 4);

  SUBCASE("non-degenerate observable: everything is useful") {
    const CoherenceReport rep =
        coherence_split(rho, ladder_hamiltonian({4, 1.0}));
    CHECK(rep.free == 0.0);
    CHECK(rep.useful == doctest::Approx(rep.total).epsilon(1e-14));
  }

  SUBCASE("fully degenerate observable: everything is free") {
    const CoherenceReport rep = coherence_split(rho, ComplexMatrix::Zero(4, 4));
    CHECK(rep.useful == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(rep.free == doctest::Approx(rep.total).epsilon(1e-14));
  }

  SUBCASE("degenerate two-qubit block") {
    ComplexMatrix h = ComplexMatrix::Zero(4, 4);
    h(1, 1) = 1.0;
    h(2, 2) = 1.0;
    h(3, 3) = 2.0;
    ComplexVector psi = ComplexVector::Zero(4);
    psi(1) = 1.0 / std::sqrt(2.0);
    psi(2) = 1.0 / std::sqrt(2.0);
    const CoherenceReport rep =
        coherence_split(DensityOperator::from_pure(psi), h);
    CHECK(rep.total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.free == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.useful == doctest::Approx(0.0).epsilon(1e-12));
  }

  SUBCASE("components are non-negative and sum to the total") {
    for (int trial = 0; trial < 10; ++trial) {
      const DensityOperator r = random_density(rng, 6);
      ComplexMatrix h = ComplexMatrix::Zero(6, 6);
      for (long i = 0; i < 6; ++i) h(i, i) = double(i / 2);  // pairwise degenerate
      const CoherenceReport rep = coherence_split(r, h);
      CHECK(rep.free >= -1e-12);
      CHECK(rep.useful >= -1e-12);
      CHECK(rep.free + rep.useful == doctest::Approx(rep.total).epsilon(1e-12));
    }
  }
}

TEST_CASE("incoherence against an observable") {
  ComplexMatrix a = ladder_hamiltonian({2, 1.0});
  ComplexMatrix diag(2, 2);
  diag << 0.25, 0, 0, 0.75;
  CHECK(is_incoherent(DensityOperator(diag), a));
  CHECK_FALSE(is_incoherent(plus_state(), a));

  // coherence confined to a degenerate block commutes with the observable
  ComplexMatrix h = ComplexMatrix::Zero(4, 4);
  h(1, 1) = 1.0;
  h(2, 2) = 1.0;
  h(3, 3) = 2.0;
  ComplexVector psi = ComplexVector::Zero(4);
  psi(1) = 1.0 / std::sqrt(2.0);
  psi(2) = 1.0 / std::sqrt(2.0);
  CHECK(is_incoherent(DensityOperator::from_pure(psi), h));
}

TEST_CASE("energy conservation certificates") {
  for (long dim : {2L, 5L, 8L}) {
    CHECK(check_energy_conserving(build_weak_unitary(dim),
                                  total_hamiltonian(2, dim), 1e-12));
  }
  for (long dim : {4L, 8L, 12L}) {
    CHECK(check_energy_conserving(build_strong_unitary(dim),
                                  total_hamiltonian(2, dim), 1e-12));
  }

  ComplexMatrix hadamard(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  hadamard << s, s, s, -s;
  const ComplexMatrix v =
      tensor_product(hadamard, ComplexMatrix::Identity(4, 4));
  CHECK(unitarity_defect(v) < 1e-14);
  CHECK_FALSE(check_energy_conserving(v, total_hamiltonian(2, 4), 1e-10));

  CHECK_THROWS_AS(unitarity_defect(ComplexMatrix::Zero(2, 3)),
                  InvalidDimensionError);
}

TEST_CASE("basis permutation certificates") {
  CHECK(check_basis_permutation(build_weak_unitary(6)));
  CHECK(check_basis_permutation(build_strong_unitary(6)));
  CHECK(check_basis_permutation(build_dlevel_unitary(3, 9)));

  ComplexMatrix hadamard(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  hadamard << s, s, s, -s;
  CHECK_FALSE(check_basis_permutation(build_catalytic_unitary(hadamard, 8)));

  // permutations leave diagonal product inputs without any coherence
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const ComplexMatrix v = build_strong_unitary(8);
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXd probs(8);
    for (long i = 0; i < 8; ++i) probs(i) = unit(rng);
    probs /= probs.sum();
    ComplexMatrix sigma = ComplexMatrix::Zero(8, 8);
    for (long i = 0; i < 8; ++i) sigma(i, i) = probs(i);
    ComplexMatrix qubit = ComplexMatrix::Zero(2, 2);
    const double q = unit(rng);
    qubit(0, 0) = q;
    qubit(1, 1) = 1.0 - q;
    const ComplexMatrix joint = evolve_joint(v, tensor_product(qubit, sigma));
    CHECK(l1_coherence(joint) < 1e-12);
  }
}

TEST_CASE("fault injection: a perturbed interaction fails its certificates") {
  ComplexMatrix v = build_weak_unitary(6);
  v(1, 1) += 1e-6;
  CHECK(unitarity_defect(v) > 1e-10);
  CHECK_FALSE(check_energy_conserving(v, total_hamiltonian(2, 6), 1e-10));
}

TEST_CASE("qubit channel cohering power") {
  SUBCASE("identity channel creates nothing") {
    const QubitChannel identity = [](const DensityOperator& rho) {
      return rho;
    };
    CHECK(qubit_channel_cohering_power(identity) == 0.0);
  }

  SUBCASE("pairwise-extraction channel is input independent") {
    ReservoirSpec spec{CoherentReservoir{1.0, 0.0}, 64, 1e-12};
    const DensityOperator sigma = spec.prepare().state;
    const ComplexMatrix v = build_strong_unitary(64);
    const QubitChannel phi = [&](const DensityOperator& rho) {
      const ComplexMatrix joint =
          evolve_joint(v, tensor_product(rho.matrix(), sigma.matrix()));
      return DensityOperator(
          partial_trace_matrix(joint, 2, 64, KeepSide::First));
    };
    const ComplexMatrix delta = shift_operator(64);
    const ComplexMatrix p2 = multiples_projector(2, 64);
    const double expected =
        2.0 * std::abs((delta * p2 * sigma.matrix()).trace());
    CHECK(qubit_channel_cohering_power(phi) ==
          doctest::Approx(expected).epsilon(1e-12));

    ComplexMatrix excited = ComplexMatrix::Zero(2, 2);
    excited(1, 1) = 1.0;
    CHECK(l1_coherence(phi(DensityOperator(excited))) ==
          doctest::Approx(expected).epsilon(1e-12));
  }

  SUBCASE("catalytic channel with the optimal interaction") {
    ReservoirSpec spec{CoherentReservoir{1.0, 0.0}, 64, 1e-12};
    const DensityOperator sigma = spec.prepare().state;
    ComplexMatrix hadamard(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    hadamard << s, s, s, -s;
    const ComplexMatrix delta = shift_operator(64);
    const ComplexMatrix shifted = delta * sigma.matrix() * delta.adjoint();
    const ComplexMatrix v = build_catalytic_unitary(hadamard, 64);
    const QubitChannel phi = [&](const DensityOperator& rho) {
      const ComplexMatrix joint = evolve_joint(v, tensor_product(rho.matrix(), shifted));
      return DensityOperator(
          partial_trace_matrix(joint, 2, 64, KeepSide::First),
          joint.trace().real());
    };
    const double expected = std::abs((delta * sigma.matrix()).trace());
    CHECK(qubit_channel_cohering_power(phi) ==
          doctest::Approx(expected).epsilon(1e-9));
  }
}

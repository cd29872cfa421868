#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cohex/closed_form.hpp"
#include "cohex/coherence.hpp"
#include "cohex/protocols.hpp"
#include "test_helpers.hpp"

using namespace cohex;
using cohex::testing::basis_state;
using cohex::testing::basis_vector;
using cohex::testing::random_density;
using cohex::testing::random_unitary;
using cohex::testing::total_hamiltonian;

namespace {

ComplexMatrix hadamard() {
  ComplexMatrix h(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  h << s, s, s, -s;
  return h;
}

DensityOperator ground_qubit() { return basis_state(2, 0); }

DensityOperator uniform_ladder_state(long dim) {
  return DensityOperator::from_pure(
      ComplexVector::Constant(dim, 1.0 / std::sqrt(double(dim))));
}

}  // namespace

TEST_CASE("weak interaction on a two-level reservoir is the expected permutation") {
  const ComplexMatrix v = build_weak_unitary(2);
  // fixes |0,0> and |1,1>, swaps |0,1> with |1,0>
  CHECK(max_abs(v * basis_vector(4, 0) - basis_vector(4, 0)) == 0.0);
  CHECK(max_abs(v * basis_vector(4, 1) - basis_vector(4, 2)) == 0.0);
  CHECK(max_abs(v * basis_vector(4, 2) - basis_vector(4, 1)) == 0.0);
  CHECK(max_abs(v * basis_vector(4, 3) - basis_vector(4, 3)) == 0.0);
}

TEST_CASE("weak interaction action on basis states") {
  const long dim = 7;
  const ComplexMatrix v = build_weak_unitary(dim);
  for (long n = 0; n < dim; ++n) {
    ComplexVector ket = ComplexVector::Zero(2 * dim);
    ket(n) = 1.0;  // |0> (x) |n>
    const ComplexVector out = v * ket;
    if (n == 0) {
      CHECK(max_abs(out - ket) == 0.0);
    } else {
      ComplexVector want = ComplexVector::Zero(2 * dim);
      want(dim + n - 1) = 1.0;  // |1> (x) |n-1>
      CHECK(max_abs(out - want) == 0.0);
    }
    ComplexVector excited = ComplexVector::Zero(2 * dim);
    excited(dim + n) = 1.0;  // |1> (x) |n>
    const ComplexVector out2 = v * excited;
    ComplexVector want2 = ComplexVector::Zero(2 * dim);
    if (n == dim - 1) {
      want2(dim + n) = 1.0;  // pinned at the top
    } else {
      want2(n + 1) = 1.0;  // |0> (x) |n+1>
    }
    CHECK(max_abs(out2 - want2) == 0.0);
  }
}

TEST_CASE("infinite-variant weak interaction") {
  const ComplexMatrix v = build_weak_unitary(8, true);
  // defect is exactly the projector onto |1, top>
  CHECK(weak_infinite_boundary_defect(v) == 0.0);
  const ComplexMatrix sigma_x = (ComplexMatrix(2, 2) << 0, 1, 1, 0).finished();
  CHECK(max_abs(v - build_catalytic_unitary(sigma_x, 8)) == 0.0);
}

TEST_CASE("strong interaction swaps unit and pair indices") {
  const ComplexMatrix v2 = build_strong_unitary(2);
  for (long i = 0; i < 2; ++i) {
    for (long j = 0; j < 2; ++j) {
      ComplexVector in = ComplexVector::Zero(4);
      in(i * 2 + j) = 1.0;
      ComplexVector want = ComplexVector::Zero(4);
      want(j * 2 + i) = 1.0;
      CHECK(max_abs(v2 * in - want) == 0.0);
    }
  }

  const long dim = 10;
  const ComplexMatrix v = build_strong_unitary(dim);
  for (long n = 0; n < dim / 2; ++n) {
    for (long i = 0; i < 2; ++i) {
      for (long j = 0; j < 2; ++j) {
        ComplexVector in = ComplexVector::Zero(2 * dim);
        in(i * dim + 2 * n + j) = 1.0;
        ComplexVector want = ComplexVector::Zero(2 * dim);
        want(j * dim + 2 * n + i) = 1.0;
        CHECK(max_abs(v * in - want) == 0.0);
      }
    }
  }
  CHECK(max_abs(v * v - ComplexMatrix::Identity(2 * dim, 2 * dim)) == 0.0);
  CHECK_THROWS_AS(build_strong_unitary(5), InvalidDimensionError);
}

TEST_CASE("d-level interaction generalizes the pairwise swap") {
  CHECK(max_abs(build_dlevel_unitary(2, 8) - build_strong_unitary(8)) == 0.0);

  const ComplexMatrix v = build_dlevel_unitary(3, 3);
  for (long i = 0; i < 3; ++i) {
    for (long j = 0; j < 3; ++j) {
      ComplexVector in = ComplexVector::Zero(9);
      in(i * 3 + j) = 1.0;
      ComplexVector want = ComplexVector::Zero(9);
      want(j * 3 + i) = 1.0;
      CHECK(max_abs(v * in - want) == 0.0);
    }
  }

  for (auto [d, dim] : {std::pair<long, long>{2, 8}, {3, 9}, {4, 16}}) {
    const ComplexMatrix u = build_dlevel_unitary(d, dim);
    CHECK(unitarity_defect(u) == 0.0);
    CHECK(commutator_defect(u, total_hamiltonian(d, dim)) == 0.0);
    CHECK(check_basis_permutation(u));
  }
  CHECK_THROWS_AS(build_dlevel_unitary(3, 8), InvalidDimensionError);
}

TEST_CASE("catalytic interaction") {
  SUBCASE("identity unitary acts as the identity") {
    const ComplexMatrix v =
        build_catalytic_unitary(ComplexMatrix::Identity(2, 2), 6);
    CHECK(max_abs(v - ComplexMatrix::Identity(12, 12)) == 0.0);
  }

  SUBCASE("action on |0> (x) |n>, n >= 1") {
    std::mt19937_64 rng(41);
    const ComplexMatrix u = random_unitary(rng, 2);
    const long dim = 9;
    const ComplexMatrix v = build_catalytic_unitary(u, dim);
    for (long n = 1; n < dim; ++n) {
      ComplexVector in = ComplexVector::Zero(2 * dim);
      in(n) = 1.0;
      ComplexVector want = ComplexVector::Zero(2 * dim);
      want(n) = u(0, 0);            // |0> (x) |n>
      want(dim + n - 1) = u(1, 0);  // |1> (x) |n-1>
      CHECK(max_abs(v * in - want) < 1e-15);
    }
  }

  SUBCASE("rejects non-unitary input") {
    ComplexMatrix not_unitary(2, 2);
    not_unitary << 1.0, 0.0, 0.0, 0.5;
    CHECK_THROWS_AS(build_catalytic_unitary(not_unitary, 6),
                    InvalidArgumentError);
  }
}

TEST_CASE("catalytic step") {
  ReservoirSpec spec{CoherentReservoir{1.0, 0.0}, 64, 1e-12};
  const DensityOperator sigma = spec.prepare().state;

  SUBCASE("diagonal interaction extracts nothing") {
    ComplexMatrix u = ComplexMatrix::Zero(2, 2);
    u(0, 0) = std::polar(1.0, 0.3);
    u(1, 1) = std::polar(1.0, -0.9);
    const StepResult r = catalytic_step(sigma, u);
    CHECK(r.extracted_l1 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.injected_free_coherence == 0.0);
  }

  SUBCASE("optimal interaction on the unit-amplitude coherent reservoir") {
    const StepResult r = catalytic_step(sigma, hadamard());
    // e^{-1} sum_n 1/sqrt(n!(n+1)!)
    CHECK(r.extracted_l1 ==
          doctest::Approx(0.7731926563792860).epsilon(1e-10));
    CHECK(r.injected_free_coherence == doctest::Approx(1.0));
    CHECK(r.energy_cost == 1.0);
    CHECK(r.trace_leakage < 1e-12);
  }

  SUBCASE("matches the closed channel expressions") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 5; ++trial) {
      const ComplexMatrix u = random_unitary(rng, 2);
      const DensityOperator rho = random_density(rng, 48, 24);
      const StepResult r = catalytic_step(rho, u);
      const ComplexMatrix delta = shift_operator(48);
      const Complex overlap = (delta * rho.matrix()).trace();
      ComplexMatrix expected(2, 2);
      expected(0, 0) = std::norm(u(0, 0));
      expected(0, 1) = u(0, 0) * std::conj(u(1, 0)) * overlap;
      expected(1, 0) = std::conj(expected(0, 1));
      expected(1, 1) = std::norm(u(1, 0));
      CHECK(max_abs(r.extracted.matrix() - expected) < 1e-12);

      const ComplexMatrix res_expected =
          std::norm(u(0, 0)) * delta * rho.matrix() * delta.adjoint() +
          std::norm(u(1, 0)) * rho.matrix();
      CHECK(max_abs(r.reservoir.matrix() - res_expected) < 1e-12);

      CHECK(r.extracted_l1 ==
            doctest::Approx(2.0 * std::abs(u(0, 0)) * std::abs(u(1, 0)) *
                            std::abs(overlap))
                .epsilon(1e-10));
      // repeatability: the shift expectation value is a fixed point
      const Complex after = (delta * r.reservoir.matrix()).trace();
      CHECK(std::abs(after - overlap) < 1e-12);
      // never more than the coherence injected between degenerate levels
      CHECK(r.extracted_l1 <=
            2.0 * std::abs(u(0, 0)) * std::abs(u(1, 0)) + 1e-9);
    }
  }

  SUBCASE("repeated rounds hand out identical qubits") {
    DensityOperator current = sigma;
    const StepResult first = catalytic_step(current, hadamard());
    current = first.reservoir;
    for (int round = 0; round < 2; ++round) {
      const StepResult next = catalytic_step(current, hadamard());
      CHECK(max_abs(next.extracted.matrix() - first.extracted.matrix()) <
            1e-8);
      current = next.reservoir;
    }
  }

  SUBCASE("requires shift headroom") {
    const DensityOperator top_heavy = basis_state(8, 7);
    CHECK_THROWS_AS(catalytic_step(top_heavy, hadamard()), TruncationError);
  }
}

TEST_CASE("weak step") {
  SUBCASE("two-level reservoir in the balanced superposition") {
    ComplexVector v(2);
    v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    const StepResult r =
        weak_step(DensityOperator::from_pure(v), ground_qubit());
    ComplexMatrix expected(2, 2);
    expected << 0.5, 0.5, 0.5, 0.5;
    CHECK(max_abs(r.extracted.matrix() - expected) < 1e-15);
    CHECK(r.extracted_l1 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(max_abs(r.reservoir.matrix() - basis_state(2, 0).matrix()) < 1e-15);
    CHECK(r.injected_free_coherence == 0.0);
    CHECK(r.energy_cost == 0.0);
  }

  SUBCASE("diagonal reservoirs yield nothing") {
    ComplexMatrix diag = ComplexMatrix::Zero(4, 4);
    diag(0, 0) = 0.4;
    diag(2, 2) = 0.6;
    const StepResult r = weak_step(DensityOperator(diag), ground_qubit());
    CHECK(r.extracted_l1 == 0.0);
  }

  SUBCASE("a single occupied level relaxes by one quantum") {
    for (long n : {1L, 3L, 5L}) {
      const StepResult r = weak_step(basis_state(6, n), ground_qubit());
      CHECK(max_abs(r.extracted.matrix() - basis_state(2, 1).matrix()) == 0.0);
      CHECK(max_abs(r.reservoir.matrix() - basis_state(6, n - 1).matrix()) ==
            0.0);
    }
  }

  SUBCASE("matches the closed channel expressions on random reservoirs") {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 8; ++trial) {
      const DensityOperator sigma = random_density(rng, 10);
      const StepResult r = weak_step(sigma, ground_qubit());
      CHECK(max_abs(r.extracted.matrix() - weak_extracted_formula(sigma)) <
            1e-14);
      CHECK(max_abs(r.reservoir.matrix() - weak_reservoir_formula(sigma)) <
            1e-14);
    }
  }

  SUBCASE("infinite variant relaxes an excited qubit and shifts up") {
    std::mt19937_64 rng(97);
    const DensityOperator sigma = random_density(rng, 8);
    const StepResult r =
        weak_step(sigma, basis_state(2, 1), WeakVariant::Infinite);
    const ComplexMatrix delta = shift_operator(sigma.dim());
    CHECK(max_abs(r.extracted.matrix().bottomRightCorner(1, 1)) < 1e-12);
    CHECK(max_abs(r.reservoir.matrix() -
                  delta * sigma.matrix() * delta.adjoint()) < 1e-12);
    CHECK(r.trace_leakage ==
          doctest::Approx(sigma.element(sigma.dim() - 1, sigma.dim() - 1).real())
              .epsilon(1e-10));
  }
}

TEST_CASE("strong step") {
  SUBCASE("two-level reservoir in the balanced superposition") {
    ComplexVector v(2);
    v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    const StepResult r = strong_step(DensityOperator::from_pure(v));
    CHECK(r.extracted_l1 == doctest::Approx(1.0).epsilon(1e-14));
  }

  SUBCASE("diagonal reservoirs yield nothing") {
    ComplexMatrix diag = ComplexMatrix::Zero(4, 4);
    diag(1, 1) = 1.0;
    CHECK(strong_step(DensityOperator(diag)).extracted_l1 == 0.0);
  }

  SUBCASE("output is independent of the unit's input state") {
    std::mt19937_64 rng(53);
    const DensityOperator sigma = random_density(rng, 8);
    const ComplexMatrix v = build_strong_unitary(8);
    ComplexMatrix mixed = 0.5 * ComplexMatrix::Identity(2, 2);
    const ComplexMatrix out_ground = partial_trace_matrix(
        evolve_joint(v, tensor_product(basis_state(2, 0).matrix(),
                                       sigma.matrix())),
        2, 8, KeepSide::First);
    const ComplexMatrix out_excited = partial_trace_matrix(
        evolve_joint(v, tensor_product(basis_state(2, 1).matrix(),
                                       sigma.matrix())),
        2, 8, KeepSide::First);
    const ComplexMatrix out_mixed = partial_trace_matrix(
        evolve_joint(v, tensor_product(mixed, sigma.matrix())), 2, 8,
        KeepSide::First);
    CHECK(max_abs(out_ground - out_excited) < 1e-10);
    CHECK(max_abs(out_ground - out_mixed) < 1e-10);
  }

  SUBCASE("matches the closed channel expressions; odd dims are padded") {
    std::mt19937_64 rng(59);
    const DensityOperator sigma = random_density(rng, 7);
    const StepResult r = strong_step(sigma);
    const DensityOperator padded = pad_levels(sigma, 8);
    CHECK(max_abs(r.extracted.matrix() - dlevel_extracted_formula(padded, 2)) <
          1e-13);
    const ComplexMatrix res = dlevel_reservoir_formula(padded, 2);
    CHECK(max_abs(r.reservoir.matrix() - res) < 1e-13);
  }
}

TEST_CASE("d-level step") {
  SUBCASE("d = 2 reproduces the pairwise step exactly") {
    std::mt19937_64 rng(61);
    const DensityOperator sigma = random_density(rng, 8);
    const StepResult a = strong_step(sigma);
    const StepResult b = dlevel_step(sigma, 2);
    CHECK(max_abs(a.extracted.matrix() - b.extracted.matrix()) == 0.0);
    CHECK(max_abs(a.reservoir.matrix() - b.reservoir.matrix()) == 0.0);
  }

  SUBCASE("uniform qutrit superposition becomes maximally coherent") {
    const StepResult r = dlevel_step(uniform_ladder_state(3), 3);
    CHECK(r.extracted_l1 == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(max_abs(r.extracted.matrix() -
                  ComplexMatrix::Constant(3, 3, 1.0 / 3.0)) < 1e-14);
  }

  SUBCASE("diagonal reservoirs yield nothing") {
    ComplexMatrix diag = ComplexMatrix::Zero(6, 6);
    diag(0, 0) = 0.5;
    diag(4, 4) = 0.5;
    CHECK(dlevel_step(DensityOperator(diag), 3).extracted_l1 == 0.0);
  }

  SUBCASE("invalid unit size") {
    CHECK_THROWS_AS(dlevel_step(uniform_ladder_state(4), 1),
                    InvalidDimensionError);
  }
}

TEST_CASE("faithful steps never create useful coherence in the joint system") {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 4; ++trial) {
    const DensityOperator sigma = random_density(rng, 8);
    const ComplexMatrix h = total_hamiltonian(2, 8);
    const ComplexMatrix before = tensor_product(
        basis_state(2, 0).matrix(), sigma.matrix());
    const double useful_before =
        coherence_split(DensityOperator(before), h).useful;
    for (const ComplexMatrix& v :
         {build_weak_unitary(8), build_strong_unitary(8)}) {
      const DensityOperator after{evolve_joint(v, before)};
      const double useful_after = coherence_split(after, h).useful;
      CHECK(useful_after <= useful_before + 1e-9);
    }
  }
}

TEST_CASE("repetition bounds") {
  CHECK(max_repetitions(Protocol::Weak, 6) == 5);
  CHECK(max_repetitions(Protocol::Strong, 8) == 3);
  CHECK(max_repetitions(Protocol::Strong, 6) == 2);
  CHECK(max_repetitions(Protocol::DLevel, 9, 3) == 2);
  CHECK(max_repetitions(Protocol::DLevel, 27, 3) == 3);
  CHECK_THROWS_AS(max_repetitions(Protocol::Weak, 1), InvalidDimensionError);
}

TEST_CASE("weak runs on a six-level ladder empty it in five steps") {
  ReservoirSpec spec{ExplicitReservoir{uniform_ladder_state(6).matrix()}, 6,
                     1e-12};
  const RunTrace trace = repeat_extraction(spec, Protocol::Weak, 5);
  CHECK(trace.steps.size() == 5);
  for (const StepResult& s : trace.steps) CHECK(s.extracted_l1 > 0.0);
  const ComplexMatrix final_res = trace.steps.back().reservoir.matrix();
  CHECK(max_abs(final_res - basis_state(6, 0).matrix()) < 1e-12);
  CHECK_THROWS_AS(repeat_extraction(spec, Protocol::Weak, 6),
                  RepetitionLimitError);
}

TEST_CASE("iterated runs match the closed iterated expressions") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 3; ++trial) {
    const DensityOperator sigma = random_density(rng, 16);
    ReservoirSpec spec{ExplicitReservoir{sigma.matrix()}, 16, 1e-12};

    {
      const RunTrace t = repeat_extraction(spec, Protocol::Weak, 8);
      for (size_t i = 0; i < t.steps.size(); ++i) {
        CHECK(t.steps[i].extracted_l1 ==
              doctest::Approx(t.formula_l1[i]).epsilon(1e-10));
        CHECK(t.steps[i].injected_free_coherence == 0.0);
      }
      const ComplexMatrix res8 = weak_iterated_reservoir(sigma, 8);
      CHECK(max_abs(t.steps.back().reservoir.matrix() - res8) < 1e-12);
    }
    {
      const RunTrace t = repeat_extraction(spec, Protocol::Strong, 4);
      const DensityOperator initial = pad_levels(sigma, t.working_levels);
      for (long mi = 1; mi <= 4; ++mi) {
        CHECK(t.steps[mi - 1].extracted_l1 ==
              doctest::Approx(t.formula_l1[mi - 1]).epsilon(1e-10));
        const ComplexMatrix direct =
            dlevel_iterated_extracted(initial, 2, mi);
        CHECK(max_abs(t.steps[mi - 1].extracted.matrix() - direct) < 1e-12);
        // sequential reservoir lives on the compressed lattice
        const ComplexMatrix full = dlevel_iterated_reservoir(initial, 2, mi);
        const ComplexMatrix& compressed = t.steps[mi - 1].reservoir.matrix();
        const long stride = 1L << mi;
        for (long a = 0; a < compressed.rows(); ++a) {
          for (long b = 0; b < compressed.cols(); ++b) {
            if (a * stride < 16 && b * stride < 16) {
              CHECK(std::abs(compressed(a, b) - full(a * stride, b * stride)) <
                    1e-12);
            }
          }
        }
      }
      CHECK(t.effective_register_dims ==
            std::vector<long>{1, 2, 4, 8});
    }
    {
      const RunTrace t = repeat_extraction(spec, Protocol::DLevel, 2, 3);
      const DensityOperator initial = pad_levels(sigma, t.working_levels);
      for (long mi = 1; mi <= 2; ++mi) {
        CHECK(t.steps[mi - 1].extracted_l1 ==
              doctest::Approx(t.formula_l1[mi - 1]).epsilon(1e-10));
        const ComplexMatrix direct =
            dlevel_iterated_extracted(initial, 3, mi);
        CHECK(max_abs(t.steps[mi - 1].extracted.matrix() - direct) < 1e-12);
      }
    }
  }
}

TEST_CASE("iterated amounts match the generating series") {
  ReservoirSpec coherent{CoherentReservoir{1.0, 0.0}, 128, 1e-12};
  const RunTrace strong = repeat_extraction(coherent, Protocol::Strong, 2);
  // 2 (F_{4;0,2} + F_{4;1,3}) at x = 1
  CHECK(strong.steps[1].extracted_l1 ==
        doctest::Approx(0.8271777091722349).epsilon(1e-9));

  const RunTrace weak = repeat_extraction(coherent, Protocol::Weak, 3);
  CHECK(weak.steps[2].extracted_l1 ==
        doctest::Approx(0.2123952943896613).epsilon(1e-9));
}

TEST_CASE("trace bookkeeping") {
  std::mt19937_64 rng(73);
  const DensityOperator sigma = random_density(rng, 12);
  const StepResult r = strong_step(sigma);
  CHECK(std::abs(r.extracted.trace() - 1.0) <= 1e-9 + r.trace_leakage);
  CHECK(std::abs(r.reservoir.trace() - 1.0) <= 1e-9 + r.trace_leakage);
  CHECK(r.extracted_l1 ==
        doctest::Approx(l1_coherence(r.extracted)).epsilon(1e-12));
}

TEST_CASE("register Hamiltonian direct sum") {
  const std::vector<double> two_qubits = register_hamiltonian_diagonal(2, 2, 1.0);
  CHECK(two_qubits == std::vector<double>{0.0, 1.0, 1.0, 2.0});

  // step-m storage: d^{m-1} units reach total energy d^{m-1} (d-1) spacing,
  // the gap the effective unit must provide
  const std::vector<double> four_qubits =
      register_hamiltonian_diagonal(4, 2, 1.0);
  CHECK(four_qubits.size() == 16);
  CHECK(*std::max_element(four_qubits.begin(), four_qubits.end()) == 4.0);
}

TEST_CASE("squeezed reservoirs extract through the even subladder") {
  ReservoirSpec spec{SqueezedReservoir{0.5, 0.0}, 64, 1e-12};
  const RunTrace weak = repeat_extraction(spec, Protocol::Weak, 2);
  // 2 t^{2m-1}/cosh r * sqrt((2m-2)!(2m)!)/(2^{2m-1}(m-1)!m!)
  CHECK(weak.steps[0].extracted_l1 ==
        doctest::Approx(0.5795648303316562).epsilon(1e-9));
  CHECK(weak.steps[1].extracted_l1 ==
        doctest::Approx(0.0757917340388094).epsilon(1e-9));

  const RunTrace strong = repeat_extraction(spec, Protocol::Strong, 1);
  CHECK(strong.steps[0].extracted_l1 ==
        doctest::Approx(0.5928203878759027).epsilon(1e-9));
}

TEST_CASE("amounts are independent of the reservoir phase") {
  for (double phase : {0.0, 0.7853981633974483, 3.141592653589793}) {
    ReservoirSpec spec{CoherentReservoir{1.0, phase}, 64, 1e-12};
    const RunTrace t = repeat_extraction(spec, Protocol::Strong, 2);
    CHECK(t.steps[0].extracted_l1 ==
          doctest::Approx(0.9622566153649099).epsilon(1e-10));
    CHECK(t.steps[1].extracted_l1 ==
          doctest::Approx(0.8271777091722349).epsilon(1e-10));
  }
}

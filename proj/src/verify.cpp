#include "cohex/verify.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "cohex/closed_form.hpp"
#include "cohex/coherence.hpp"
#include "cohex/hilbert.hpp"
#include "cohex/protocols.hpp"

namespace cohex {

namespace {

std::string defect_detail(double defect) {
  std::ostringstream os;
  os << "max defect " << defect;
  return os.str();
}

ComplexMatrix random_unitary_2x2(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  ComplexMatrix g(2, 2);
  for (long i = 0; i < 2; ++i)
    for (long j = 0; j < 2; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (long j = 0; j < 2; ++j) {
    const Complex piv = r(j, j);
    if (std::abs(piv) > 0) q.col(j) *= piv / std::abs(piv);
  }
  return q;
}

// Random mixed state supported on the first `support` of `dim` levels.
DensityOperator random_reservoir(std::mt19937_64& rng, long dim, long support) {
  std::normal_distribution<double> gauss;
  ComplexMatrix g(support, support);
  for (long i = 0; i < support; ++i)
    for (long j = 0; j < support; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
  ComplexMatrix rho_small = g * g.adjoint();
  rho_small /= rho_small.trace().real();
  ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
  rho.topLeftCorner(support, support) = rho_small;
  return DensityOperator(std::move(rho));
}

ComplexMatrix qubit_ladder_hamiltonian(long dim, double spacing = 1.0) {
  const ComplexMatrix hs = ladder_hamiltonian({2, spacing});
  const ComplexMatrix hr = ladder_hamiltonian({dim, spacing});
  return tensor_product(hs, ComplexMatrix::Identity(dim, dim)) +
         tensor_product(ComplexMatrix::Identity(2, 2), hr);
}

ComplexMatrix unit_ladder_hamiltonian(long d, long dim, double spacing = 1.0) {
  const ComplexMatrix hs = ladder_hamiltonian({d, spacing});
  const ComplexMatrix hr = ladder_hamiltonian({dim, spacing});
  return tensor_product(hs, ComplexMatrix::Identity(dim, dim)) +
         tensor_product(ComplexMatrix::Identity(d, d), hr);
}

CheckResult check_shift_algebra(long max_dim) {
  double worst = 0.0;
  for (long dim = 2; dim <= max_dim; dim = dim < 8 ? dim + 1 : dim * 2) {
    const ComplexMatrix delta = shift_operator(dim);
    const ComplexMatrix id = ComplexMatrix::Identity(dim, dim);
    ComplexMatrix top = ComplexMatrix::Zero(dim, dim);
    top(dim - 1, dim - 1) = 1.0;
    ComplexMatrix ground = ComplexMatrix::Zero(dim, dim);
    ground(0, 0) = 1.0;
    worst = std::max(worst, max_abs(delta.adjoint() * delta + top - id));
    worst = std::max(worst, max_abs(delta * delta.adjoint() + ground - id));
    ComplexMatrix nilpotent = id;
    for (long k = 0; k < dim; ++k) nilpotent = delta * nilpotent;
    worst = std::max(worst, max_abs(nilpotent));
  }
  return {"shift operator algebra", worst == 0.0, defect_detail(worst)};
}

CheckResult check_projector_algebra(long max_dim) {
  double worst = 0.0;
  for (long d = 2; d <= 5; ++d) {
    for (long dim = d; dim <= max_dim; dim += d) {
      const ComplexMatrix p = multiples_projector(d, dim);
      worst = std::max(worst, max_abs(p * p - p));
      worst = std::max(worst, max_abs(p - p.adjoint()));
      const ComplexMatrix delta = shift_operator(dim);
      ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
      ComplexMatrix shifted = p;
      for (long i = 0; i < d; ++i) {
        sum += shifted;
        shifted = delta * shifted * delta.adjoint();
      }
      worst = std::max(worst,
                       max_abs(sum - ComplexMatrix::Identity(dim, dim)));
    }
  }
  // staircase projectors for small towers
  for (long d : {2L, 3L}) {
    for (long m = 1; m <= 3; ++m) {
      long dm = 1;
      for (long i = 0; i < m; ++i) dm *= d;
      if (2 * dm > max_dim) continue;
      const long dim = 2 * dm;
      const ComplexMatrix p = staircase_projector(m, d, dim);
      worst = std::max(worst, max_abs(p * p - p));
      worst = std::max(worst, max_abs(p - p.adjoint()));
    }
  }
  return {"ladder projector algebra", worst == 0.0, defect_detail(worst)};
}

CheckResult check_interaction_certificates(long max_dim, double tol) {
  double worst = 0.0;
  bool permutations = true;
  for (long dim = 2; dim <= max_dim; dim = dim < 8 ? dim + 1 : dim * 2) {
    const ComplexMatrix v = build_weak_unitary(dim);
    const ComplexMatrix h = qubit_ladder_hamiltonian(dim);
    worst = std::max(worst, unitarity_defect(v));
    worst = std::max(worst, commutator_defect(v, h));
    permutations = permutations && check_basis_permutation(v, tol);
  }
  for (long dim = 2; dim <= max_dim; dim += dim < 8 ? 2 : dim) {
    const ComplexMatrix v = build_strong_unitary(dim);
    const ComplexMatrix h = qubit_ladder_hamiltonian(dim);
    worst = std::max(worst, unitarity_defect(v));
    worst = std::max(worst, commutator_defect(v, h));
    permutations = permutations && check_basis_permutation(v, tol);
  }
  for (long d : {2L, 3L, 4L}) {
    for (long dim = d; dim <= max_dim; dim *= d) {
      const ComplexMatrix v = build_dlevel_unitary(d, dim);
      const ComplexMatrix h = unit_ladder_hamiltonian(d, dim);
      worst = std::max(worst, unitarity_defect(v));
      worst = std::max(worst, commutator_defect(v, h));
      permutations = permutations && check_basis_permutation(v, tol);
    }
  }
  return {"interaction certificates (unitary, energy conserving, permutation)",
          permutations && worst <= tol, defect_detail(worst)};
}

CheckResult check_catalytic_boundary(long max_dim, double tol,
                                     std::mt19937_64& rng) {
  double worst = 0.0;
  for (long dim : {4L, 8L, std::max(8L, max_dim / 2)}) {
    const ComplexMatrix u = random_unitary_2x2(rng);
    const ComplexMatrix v = build_catalytic_unitary(u, dim);
    // V^+V deviates from the identity only in the |1,top> column/row.
    ComplexMatrix defect = v.adjoint() * v -
                           ComplexMatrix::Identity(2 * dim, 2 * dim);
    const long boundary = 2 * dim - 1;
    defect(boundary, boundary) = 0.0;
    worst = std::max(worst, max_abs(defect));
  }
  const ComplexMatrix sigma_x = (ComplexMatrix(2, 2) << 0, 1, 1, 0).finished();
  const long dim = std::max(4L, max_dim / 2);
  worst = std::max(worst, max_abs(build_catalytic_unitary(sigma_x, dim) -
                                  build_weak_unitary(dim, true)));
  return {"catalytic boundary defect localized at the top level",
          worst <= tol, defect_detail(worst)};
}

CheckResult check_monotone_reservoir(double tol, std::mt19937_64& rng) {
  std::vector<DensityOperator> reservoirs;
  reservoirs.push_back(
      DensityOperator::from_pure(coherent_state(1.0, 0.0, 32).amplitudes));
  {
    auto st = squeezed_vacuum_state(0.5, 0.3, 32);
    DensityOperator raw = DensityOperator::from_pure(st.amplitudes);
    reservoirs.push_back(compress_to_sublattice(raw, 2));
  }
  reservoirs.push_back(random_reservoir(rng, 16, 16));

  double worst = 0.0;
  DensityOperator ground_qubit((ComplexMatrix(2, 2) << 1, 0, 0, 0).finished());
  for (const auto& sigma : reservoirs) {
    DensityOperator current = sigma;
    for (long step = 0; step < 4 && current.dim() >= 2; ++step) {
      const StepResult r = weak_step(current, ground_qubit);
      worst = std::max(worst, l1_coherence(r.reservoir) - l1_coherence(current));
      current = r.reservoir;
    }
    current = sigma;
    for (long step = 0; step < 3 && current.dim() >= 2; ++step) {
      const StepResult r = strong_step(current);
      worst = std::max(worst, l1_coherence(r.reservoir) - l1_coherence(current));
      current = compress_to_sublattice(r.reservoir, 2);
    }
    if (sigma.dim() % 3 == 0 || sigma.dim() > 3) {
      const StepResult r = dlevel_step(sigma, 3);
      worst = std::max(worst, l1_coherence(r.reservoir) - l1_coherence(sigma));
    }
  }
  return {"reservoir coherence non-increasing under faithful steps",
          worst <= tol, defect_detail(std::max(0.0, worst))};
}

CheckResult check_catalytic_bound(double tol, std::mt19937_64& rng) {
  double worst_excess = 0.0;
  double worst_invariance = 0.0;
  for (int trial = 0; trial < 12; ++trial) {
    const ComplexMatrix u = random_unitary_2x2(rng);
    DensityOperator sigma = random_reservoir(rng, 48, 24);
    const ComplexMatrix delta = shift_operator(sigma.dim());
    const Complex before = (delta * sigma.matrix()).trace();
    const StepResult r = catalytic_step(sigma, u);
    const double injected = 2.0 * std::abs(u(0, 0)) * std::abs(u(1, 0));
    worst_excess = std::max(worst_excess, r.extracted_l1 - injected);
    const Complex after = (delta * r.reservoir.matrix()).trace();
    worst_invariance = std::max(worst_invariance, std::abs(after - before));
  }
  const bool ok = worst_excess <= tol && worst_invariance <= 1e-9;
  std::ostringstream os;
  os << "max excess " << worst_excess << ", max drift " << worst_invariance;
  return {"catalytic bound and repeat invariance", ok, os.str()};
}

CheckResult check_iterated_equivalence(double tol, std::mt19937_64& rng) {
  double worst = 0.0;
  for (int trial = 0; trial < 4; ++trial) {
    DensityOperator sigma = random_reservoir(rng, 16, 16);
    ReservoirSpec spec{ExplicitReservoir{sigma.matrix()}, 16, 1e-12};
    {
      RunTrace t = repeat_extraction(spec, Protocol::Weak, 6);
      for (size_t i = 0; i < t.steps.size(); ++i) {
        worst = std::max(worst,
                         std::abs(t.steps[i].extracted_l1 - t.formula_l1[i]));
      }
      const ComplexMatrix res =
          weak_iterated_reservoir(sigma, long(t.steps.size()));
      worst = std::max(worst, max_abs(t.steps.back().reservoir.matrix() - res));
    }
    for (long d : {2L, 3L}) {
      const long m = d == 2 ? 3 : 2;
      RunTrace t = repeat_extraction(spec, d == 2 ? Protocol::Strong
                                                  : Protocol::DLevel,
                                     m, d);
      DensityOperator padded = pad_levels(sigma, t.working_levels);
      for (long i = 0; i < m; ++i) {
        worst = std::max(worst,
                         std::abs(t.steps[i].extracted_l1 - t.formula_l1[i]));
        const ComplexMatrix direct =
            dlevel_iterated_extracted(padded, d, i + 1);
        worst = std::max(
            worst, max_abs(t.steps[i].extracted.matrix() - direct));
      }
    }
  }
  return {"sequential steps match closed iterated expressions", worst <= tol,
          defect_detail(worst)};
}

CheckResult check_closed_form_agreement(double tol) {
  double worst = 0.0;
  for (double a : {0.5, 1.0}) {
    ReservoirSpec spec{CoherentReservoir{a, 0.0}, 64, 1e-12};
    RunTrace weak = repeat_extraction(spec, Protocol::Weak, 3);
    RunTrace strong = repeat_extraction(spec, Protocol::Strong, 3);
    for (long m = 1; m <= 3; ++m) {
      worst = std::max(worst,
                       std::abs(weak.steps[m - 1].extracted_l1 -
                                predicted_amount(Protocol::Weak, spec, m)));
      worst = std::max(worst,
                       std::abs(strong.steps[m - 1].extracted_l1 -
                                predicted_amount(Protocol::Strong, spec, m)));
    }
  }
  for (double r : {0.25, 0.5}) {
    ReservoirSpec spec{SqueezedReservoir{r, 0.0}, 64, 1e-12};
    RunTrace weak = repeat_extraction(spec, Protocol::Weak, 3);
    RunTrace strong = repeat_extraction(spec, Protocol::Strong, 3);
    for (long m = 1; m <= 3; ++m) {
      worst = std::max(worst,
                       std::abs(weak.steps[m - 1].extracted_l1 -
                                predicted_amount(Protocol::Weak, spec, m)));
      worst = std::max(worst,
                       std::abs(strong.steps[m - 1].extracted_l1 -
                                predicted_amount(Protocol::Strong, spec, m)));
    }
  }
  return {"simulated amounts match closed forms", worst <= tol,
          defect_detail(worst)};
}

CheckResult check_asymptote_f() {
  bool ok = true;
  double final_dist = 0.0;
  for (long d : {2L, 4L}) {
    const AsymptoteReport rep =
        asymptote_check(d, AsymptoteSeries::F, {50, 100, 200, 400});
    ok = ok && rep.passed;
    final_dist = std::max(final_dist, rep.max_distance.back());
  }
  return {"series limit (coherent family)", ok,
          "final distance " + std::to_string(final_dist)};
}

CheckResult check_asymptote_g() {
  bool ok = true;
  double final_dist = 0.0;
  for (long d : {2L, 4L}) {
    const AsymptoteReport rep = asymptote_check(
        d, AsymptoteSeries::G, {0.9, 0.99, 0.9999, 1.0 - 1e-6});
    ok = ok && rep.passed;
    final_dist = std::max(final_dist, rep.max_distance.back());
  }
  return {"series limit (squeezed family)", ok,
          "final distance " + std::to_string(final_dist)};
}

}  // namespace

std::vector<CheckResult> run_verification(const VerifyOptions& options) {
  std::mt19937_64 rng(options.seed);
  std::vector<CheckResult> results;
  results.push_back(check_shift_algebra(options.max_dim));
  results.push_back(check_projector_algebra(options.max_dim));
  results.push_back(check_interaction_certificates(options.max_dim, options.tol));
  results.push_back(check_catalytic_boundary(options.max_dim, options.tol, rng));
  results.push_back(check_monotone_reservoir(1e-9, rng));
  results.push_back(check_catalytic_bound(1e-9, rng));
  results.push_back(check_iterated_equivalence(1e-8, rng));
  results.push_back(check_closed_form_agreement(1e-8));
  results.push_back(check_asymptote_f());
  results.push_back(check_asymptote_g());
  return results;
}

}  // namespace cohex

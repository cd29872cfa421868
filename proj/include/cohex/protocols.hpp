#pragma once

#include <optional>
#include <vector>

#include "cohex/hilbert.hpp"

namespace cohex {

enum class Protocol { Catalytic, Weak, Strong, DLevel };

enum class WeakVariant { Finite, Infinite };

// Interaction that swaps the qubit excitation with the coherence between the
// reservoir's ground and first excited level. The finite variant is unitary
// on the whole truncated space; the infinite variant (the half-infinite
// ladder cut off at `dim`) is unitary only away from the top level paired
// with the excited qubit — see weak_infinite_boundary_defect.
ComplexMatrix build_weak_unitary(long dim, bool infinite_variant = false);

// max-entry norm of V^+V - (I - |1,top><1,top|) for the truncated
// infinite-variant interaction; zero means the defect is exactly the
// expected boundary projector.
double weak_infinite_boundary_defect(const ComplexMatrix& v);

// Pairwise swap interaction: V(|i> (x) |2n+j>) = |j> (x) |2n+i>.
// Requires an even reservoir dimension.
ComplexMatrix build_strong_unitary(long dim);

// d-level generalization: V = sum_{i,j} |i><j| (x) D^j P_d (D^+)^i,
// acting as V(|i> (x) |dn+j>) = |j> (x) |dn+i>. Requires dim % d == 0.
ComplexMatrix build_dlevel_unitary(long d, long dim);

// Catalytic interaction driven by a 2x2 unitary U:
// blocks [[|0><0| + U00 DD^+, U01 D], [U10 D^+, U11 I]].
ComplexMatrix build_catalytic_unitary(const ComplexMatrix& u, long dim);

// Outcome of one extraction step.
struct StepResult {
  DensityOperator extracted;
  DensityOperator reservoir;
  double extracted_l1 = 0.0;
  double injected_free_coherence = 0.0;  // zero for the faithful protocols
  double energy_cost = 0.0;              // quanta of the reservoir ladder
  double trace_leakage = 0.0;            // probability lost at the boundary
};

// One catalytic round: shift the reservoir up one level, then interact with
// a ground-state qubit through build_catalytic_unitary(u). Requires the top
// two reservoir levels to be essentially unoccupied (shift headroom).
StepResult catalytic_step(const DensityOperator& sigma, const ComplexMatrix& u,
                          double headroom_tolerance = 1e-12);

StepResult weak_step(const DensityOperator& sigma, const DensityOperator& qubit,
                     WeakVariant variant = WeakVariant::Finite);

// Ground-state qubit input; the result is independent of it anyway.
// Odd reservoir dimensions are zero-padded at the top.
StepResult strong_step(const DensityOperator& sigma);

StepResult dlevel_step(const DensityOperator& sigma, long d);

// Repetition bound for a reservoir with `levels` levels.
long max_repetitions(Protocol protocol, long levels, long d = 2);

struct RunTrace {
  Protocol protocol = Protocol::Weak;
  ReservoirSpec reservoir_spec;
  double initial_tail_mass = 0.0;
  // Number of ladder levels actually simulated after squeezed-reservoir
  // reduction and padding.
  long working_levels = 0;
  std::vector<StepResult> steps;
  // Storage units consumed per step (1 qubit per weak step, d^{m-1}
  // d-level units per strong/d-level step).
  std::vector<long> effective_register_dims;
  // Per-step amounts evaluated from the *initial* reservoir state through
  // the closed iterated expressions; kept alongside the sequential
  // simulation as a cross-check.
  std::vector<double> formula_l1;
};

// Runs m extraction steps. Squeezed reservoirs act through their even-level
// subladder (the occupied levels; unit gap twice the base spacing), which is
// what makes repeated extraction non-trivial for them. Strong and d-level
// runs compress the reservoir onto the surviving sublattice after each step,
// so each step stores into an effective d-level unit.
RunTrace repeat_extraction(const ReservoirSpec& spec, Protocol protocol,
                           long m, long d = 2,
                           const std::optional<ComplexMatrix>& catalytic_u =
                               std::nullopt);

// --- building blocks shared with the tests -------------------------------

ComplexMatrix evolve_joint(const ComplexMatrix& v, const ComplexMatrix& rho_joint);

// Zero-pads the ladder at the top to `new_dim` levels.
DensityOperator pad_levels(const DensityOperator& rho, long new_dim);

// Keeps the levels 0, stride, 2*stride, ... and relabels them 0, 1, 2, ...
DensityOperator compress_to_sublattice(const DensityOperator& rho, long stride);

// Closed channel expressions for a single step / for m iterated steps,
// evaluated directly on a reservoir state. These are the second route the
// sequential simulation is checked against.
ComplexMatrix weak_extracted_formula(const DensityOperator& sigma);
ComplexMatrix weak_reservoir_formula(const DensityOperator& sigma);
double weak_iterated_l1(const DensityOperator& sigma0, long m);
ComplexMatrix weak_iterated_reservoir(const DensityOperator& sigma0, long m);

ComplexMatrix dlevel_extracted_formula(const DensityOperator& sigma, long d);
ComplexMatrix dlevel_reservoir_formula(const DensityOperator& sigma, long d);
ComplexMatrix dlevel_iterated_extracted(const DensityOperator& sigma0, long d,
                                        long m);
ComplexMatrix dlevel_iterated_reservoir(const DensityOperator& sigma0, long d,
                                        long m);
double dlevel_iterated_l1(const DensityOperator& sigma0, long d, long m);

// Diagonal of the Hamiltonian of `units` independent storage units with
// `unit_levels` levels each (direct-sum structure over the tensor product).
std::vector<double> register_hamiltonian_diagonal(long units, long unit_levels,
                                                  double unit_spacing);

}  // namespace cohex

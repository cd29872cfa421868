#pragma once

#include <functional>

#include "cohex/hilbert.hpp"

namespace cohex {

// Split of the l1 coherence into the part living inside degenerate
// eigenspaces of the reference observable (creatable for free) and the part
// between distinct eigenvalues (the useful remainder).
struct CoherenceReport {
  double total = 0.0;
  double free = 0.0;
  double useful = 0.0;
};

// Sum of |rho_ij| over i != j in the energy eigenbasis.
double l1_coherence(const ComplexMatrix& m);
double l1_coherence(const DensityOperator& rho);

CoherenceReport coherence_split(const DensityOperator& rho,
                                const ComplexMatrix& h_diag);

// True iff rho commutes with the diagonal observable within tol
// (max-entry norm of the commutator).
bool is_incoherent(const DensityOperator& rho, const ComplexMatrix& a_diag,
                   double tol = 1e-10);

// max-entry norm of V^+ V - I
double unitarity_defect(const ComplexMatrix& v);
// max-entry norm of [V, H]
double commutator_defect(const ComplexMatrix& v, const ComplexMatrix& h);

// True iff V is unitary within tol and commutes with the (diagonal) total
// Hamiltonian within tol.
bool check_energy_conserving(const ComplexMatrix& v,
                             const ComplexMatrix& h_tot, double tol = 1e-10);

// True iff every column of V holds exactly one entry of magnitude 1 and the
// rest are 0 (within tol): V maps each energy-basis product state to a single
// basis state up to phase. Together with check_energy_conserving this
// certifies that the interaction cannot create coherence.
bool check_basis_permutation(const ComplexMatrix& v, double tol = 1e-10);

using QubitChannel = std::function<DensityOperator(const DensityOperator&)>;

// Maximum l1 coherence the channel creates from an incoherent qubit input.
// The l1 norm is convex and channels are affine, so the maximum over the
// incoherent set is attained on the two basis states; only those are probed.
double qubit_channel_cohering_power(const QubitChannel& phi);

}  // namespace cohex

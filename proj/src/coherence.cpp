#include "cohex/coherence.hpp"

#include <cmath>

namespace cohex {

double l1_coherence(const ComplexMatrix& m) {
  double sum = 0.0;
  for (long i = 0; i < m.rows(); ++i) {
    for (long j = 0; j < m.cols(); ++j) {
      if (i != j) sum += std::abs(m(i, j));
    }
  }
  return sum;
}

double l1_coherence(const DensityOperator& rho) {
  return l1_coherence(rho.matrix());
}

CoherenceReport coherence_split(const DensityOperator& rho,
                                const ComplexMatrix& h_diag) {
  CoherenceReport report;
  report.total = l1_coherence(rho);
  report.free = l1_coherence(dephase_matrix(rho.matrix(), h_diag));
  report.useful = report.total - report.free;
  return report;
}

bool is_incoherent(const DensityOperator& rho, const ComplexMatrix& a_diag,
                   double tol) {
  if (a_diag.rows() != rho.dim()) {
    throw InvalidDimensionError("observable dimension mismatch");
  }
  const ComplexMatrix commutator =
      rho.matrix() * a_diag - a_diag * rho.matrix();
  return max_abs(commutator) <= tol;
}

double unitarity_defect(const ComplexMatrix& v) {
  if (v.rows() != v.cols()) {
    throw InvalidDimensionError("unitarity check requires a square matrix");
  }
  return max_abs(v.adjoint() * v -
                 ComplexMatrix::Identity(v.rows(), v.cols()));
}

double commutator_defect(const ComplexMatrix& v, const ComplexMatrix& h) {
  if (v.rows() != h.rows() || v.cols() != h.cols()) {
    throw InvalidDimensionError("commutator dimension mismatch");
  }
  return max_abs(v * h - h * v);
}

bool check_energy_conserving(const ComplexMatrix& v,
                             const ComplexMatrix& h_tot, double tol) {
  return unitarity_defect(v) <= tol && commutator_defect(v, h_tot) <= tol;
}

bool check_basis_permutation(const ComplexMatrix& v, double tol) {
  for (long j = 0; j < v.cols(); ++j) {
    long near_one = 0;
    for (long i = 0; i < v.rows(); ++i) {
      const double a = std::abs(v(i, j));
      if (std::abs(a - 1.0) <= tol) {
        ++near_one;
      } else if (a > tol) {
        return false;  // neither a unit entry nor zero
      }
    }
    if (near_one != 1) return false;
  }
  return true;
}

double qubit_channel_cohering_power(const QubitChannel& phi) {
  ComplexMatrix ground = ComplexMatrix::Zero(2, 2);
  ground(0, 0) = 1.0;
  ComplexMatrix excited = ComplexMatrix::Zero(2, 2);
  excited(1, 1) = 1.0;
  const double c0 = l1_coherence(phi(DensityOperator(ground)));
  const double c1 = l1_coherence(phi(DensityOperator(excited)));
  return std::max(c0, c1);
}

}  // namespace cohex

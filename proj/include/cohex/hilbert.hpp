#pragma once

#include <variant>

#include "cohex/core.hpp"

namespace cohex {

// Trace-one Hermitian positive matrix in the energy eigenbasis.
// Construction validates the state; `expected_trace` accommodates states that
// have lost a recorded amount of probability at a truncation boundary.
class DensityOperator {
 public:
  explicit DensityOperator(ComplexMatrix matrix, double expected_trace = 1.0);

  static DensityOperator from_pure(const ComplexVector& amplitudes);

  const ComplexMatrix& matrix() const { return mat_; }
  long dim() const { return mat_.rows(); }
  Complex element(long n, long np) const { return mat_(n, np); }
  double trace() const { return mat_.trace().real(); }
  double expected_trace() const { return expected_trace_; }

  static constexpr double kHermitianTol = 1e-10;
  static constexpr double kTraceTol = 1e-10;
  static constexpr double kMinEigenvalue = -1e-9;

 private:
  ComplexMatrix mat_;
  double expected_trace_;
};

// Finite energy ladder: `levels` equally spaced levels, gap `spacing`.
struct LadderSpec {
  long levels = 2;
  double spacing = 1.0;
};

// spacing * diag(0, 1, ..., levels-1)
ComplexMatrix ladder_hamiltonian(const LadderSpec& spec);

// Raising operator on a truncated ladder: <n+1|D|n> = 1, D|top> = 0.
ComplexMatrix shift_operator(long dim);

// Projector onto levels that are multiples of d. `dim` must be a multiple
// of d; pad the state first if it is not.
ComplexMatrix multiples_projector(long d, long dim);

// Staircase projector: sum_{k=0}^{d^{m-1}-1} D^k P_{d^m} (D^+)^k.
// Selects the level pattern that survives m rounds of strong extraction.
ComplexMatrix staircase_projector(long m, long d, long dim);

// Kronecker product, system-major: index (i, n) -> i * cols(B) + n.
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

enum class KeepSide { First, Second };

ComplexMatrix partial_trace_matrix(const ComplexMatrix& m, long dim_a,
                                   long dim_b, KeepSide keep);
DensityOperator partial_trace(const DensityOperator& rho, long dim_a,
                              long dim_b, KeepSide keep);

// Projection onto the eigenspaces of a diagonal observable: entries between
// levels with different diagonal values are zeroed. Eigenvalue grouping uses
// exact equality since Hamiltonians here are constructed, not measured.
ComplexMatrix dephase_matrix(const ComplexMatrix& m, const ComplexMatrix& h_diag);
DensityOperator dephase(const DensityOperator& rho, const ComplexMatrix& h_diag);

// Truncated pure state plus the probability discarded by the truncation
// (measured before renormalization).
struct TruncatedState {
  ComplexVector amplitudes;
  double tail_mass = 0.0;
};

// c_n = e^{-|a|^2/2} (e^{i phi} |a|)^n / sqrt(n!), renormalized over n < dim.
TruncatedState coherent_state(double amplitude, double phase, long dim);

// Squeezed vacuum: amplitude (-e^{i phi} tanh r)^n sqrt((2n)!)/(2^n n! sqrt(cosh r))
// on level 2n; odd levels are exactly zero.
TruncatedState squeezed_vacuum_state(double r, double phase, long dim);

struct CoherentReservoir {
  double amplitude = 0.0;
  double phase = 0.0;
};

struct SqueezedReservoir {
  double r = 0.0;
  double phase = 0.0;
};

struct ExplicitReservoir {
  ComplexMatrix matrix;  // must satisfy the DensityOperator invariants
};

// Declarative reservoir description plus truncation policy.
struct ReservoirSpec {
  std::variant<CoherentReservoir, SqueezedReservoir, ExplicitReservoir> kind =
      CoherentReservoir{};
  long truncation = 128;
  double tail_tolerance = 1e-12;

  struct Prepared {
    DensityOperator state;
    double tail_mass = 0.0;
  };

  // Builds the reservoir state. Throws TruncationError if the discarded tail
  // exceeds tail_tolerance.
  Prepared prepare() const;

  bool is_squeezed() const {
    return std::holds_alternative<SqueezedReservoir>(kind);
  }
  bool is_explicit() const {
    return std::holds_alternative<ExplicitReservoir>(kind);
  }
};

}  // namespace cohex

#include "cohex/hilbert.hpp"

#include <cmath>
#include <functional>

namespace cohex {

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw InvalidArgumentError(what);
}

}  // namespace

DensityOperator::DensityOperator(ComplexMatrix matrix, double expected_trace)
    : mat_(std::move(matrix)), expected_trace_(expected_trace) {
  if (mat_.rows() < 1 || mat_.rows() != mat_.cols()) {
    throw InvalidDimensionError("density operator must be square and non-empty");
  }
  if (!all_finite(mat_)) {
    throw InvalidArgumentError("density operator has non-finite entries");
  }
  const double herm_defect = max_abs(mat_ - mat_.adjoint());
  if (herm_defect > kHermitianTol) {
    throw InvalidArgumentError("density operator not Hermitian (defect " +
                               std::to_string(herm_defect) + ")");
  }
  const double tr = mat_.trace().real();
  if (std::abs(tr - expected_trace_) > kTraceTol) {
    throw InvalidArgumentError("density operator trace " + std::to_string(tr) +
                               " differs from expected " +
                               std::to_string(expected_trace_));
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(mat_,
                                                  Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < kMinEigenvalue) {
    throw InvalidArgumentError("density operator not positive semidefinite");
  }
}

DensityOperator DensityOperator::from_pure(const ComplexVector& amplitudes) {
  ComplexMatrix m = amplitudes * amplitudes.adjoint();
  return DensityOperator(std::move(m), amplitudes.squaredNorm());
}

ComplexMatrix ladder_hamiltonian(const LadderSpec& spec) {
  if (spec.levels < 2) throw InvalidDimensionError("ladder needs >= 2 levels");
  require(spec.spacing > 0.0, "ladder spacing must be positive");
  ComplexMatrix h = ComplexMatrix::Zero(spec.levels, spec.levels);
  for (long n = 0; n < spec.levels; ++n) h(n, n) = spec.spacing * double(n);
  return h;
}

ComplexMatrix shift_operator(long dim) {
  if (dim < 2) throw InvalidDimensionError("shift operator needs dim >= 2");
  ComplexMatrix d = ComplexMatrix::Zero(dim, dim);
  for (long n = 0; n + 1 < dim; ++n) d(n + 1, n) = 1.0;
  return d;
}

ComplexMatrix multiples_projector(long d, long dim) {
  if (d < 1 || dim < 1 || dim % d != 0) {
    throw InvalidDimensionError("projector requires dim to be a multiple of d");
  }
  ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
  for (long n = 0; n < dim; n += d) p(n, n) = 1.0;
  return p;
}

ComplexMatrix staircase_projector(long m, long d, long dim) {
  if (m < 1) throw InvalidDimensionError("staircase projector requires m >= 1");
  long dm = 1;  // d^m, overflow-guarded
  for (long i = 0; i < m; ++i) {
    if (dm > dim) throw InvalidDimensionError("d^m exceeds dimension");
    dm *= d;
  }
  if (dim % dm != 0) {
    throw InvalidDimensionError("staircase projector requires dim divisible by d^m");
  }
  const long offsets = dm / d;  // d^{m-1}
  ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
  for (long base = 0; base < dim; base += dm) {
    for (long k = 0; k < offsets; ++k) p(base + k, base + k) = 1.0;
  }
  return p;
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i) {
    for (long j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace_matrix(const ComplexMatrix& m, long dim_a,
                                   long dim_b, KeepSide keep) {
  if (m.rows() != m.cols() || m.rows() != dim_a * dim_b) {
    throw InvalidDimensionError("partial trace dimension mismatch");
  }
  if (keep == KeepSide::First) {
    ComplexMatrix out = ComplexMatrix::Zero(dim_a, dim_a);
    for (long i = 0; i < dim_a; ++i)
      for (long j = 0; j < dim_a; ++j)
        for (long n = 0; n < dim_b; ++n)
          out(i, j) += m(i * dim_b + n, j * dim_b + n);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(dim_b, dim_b);
  for (long n = 0; n < dim_b; ++n)
    for (long np = 0; np < dim_b; ++np)
      for (long i = 0; i < dim_a; ++i)
        out(n, np) += m(i * dim_b + n, i * dim_b + np);
  return out;
}

DensityOperator partial_trace(const DensityOperator& rho, long dim_a,
                              long dim_b, KeepSide keep) {
  return DensityOperator(
      partial_trace_matrix(rho.matrix(), dim_a, dim_b, keep),
      rho.expected_trace());
}

ComplexMatrix dephase_matrix(const ComplexMatrix& m, const ComplexMatrix& h_diag) {
  if (h_diag.rows() != m.rows() || h_diag.cols() != m.cols()) {
    throw InvalidDimensionError("dephase dimension mismatch");
  }
  ComplexMatrix out = m;
  for (long i = 0; i < m.rows(); ++i) {
    for (long j = 0; j < m.cols(); ++j) {
      if (h_diag(i, i) != h_diag(j, j)) out(i, j) = 0.0;
    }
  }
  return out;
}

DensityOperator dephase(const DensityOperator& rho, const ComplexMatrix& h_diag) {
  return DensityOperator(dephase_matrix(rho.matrix(), h_diag),
                         rho.expected_trace());
}

namespace {

// Sums the discarded occupation probabilities p_n for n >= dim given the
// recurrence ratio p_{n+1}/p_n. `ratio_bound` must majorize every ratio past
// the truncation point; when it does not (truncation before the distribution
// peak) the complement 1 - kept is accurate enough and used instead.
double certified_tail(double p_first, double kept,
                      const std::function<double(long)>& ratio, long first_n,
                      double ratio_bound) {
  if (!(ratio_bound < 1.0)) return std::max(0.0, 1.0 - kept);
  double tail = 0.0;
  double p = p_first;
  long n = first_n;
  while (p > 0.0 && p / (1.0 - ratio_bound) > tail * 1e-6) {
    tail += p;
    p *= ratio(n);
    ++n;
    if (n - first_n > 100000) break;
  }
  // remaining terms are below a 1e-6 relative geometric bound
  return tail + p / (1.0 - ratio_bound);
}

}  // namespace

TruncatedState coherent_state(double amplitude, double phase, long dim) {
  if (dim < 1) throw InvalidDimensionError("state dimension must be >= 1");
  require(amplitude >= 0.0, "coherent amplitude must be non-negative");
  const double x = amplitude * amplitude;  // mean occupation
  TruncatedState st;
  st.amplitudes = ComplexVector::Zero(dim);
  const Complex step = std::polar(amplitude, phase);
  Complex c = std::exp(-x / 2.0);
  double kept = 0.0;
  for (long n = 0; n < dim; ++n) {
    st.amplitudes(n) = c;
    kept += std::norm(c);
    c *= step / std::sqrt(double(n + 1));
  }
  if (amplitude == 0.0) {
    st.tail_mass = 0.0;
  } else {
    // Occupation ratio p_{n+1}/p_n = x/(n+1); past the peak it is < 1 and
    // decreasing, so the tail can be summed directly without cancellation.
    const double bound = x / double(dim);
    st.tail_mass = certified_tail(
        std::norm(c), kept, [x](long n) { return x / double(n + 1); }, dim,
        bound);
  }
  if (kept <= 0.0) throw TruncationError("coherent state truncated to zero mass");
  st.amplitudes /= std::sqrt(kept);
  return st;
}

TruncatedState squeezed_vacuum_state(double r, double phase, long dim) {
  if (dim < 1) throw InvalidDimensionError("state dimension must be >= 1");
  require(r >= 0.0, "squeezing parameter must be non-negative");
  const double t = std::tanh(r);
  TruncatedState st;
  st.amplitudes = ComplexVector::Zero(dim);
  const Complex step_phase = -std::polar(t, phase);
  Complex c = 1.0 / std::sqrt(std::cosh(r));
  double kept = 0.0;
  long n = 0;  // amplitude index: level 2n
  for (; 2 * n < dim; ++n) {
    st.amplitudes(2 * n) = c;
    kept += std::norm(c);
    // c_{n+1}/c_n = -e^{i phi} tanh r * sqrt((2n+1)(2n+2)) / (2(n+1))
    c *= step_phase * std::sqrt(double(2 * n + 1) / double(2 * n + 2));
  }
  if (t == 0.0) {
    st.tail_mass = 0.0;
  } else {
    // p_{n+1}/p_n = t^2 (2n+1)/(2n+2) < t^2 for every n.
    const double t2 = t * t;
    st.tail_mass = certified_tail(
        std::norm(c), kept,
        [t2](long k) { return t2 * double(2 * k + 1) / double(2 * k + 2); }, n,
        t2);
  }
  if (kept <= 0.0) throw TruncationError("squeezed state truncated to zero mass");
  st.amplitudes /= std::sqrt(kept);
  return st;
}

ReservoirSpec::Prepared ReservoirSpec::prepare() const {
  if (truncation < 2) throw InvalidDimensionError("truncation must be >= 2");
  if (const auto* c = std::get_if<CoherentReservoir>(&kind)) {
    TruncatedState st = coherent_state(c->amplitude, c->phase, truncation);
    if (st.tail_mass > tail_tolerance) {
      throw TruncationError("coherent reservoir tail mass " +
                            std::to_string(st.tail_mass) +
                            " exceeds tolerance; raise truncation");
    }
    return {DensityOperator::from_pure(st.amplitudes), st.tail_mass};
  }
  if (const auto* s = std::get_if<SqueezedReservoir>(&kind)) {
    TruncatedState st = squeezed_vacuum_state(s->r, s->phase, truncation);
    if (st.tail_mass > tail_tolerance) {
      throw TruncationError("squeezed reservoir tail mass " +
                            std::to_string(st.tail_mass) +
                            " exceeds tolerance; raise truncation");
    }
    return {DensityOperator::from_pure(st.amplitudes), st.tail_mass};
  }
  const auto& e = std::get<ExplicitReservoir>(kind);
  return {DensityOperator(e.matrix), 0.0};
}

}  // namespace cohex

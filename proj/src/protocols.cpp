#include "cohex/protocols.hpp"

#include <cmath>
#include <functional>

#include "cohex/coherence.hpp"

namespace cohex {

namespace {

ComplexMatrix ground_projector(long dim) {
  ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
  p(0, 0) = 1.0;
  return p;
}

ComplexMatrix matrix_power(const ComplexMatrix& m, long k) {
  ComplexMatrix out = ComplexMatrix::Identity(m.rows(), m.cols());
  for (long i = 0; i < k; ++i) out = m * out;
  return out;
}

long pow_long(long base, long exp) {
  long out = 1;
  for (long i = 0; i < exp; ++i) out *= base;
  return out;
}

// Assembles sum_{i,j} |i><j| (x) block(i,j) with d-dimensional system blocks.
ComplexMatrix from_blocks(long d, long dim,
                          const std::function<ComplexMatrix(long, long)>& block) {
  ComplexMatrix v = ComplexMatrix::Zero(d * dim, d * dim);
  for (long i = 0; i < d; ++i) {
    for (long j = 0; j < d; ++j) {
      v.block(i * dim, j * dim, dim, dim) = block(i, j);
    }
  }
  return v;
}

StepResult make_step(const ComplexMatrix& joint_before,
                     const ComplexMatrix& v, long sys_dim, long res_dim,
                     double expected_trace, double injected, double energy) {
  const ComplexMatrix after = evolve_joint(v, joint_before);
  const double leak = joint_before.trace().real() - after.trace().real();
  const double expect_out = expected_trace - leak;
  DensityOperator extracted(
      partial_trace_matrix(after, sys_dim, res_dim, KeepSide::First),
      expect_out);
  DensityOperator reservoir(
      partial_trace_matrix(after, sys_dim, res_dim, KeepSide::Second),
      expect_out);
  const double l1 = l1_coherence(extracted);
  return StepResult{std::move(extracted), std::move(reservoir), l1,
                    injected,             energy,               leak};
}

}  // namespace

ComplexMatrix build_weak_unitary(long dim, bool infinite_variant) {
  if (dim < 2) throw InvalidDimensionError("weak interaction needs dim >= 2");
  const ComplexMatrix delta = shift_operator(dim);
  ComplexMatrix top = ComplexMatrix::Zero(dim, dim);
  if (!infinite_variant) top(dim - 1, dim - 1) = 1.0;
  return from_blocks(2, dim, [&](long i, long j) -> ComplexMatrix {
    if (i == 0 && j == 0) return ground_projector(dim);
    if (i == 0 && j == 1) return delta;
    if (i == 1 && j == 0) return delta.adjoint();
    return top;
  });
}

double weak_infinite_boundary_defect(const ComplexMatrix& v) {
  const long dim = v.rows() / 2;
  if (v.rows() != 2 * dim || v.rows() != v.cols()) {
    throw InvalidDimensionError("expected a qubit x ladder interaction");
  }
  ComplexMatrix expected = ComplexMatrix::Identity(2 * dim, 2 * dim);
  expected(2 * dim - 1, 2 * dim - 1) = 0.0;  // |1, top> is annihilated
  return max_abs(v.adjoint() * v - expected);
}

ComplexMatrix build_strong_unitary(long dim) {
  if (dim < 2 || dim % 2 != 0) {
    throw InvalidDimensionError("strong interaction needs an even dimension");
  }
  return build_dlevel_unitary(2, dim);
}

ComplexMatrix build_dlevel_unitary(long d, long dim) {
  if (d < 2) throw InvalidDimensionError("extraction unit needs d >= 2");
  if (dim < d || dim % d != 0) {
    throw InvalidDimensionError("reservoir dimension must be a multiple of d");
  }
  const ComplexMatrix delta = shift_operator(dim);
  const ComplexMatrix pd = multiples_projector(d, dim);
  std::vector<ComplexMatrix> shift_pow(d);
  shift_pow[0] = ComplexMatrix::Identity(dim, dim);
  for (long k = 1; k < d; ++k) shift_pow[k] = delta * shift_pow[k - 1];
  return from_blocks(d, dim, [&](long i, long j) {
    return ComplexMatrix(shift_pow[j] * pd * shift_pow[i].adjoint());
  });
}

ComplexMatrix build_catalytic_unitary(const ComplexMatrix& u, long dim) {
  if (u.rows() != 2 || u.cols() != 2) {
    throw InvalidArgumentError("catalytic interaction needs a 2x2 unitary");
  }
  if (unitarity_defect(u) > 1e-10) {
    throw InvalidArgumentError("catalytic interaction matrix is not unitary");
  }
  if (dim < 2) throw InvalidDimensionError("catalytic interaction needs dim >= 2");
  const ComplexMatrix delta = shift_operator(dim);
  const ComplexMatrix id = ComplexMatrix::Identity(dim, dim);
  return from_blocks(2, dim, [&](long i, long j) -> ComplexMatrix {
    if (i == 0 && j == 0) return ground_projector(dim) + u(0, 0) * delta * delta.adjoint();
    if (i == 0 && j == 1) return u(0, 1) * delta;
    if (i == 1 && j == 0) return u(1, 0) * delta.adjoint();
    return u(1, 1) * id;
  });
}

ComplexMatrix evolve_joint(const ComplexMatrix& v, const ComplexMatrix& rho_joint) {
  if (v.rows() != rho_joint.rows() || v.cols() != rho_joint.cols()) {
    throw InvalidDimensionError("joint evolution dimension mismatch");
  }
  return v * rho_joint * v.adjoint();
}

DensityOperator pad_levels(const DensityOperator& rho, long new_dim) {
  if (new_dim < rho.dim()) throw InvalidDimensionError("cannot pad downward");
  if (new_dim == rho.dim()) return rho;
  ComplexMatrix out = ComplexMatrix::Zero(new_dim, new_dim);
  out.topLeftCorner(rho.dim(), rho.dim()) = rho.matrix();
  return DensityOperator(std::move(out), rho.expected_trace());
}

DensityOperator compress_to_sublattice(const DensityOperator& rho, long stride) {
  if (stride < 1) throw InvalidDimensionError("sublattice stride must be >= 1");
  const long dim = rho.dim();
  const long new_dim = (dim + stride - 1) / stride;
  if (new_dim < 1) throw InvalidDimensionError("empty sublattice");
  ComplexMatrix out(new_dim, new_dim);
  for (long i = 0; i < new_dim; ++i)
    for (long j = 0; j < new_dim; ++j)
      out(i, j) = rho.element(i * stride, j * stride);
  const double dropped = rho.trace() - out.trace().real();
  return DensityOperator(std::move(out), rho.expected_trace() - dropped);
}

StepResult catalytic_step(const DensityOperator& sigma, const ComplexMatrix& u,
                          double headroom_tolerance) {
  const long dim = sigma.dim();
  if (dim < 3) throw InvalidDimensionError("catalytic step needs dim >= 3");
  const double top_two = sigma.element(dim - 1, dim - 1).real() +
                         sigma.element(dim - 2, dim - 2).real();
  if (top_two > headroom_tolerance) {
    throw TruncationError(
        "insufficient shift headroom: top-two-level occupancy " +
        std::to_string(top_two));
  }
  const ComplexMatrix delta = shift_operator(dim);
  const ComplexMatrix shifted = delta * sigma.matrix() * delta.adjoint();
  const double shift_leak = sigma.trace() - shifted.trace().real();

  const ComplexMatrix v = build_catalytic_unitary(u, dim);
  const ComplexMatrix joint =
      tensor_product(ground_projector(2), shifted);
  StepResult step = make_step(joint, v, 2, dim,
                              sigma.expected_trace() - shift_leak,
                              2.0 * std::abs(u(0, 0)) * std::abs(u(1, 0)),
                              /*energy=*/1.0);
  step.trace_leakage += shift_leak;
  return step;
}

StepResult weak_step(const DensityOperator& sigma, const DensityOperator& qubit,
                     WeakVariant variant) {
  if (qubit.dim() != 2) throw InvalidDimensionError("weak step stores into a qubit");
  const long dim = sigma.dim();
  const ComplexMatrix v =
      build_weak_unitary(dim, variant == WeakVariant::Infinite);
  const ComplexMatrix joint = tensor_product(qubit.matrix(), sigma.matrix());
  return make_step(joint, v, 2, dim,
                   qubit.expected_trace() * sigma.expected_trace(),
                   /*injected=*/0.0, /*energy=*/0.0);
}

StepResult strong_step(const DensityOperator& sigma) {
  return dlevel_step(sigma, 2);
}

StepResult dlevel_step(const DensityOperator& sigma, long d) {
  if (d < 2) throw InvalidDimensionError("extraction unit needs d >= 2");
  DensityOperator padded =
      sigma.dim() % d == 0
          ? sigma
          : pad_levels(sigma, ((sigma.dim() + d - 1) / d) * d);
  const long dim = padded.dim();
  const ComplexMatrix v = build_dlevel_unitary(d, dim);
  const ComplexMatrix joint =
      tensor_product(ground_projector(d), padded.matrix());
  return make_step(joint, v, d, dim, padded.expected_trace(),
                   /*injected=*/0.0, /*energy=*/0.0);
}

long max_repetitions(Protocol protocol, long levels, long d) {
  if (levels < 2) throw InvalidDimensionError("reservoir needs >= 2 levels");
  switch (protocol) {
    case Protocol::Weak:
      return levels - 1;
    case Protocol::Strong:
      d = 2;
      [[fallthrough]];
    case Protocol::DLevel: {
      if (d < 2) throw InvalidDimensionError("extraction unit needs d >= 2");
      long count = 0;
      long p = 1;
      while (p <= levels / d) {
        p *= d;
        ++count;
      }
      return count;
    }
    case Protocol::Catalytic:
      // Bounded only by shift headroom on the truncated representation.
      return levels - 1;
  }
  throw InvalidArgumentError("unknown protocol");
}

ComplexMatrix weak_extracted_formula(const DensityOperator& sigma) {
  ComplexMatrix out(2, 2);
  out(0, 0) = sigma.element(0, 0);
  out(0, 1) = sigma.element(0, 1);
  out(1, 0) = std::conj(sigma.element(0, 1));
  out(1, 1) = sigma.expected_trace() - sigma.element(0, 0);
  return out;
}

ComplexMatrix weak_reservoir_formula(const DensityOperator& sigma) {
  const long dim = sigma.dim();
  const ComplexMatrix delta = shift_operator(dim);
  ComplexMatrix out = delta.adjoint() * sigma.matrix() * delta;
  out(0, 0) += sigma.element(0, 0);
  return out;
}

double weak_iterated_l1(const DensityOperator& sigma0, long m) {
  if (m < 1) throw InvalidArgumentError("iteration count must be >= 1");
  if (m >= sigma0.dim()) return 0.0;
  return 2.0 * std::abs(sigma0.element(m - 1, m));
}

ComplexMatrix weak_iterated_reservoir(const DensityOperator& sigma0, long m) {
  if (m < 0) throw InvalidArgumentError("iteration count must be >= 0");
  if (m == 0) return sigma0.matrix();
  const long dim = sigma0.dim();
  const ComplexMatrix shift_m = matrix_power(shift_operator(dim), std::min(m, dim));
  ComplexMatrix out = shift_m.adjoint() * sigma0.matrix() * shift_m;
  for (long k = 0; k < std::min(m, dim); ++k) out(0, 0) += sigma0.element(k, k);
  return out;
}

ComplexMatrix dlevel_extracted_formula(const DensityOperator& sigma, long d) {
  return dlevel_iterated_extracted(sigma, d, 1);
}

ComplexMatrix dlevel_reservoir_formula(const DensityOperator& sigma, long d) {
  return dlevel_iterated_reservoir(sigma, d, 1);
}

ComplexMatrix dlevel_iterated_extracted(const DensityOperator& sigma0, long d,
                                        long m) {
  if (d < 2 || m < 1) throw InvalidArgumentError("need d >= 2 and m >= 1");
  const long dim = sigma0.dim();
  const long dm = pow_long(d, m);
  if (dim % dm != 0) {
    throw InvalidDimensionError("iterated expression needs dim divisible by d^m");
  }
  const long stride = dm / d;  // d^{m-1}
  const ComplexMatrix p = staircase_projector(m, d, dim);
  const ComplexMatrix delta = shift_operator(dim);
  std::vector<ComplexMatrix> shift_pow(d);
  shift_pow[0] = ComplexMatrix::Identity(dim, dim);
  for (long k = 1; k < d; ++k)
    shift_pow[k] = matrix_power(delta, stride) * shift_pow[k - 1];
  ComplexMatrix out(d, d);
  for (long i = 0; i < d; ++i) {
    for (long j = 0; j < d; ++j) {
      out(i, j) = (shift_pow[j] * p * shift_pow[i].adjoint() * sigma0.matrix())
                      .trace();
    }
  }
  return out;
}

ComplexMatrix dlevel_iterated_reservoir(const DensityOperator& sigma0, long d,
                                        long m) {
  if (d < 2 || m < 1) throw InvalidArgumentError("need d >= 2 and m >= 1");
  const long dim = sigma0.dim();
  const long dm = pow_long(d, m);
  if (dim % dm != 0) {
    throw InvalidDimensionError("iterated expression needs dim divisible by d^m");
  }
  const ComplexMatrix p = multiples_projector(dm, dim);
  const ComplexMatrix delta = shift_operator(dim);
  ComplexMatrix acc = ComplexMatrix::Zero(dim, dim);
  ComplexMatrix shifted = sigma0.matrix();
  for (long i = 0; i < dm; ++i) {
    acc += shifted;
    shifted = delta.adjoint() * shifted * delta;
  }
  return p * acc * p;
}

double dlevel_iterated_l1(const DensityOperator& sigma0, long d, long m) {
  return l1_coherence(dlevel_iterated_extracted(sigma0, d, m));
}

std::vector<double> register_hamiltonian_diagonal(long units, long unit_levels,
                                                  double unit_spacing) {
  if (units < 1 || unit_levels < 2) {
    throw InvalidDimensionError("register needs units >= 1 with >= 2 levels");
  }
  std::vector<double> diag{0.0};
  for (long u = 0; u < units; ++u) {
    std::vector<double> next;
    next.reserve(diag.size() * unit_levels);
    for (double base : diag) {
      for (long level = 0; level < unit_levels; ++level) {
        next.push_back(base + unit_spacing * double(level));
      }
    }
    diag = std::move(next);
  }
  return diag;
}

RunTrace repeat_extraction(const ReservoirSpec& spec, Protocol protocol,
                           long m, long d,
                           const std::optional<ComplexMatrix>& catalytic_u) {
  if (m < 1) throw InvalidArgumentError("iteration count must be >= 1");
  if (protocol == Protocol::Strong) d = 2;
  if (protocol == Protocol::Weak || protocol == Protocol::Catalytic) d = 2;

  RunTrace trace;
  trace.protocol = protocol;
  trace.reservoir_spec = spec;

  ComplexMatrix u_eff;
  if (protocol == Protocol::Catalytic) {
    if (catalytic_u.has_value()) {
      u_eff = *catalytic_u;
    } else {
      u_eff.resize(2, 2);  // Hadamard: the optimal extractor
      const double s = 1.0 / std::sqrt(2.0);
      u_eff << s, s, s, -s;
    }
  }

  ReservoirSpec::Prepared prep = spec.prepare();
  trace.initial_tail_mass = prep.tail_mass;
  DensityOperator sigma = prep.state;

  // A squeezed vacuum occupies only the even levels; extraction acts on that
  // subladder (unit gap twice the base spacing).
  if (spec.is_squeezed()) sigma = compress_to_sublattice(sigma, 2);

  const long bound = max_repetitions(protocol, sigma.dim(), d);
  if (m > bound) {
    throw RepetitionLimitError("requested " + std::to_string(m) +
                               " repetitions; at most " +
                               std::to_string(bound) + " possible on " +
                               std::to_string(sigma.dim()) + " levels");
  }

  // Initial state in the padded frame the iterated expressions live in.
  DensityOperator initial = sigma;
  if (protocol == Protocol::Strong || protocol == Protocol::DLevel) {
    const long dm = pow_long(d, m);
    const long target = ((sigma.dim() + dm - 1) / dm) * dm;
    initial = pad_levels(sigma, target);
  }

  DensityOperator ground_qubit(
      [] {
        ComplexMatrix g = ComplexMatrix::Zero(2, 2);
        g(0, 0) = 1.0;
        return g;
      }());

  for (long step_index = 1; step_index <= m; ++step_index) {
    StepResult step = [&]() -> StepResult {
      switch (protocol) {
        case Protocol::Weak:
          return weak_step(sigma, ground_qubit, WeakVariant::Finite);
        case Protocol::Strong:
        case Protocol::DLevel: {
          StepResult s = dlevel_step(sigma, d);
          s.reservoir = compress_to_sublattice(s.reservoir, d);
          return s;
        }
        case Protocol::Catalytic:
          return catalytic_step(sigma, u_eff, spec.tail_tolerance);
      }
      throw InvalidArgumentError("unknown protocol");
    }();
    sigma = step.reservoir;

    switch (protocol) {
      case Protocol::Weak:
        trace.effective_register_dims.push_back(1);
        trace.formula_l1.push_back(weak_iterated_l1(initial, step_index));
        break;
      case Protocol::Strong:
      case Protocol::DLevel:
        trace.effective_register_dims.push_back(pow_long(d, step_index - 1));
        trace.formula_l1.push_back(
            dlevel_iterated_l1(initial, d, step_index));
        break;
      case Protocol::Catalytic: {
        trace.effective_register_dims.push_back(1);
        const ComplexMatrix delta = shift_operator(initial.dim());
        const double uu =
            2.0 * std::abs(u_eff(0, 0)) * std::abs(u_eff(1, 0));
        trace.formula_l1.push_back(
            uu * std::abs((delta * initial.matrix()).trace()));
        break;
      }
    }
    trace.steps.push_back(std::move(step));
  }
  trace.working_levels = initial.dim();
  return trace;
}

}  // namespace cohex

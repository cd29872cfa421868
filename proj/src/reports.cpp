#include "cohex/reports.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "cohex/closed_form.hpp"
#include "cohex/coherence.hpp"

namespace cohex {

const char* protocol_name(Protocol p) {
  switch (p) {
    case Protocol::Catalytic: return "catalytic";
    case Protocol::Weak: return "weak";
    case Protocol::Strong: return "strong";
    case Protocol::DLevel: return "dlevel";
  }
  return "?";
}

std::string format_significant(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return buf;
}

long choose_truncation(bool squeezed, double param, double tail_tolerance,
                       long minimum) {
  constexpr long kCap = 1L << 15;
  for (long dim = std::max<long>(2, minimum); dim <= kCap; dim *= 2) {
    const TruncatedState st = squeezed
                                  ? squeezed_vacuum_state(param, 0.0, dim)
                                  : coherent_state(param, 0.0, dim);
    if (st.tail_mass <= tail_tolerance) return dim;
  }
  throw TruncationError("no truncation up to 2^15 levels meets the tail tolerance");
}

namespace {

ReservoirSpec make_spec(bool squeezed, double param, double phase,
                        long truncation, double tail_tolerance) {
  ReservoirSpec spec;
  if (squeezed) {
    spec.kind = SqueezedReservoir{param, phase};
  } else {
    spec.kind = CoherentReservoir{param, phase};
  }
  spec.truncation = truncation;
  spec.tail_tolerance = tail_tolerance;
  return spec;
}

std::optional<double> closed_form_or_none(Protocol protocol,
                                          const ReservoirSpec& spec, long m,
                                          const std::optional<ComplexMatrix>& u) {
  if (protocol == Protocol::DLevel) return std::nullopt;
  return predicted_amount(protocol, spec, m, u);
}

}  // namespace

void write_simulate_report(std::ostream& out, const SimulateConfig& config) {
  const ReservoirSpec spec = make_spec(config.squeezed, config.param,
                                       config.phase, config.truncation,
                                       config.tail_tolerance);
  const RunTrace trace = repeat_extraction(spec, config.protocol,
                                           config.repetitions, config.d,
                                           config.catalytic_u);
  out << "# extraction run\n";
  out << "protocol = " << protocol_name(config.protocol) << "\n";
  out << "reservoir = " << (config.squeezed ? "squeezed" : "coherent") << "\n";
  out << "param = " << format_significant(config.param) << "\n";
  out << "phase = " << format_significant(config.phase) << "\n";
  out << "truncation = " << config.truncation << "\n";
  out << "tail_mass = " << format_significant(trace.initial_tail_mass) << "\n";
  if (config.protocol == Protocol::DLevel) out << "d = " << config.d << "\n";
  out << "steps = " << trace.steps.size() << "\n";
  for (size_t i = 0; i < trace.steps.size(); ++i) {
    const StepResult& step = trace.steps[i];
    const std::string prefix = "step." + std::to_string(i + 1) + ".";
    out << prefix << "extracted_l1 = "
        << format_significant(step.extracted_l1) << "\n";
    const auto closed =
        closed_form_or_none(config.protocol, spec, long(i) + 1,
                            config.catalytic_u);
    if (closed.has_value()) {
      out << prefix << "closed_form = " << format_significant(*closed) << "\n";
      out << prefix << "abs_err = "
          << format_significant(std::abs(step.extracted_l1 - *closed)) << "\n";
    }
    out << prefix << "injected_free_coherence = "
        << format_significant(step.injected_free_coherence) << "\n";
    out << prefix << "energy_cost = " << format_significant(step.energy_cost)
        << "\n";
    out << prefix << "trace_leakage = "
        << format_significant(step.trace_leakage) << "\n";
    const ComplexMatrix& ex = step.extracted.matrix();
    for (long r = 0; r < ex.rows(); ++r) {
      for (long c = 0; c < ex.cols(); ++c) {
        out << prefix << "extracted.r" << r << "c" << c << " = ("
            << format_significant(ex(r, c).real()) << ","
            << format_significant(ex(r, c).imag()) << ")\n";
      }
    }
  }
}

void write_sweep_csv(std::ostream& out, const SweepConfig& config) {
  if (config.param_min > config.param_max) {
    throw InvalidArgumentError("param_min must not exceed param_max");
  }
  if (config.steps < 2) throw InvalidArgumentError("sweep needs >= 2 grid points");
  if (config.repetitions < 1) throw InvalidArgumentError("repetitions must be >= 1");
  if (config.protocol == Protocol::DLevel) {
    throw InvalidArgumentError("sweep supports weak, strong and catalytic runs");
  }
  const long truncation =
      std::max(config.truncation,
               choose_truncation(config.squeezed, config.param_max,
                                 config.tail_tolerance, config.truncation));
  out << "# protocol=" << protocol_name(config.protocol)
      << " reservoir=" << (config.squeezed ? "squeezed" : "coherent")
      << " phase=" << format_significant(config.phase)
      << " truncation=" << truncation
      << " tail_tolerance=" << format_significant(config.tail_tolerance)
      << "\n";
  out << "param,m,extracted_l1,closed_form,abs_err,relative_to_cmax\n";
  for (long i = 0; i < config.steps; ++i) {
    const double param =
        config.param_min + (config.param_max - config.param_min) *
                               double(i) / double(config.steps - 1);
    const ReservoirSpec spec = make_spec(config.squeezed, param, config.phase,
                                         truncation, config.tail_tolerance);
    const RunTrace trace = repeat_extraction(spec, config.protocol,
                                             config.repetitions, config.d,
                                             config.catalytic_u);
    for (long m = 1; m <= long(trace.steps.size()); ++m) {
      const StepResult& step = trace.steps[m - 1];
      const auto closed =
          closed_form_or_none(config.protocol, spec, m, config.catalytic_u);
      out << format_significant(param) << "," << m << ","
          << format_significant(step.extracted_l1) << ",";
      if (closed.has_value()) {
        out << format_significant(*closed) << ","
            << format_significant(std::abs(step.extracted_l1 - *closed));
      } else {
        out << ",";
      }
      out << ",";
      if (config.protocol == Protocol::Strong) {
        const double cmax = max_useful_coherence(1L << (m - 1));
        out << format_significant(step.extracted_l1 / cmax);
      }
      out << "\n";
    }
  }
}

void write_compare_csv(std::ostream& out, const CompareConfig& config) {
  if (config.param_min > config.param_max) {
    throw InvalidArgumentError("param_min must not exceed param_max");
  }
  if (config.steps < 2) throw InvalidArgumentError("grid needs >= 2 points");
  const long truncation =
      std::max(config.truncation,
               choose_truncation(config.squeezed, config.param_max,
                                 config.tail_tolerance, config.truncation));
  out << "# reservoir=" << (config.squeezed ? "squeezed" : "coherent")
      << " truncation=" << truncation
      << " tail_tolerance=" << format_significant(config.tail_tolerance)
      << "\n";
  out << "param,strong_power,catalytic_power\n";
  for (long i = 0; i < config.steps; ++i) {
    const double param =
        config.param_min + (config.param_max - config.param_min) *
                               double(i) / double(config.steps - 1);
    const ReservoirSpec spec =
        make_spec(config.squeezed, param, 0.0, truncation,
                  config.tail_tolerance);
    DensityOperator sigma = spec.prepare().state;
    if (config.squeezed) sigma = compress_to_sublattice(sigma, 2);
    const long dim = sigma.dim();
    const ComplexMatrix delta = shift_operator(dim);
    const ComplexMatrix p2 = multiples_projector(2, dim);
    const double strong_power =
        2.0 * std::abs((delta * p2 * sigma.matrix()).trace());
    const double catalytic_power =
        std::abs((delta * sigma.matrix()).trace());
    out << format_significant(param) << ","
        << format_significant(strong_power) << ","
        << format_significant(catalytic_power) << "\n";
  }
}

}  // namespace cohex

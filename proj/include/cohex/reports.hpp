#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "cohex/protocols.hpp"

namespace cohex {

// Fixed 12-significant-digit formatting, '.' decimal separator, no locale.
std::string format_significant(double value, int digits = 12);

// Smallest power-of-two truncation >= `minimum` whose discarded tail is
// within `tail_tolerance` for the given reservoir family and parameter.
long choose_truncation(bool squeezed, double param, double tail_tolerance,
                       long minimum = 128);

struct SimulateConfig {
  Protocol protocol = Protocol::Weak;
  bool squeezed = false;
  double param = 1.0;
  double phase = 0.0;
  long repetitions = 1;
  long d = 2;
  long truncation = 128;
  double tail_tolerance = 1e-12;
  std::optional<ComplexMatrix> catalytic_u;
};

// Key/value result document: per-step extracted amount, closed-form
// prediction, absolute error, trace leakage, and the extracted state's
// entries.
void write_simulate_report(std::ostream& out, const SimulateConfig& config);

struct SweepConfig {
  Protocol protocol = Protocol::Weak;
  bool squeezed = false;
  double param_min = 0.0;
  double param_max = 1.0;
  long steps = 2;
  long repetitions = 1;
  long d = 2;
  long truncation = 128;
  double tail_tolerance = 1e-12;
  double phase = 0.0;
  std::optional<ComplexMatrix> catalytic_u;
};

// CSV: param,m,extracted_l1,closed_form,abs_err,relative_to_cmax
// (relative_to_cmax only for strong runs); '#' comment header lines record
// the configuration. Byte-identical output for identical configuration.
void write_sweep_csv(std::ostream& out, const SweepConfig& config);

struct CompareConfig {
  bool squeezed = false;
  double param_min = 0.0;
  double param_max = 1.0;
  long steps = 2;
  long truncation = 128;
  double tail_tolerance = 1e-12;
};

// CSV: param,strong_power,catalytic_power — single-extraction cohering power
// of the strong protocol versus the best catalytic interaction.
void write_compare_csv(std::ostream& out, const CompareConfig& config);

const char* protocol_name(Protocol p);

}  // namespace cohex

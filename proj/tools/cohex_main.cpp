#include <clocale>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cohex/closed_form.hpp"
#include "cohex/coherence.hpp"
#include "cohex/protocols.hpp"
#include "cohex/reports.hpp"
#include "cohex/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailed = 1;
constexpr int kExitInvalidArguments = 2;
constexpr int kExitTruncation = 3;
constexpr int kExitIo = 4;

cohex::Protocol parse_protocol(const std::string& name) {
  if (name == "weak") return cohex::Protocol::Weak;
  if (name == "strong") return cohex::Protocol::Strong;
  if (name == "dlevel") return cohex::Protocol::DLevel;
  if (name == "catalytic") return cohex::Protocol::Catalytic;
  throw cohex::InvalidArgumentError("unknown protocol: " + name);
}

bool parse_reservoir(const std::string& name) {
  if (name == "coherent") return false;
  if (name == "squeezed") return true;
  throw cohex::InvalidArgumentError("unknown reservoir kind: " + name);
}

cohex::ComplexMatrix parse_interaction(const std::string& text) {
  cohex::ComplexMatrix u(2, 2);
  if (text == "hadamard") {
    const double s = 1.0 / std::sqrt(2.0);
    u << s, s, s, -s;
    return u;
  }
  if (text == "identity") {
    u = cohex::ComplexMatrix::Identity(2, 2);
    return u;
  }
  if (text.rfind("custom:", 0) == 0) {
    std::stringstream ss(text.substr(7));
    std::vector<double> entries;
    std::string item;
    while (std::getline(ss, item, ',')) entries.push_back(std::stod(item));
    if (entries.size() != 4) {
      throw cohex::InvalidArgumentError("custom interaction needs 4 entries");
    }
    u << entries[0], entries[1], entries[2], entries[3];
    if (cohex::unitarity_defect(u) > 1e-10) {
      throw cohex::InvalidArgumentError("custom interaction is not unitary");
    }
    return u;
  }
  throw cohex::InvalidArgumentError("unknown interaction: " + text);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw cohex::IoError("cannot open output file: " + path);
  return out;
}

int run_verify(double tol, long max_dim) {
  const auto results = cohex::run_verification({tol, max_dim});
  size_t width = 0;
  for (const auto& r : results) width = std::max(width, r.name.size());
  bool all_passed = true;
  for (const auto& r : results) {
    all_passed = all_passed && r.passed;
    std::cout << std::left << std::setw(int(width) + 2) << r.name
              << (r.passed ? "PASS" : "FAIL") << "  " << r.detail << "\n";
  }
  std::cout << (all_passed ? "all checks passed" : "verification FAILED")
            << "\n";
  return all_passed ? kExitOk : kExitVerificationFailed;
}

}  // namespace

int main(int argc, char** argv) {
  std::setlocale(LC_ALL, "C");
  CLI::App app{"coherence extraction protocols on truncated energy ladders"};
  app.require_subcommand(1);

  // verify
  double verify_tol = 1e-10;
  long verify_max_dim = 32;
  auto* verify = app.add_subcommand("verify", "run the invariant checks");
  verify->add_option("--tol", verify_tol, "tolerance for boolean checks");
  verify->add_option("--max-dim", verify_max_dim, "largest ladder dimension");

  // shared simulate/sweep options
  std::string protocol_name = "weak";
  std::string reservoir_name = "coherent";
  double param = 1.0;
  double phase = 0.0;
  long reps = 1;
  long unit_d = 2;
  long truncation = 128;
  double tail_tol = 1e-12;
  std::string interaction = "hadamard";

  auto* simulate = app.add_subcommand("simulate", "run one extraction sequence");
  simulate->add_option("--protocol", protocol_name,
                       "weak|strong|dlevel|catalytic");
  simulate->add_option("--reservoir", reservoir_name, "coherent|squeezed");
  simulate->add_option("--param", param, "coherent amplitude or squeezing r");
  simulate->add_option("--phase", phase, "reservoir phase (radians)");
  simulate->add_option("--reps", reps, "number of extraction steps");
  simulate->add_option("--d", unit_d, "levels of the extraction unit (dlevel)");
  simulate->add_option("--truncation", truncation, "ladder truncation");
  simulate->add_option("--tail-tol", tail_tol, "largest tolerated tail mass");
  simulate->add_option("--u", interaction,
                       "catalytic interaction: hadamard|identity|custom:a,b,c,d");

  double param_min = 0.0;
  double param_max = 1.0;
  long grid_steps = 2;
  std::string out_path;

  auto* sweep = app.add_subcommand("sweep", "parameter sweep to CSV");
  sweep->add_option("--protocol", protocol_name, "weak|strong|catalytic");
  sweep->add_option("--reservoir", reservoir_name, "coherent|squeezed");
  sweep->add_option("--param-min", param_min, "grid start");
  sweep->add_option("--param-max", param_max, "grid end");
  sweep->add_option("--steps", grid_steps, "grid points");
  sweep->add_option("--reps", reps, "extraction steps per grid point");
  sweep->add_option("--phase", phase, "reservoir phase (radians)");
  sweep->add_option("--truncation", truncation, "minimum ladder truncation");
  sweep->add_option("--tail-tol", tail_tol, "largest tolerated tail mass");
  sweep->add_option("--u", interaction, "catalytic interaction");
  sweep->add_option("--out", out_path, "output CSV path")->required();

  auto* compare = app.add_subcommand(
      "compare", "strong vs catalytic cohering power to CSV");
  compare->add_option("--reservoir", reservoir_name, "coherent|squeezed");
  compare->add_option("--param-min", param_min, "grid start");
  compare->add_option("--param-max", param_max, "grid end");
  compare->add_option("--steps", grid_steps, "grid points");
  compare->add_option("--truncation", truncation, "minimum ladder truncation");
  compare->add_option("--tail-tol", tail_tol, "largest tolerated tail mass");
  compare->add_option("--out", out_path, "output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalidArguments;
  }

  try {
    if (verify->parsed()) return run_verify(verify_tol, verify_max_dim);

    if (simulate->parsed()) {
      cohex::SimulateConfig config;
      config.protocol = parse_protocol(protocol_name);
      config.squeezed = parse_reservoir(reservoir_name);
      config.param = param;
      config.phase = phase;
      config.repetitions = reps;
      config.d = unit_d;
      config.truncation = truncation;
      config.tail_tolerance = tail_tol;
      if (config.protocol == cohex::Protocol::Catalytic) {
        config.catalytic_u = parse_interaction(interaction);
      }
      cohex::write_simulate_report(std::cout, config);
      return kExitOk;
    }

    if (sweep->parsed()) {
      cohex::SweepConfig config;
      config.protocol = parse_protocol(protocol_name);
      config.squeezed = parse_reservoir(reservoir_name);
      config.param_min = param_min;
      config.param_max = param_max;
      config.steps = grid_steps;
      config.repetitions = reps;
      config.truncation = truncation;
      config.tail_tolerance = tail_tol;
      config.phase = phase;
      if (config.protocol == cohex::Protocol::Catalytic) {
        config.catalytic_u = parse_interaction(interaction);
      }
      auto out = open_output(out_path);
      cohex::write_sweep_csv(out, config);
      if (!out.good()) throw cohex::IoError("write failed: " + out_path);
      return kExitOk;
    }

    if (compare->parsed()) {
      cohex::CompareConfig config;
      config.squeezed = parse_reservoir(reservoir_name);
      config.param_min = param_min;
      config.param_max = param_max;
      config.steps = grid_steps;
      config.truncation = truncation;
      config.tail_tolerance = tail_tol;
      auto out = open_output(out_path);
      cohex::write_compare_csv(out, config);
      if (!out.good()) throw cohex::IoError("write failed: " + out_path);
      return kExitOk;
    }
  } catch (const cohex::TruncationError& e) {
    std::cerr << "truncation error: " << e.what() << "\n";
    try {
      const long needed = cohex::choose_truncation(
          parse_reservoir(reservoir_name), std::max(param, param_max),
          tail_tol, 2);
      std::cerr << "minimum sufficient truncation: " << needed << "\n";
    } catch (...) {
    }
    return kExitTruncation;
  } catch (const cohex::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const cohex::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidArguments;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidArguments;
  }
  return kExitInvalidArguments;
}

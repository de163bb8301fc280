#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "raman/atom_catalog.hpp"
#include "raman/cli/config.hpp"
#include "raman/cli/output.hpp"

namespace raman::cli {

/// Raised under --strict when the effective two-level description does not apply.
class RegimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum ExitCode { kSuccess = 0, kUsage = 1, kNumerical = 2, kRegime = 3 };

struct Outcome {
  Table table;
  bool regime_failed = false;  // reported by validate, fatal under --strict
};

/// Couplings, detunings and ground splitting for a single Raman pair, either
/// from the atom geometry at --mf or from explicit per-level couplings.
struct PairSystem {
  CouplingVectors couplings;
  DetuningSet detunings;
  double omega10 = 0.0;  // rad/s
  std::string label;
};

AtomSpec resolve_atom(const RunConfig &cfg);
PairSystem resolve_pair(const RunConfig &cfg);

// Each command writes warnings (and nothing else) to diag.
Outcome cmd_table(const RunConfig &cfg, std::ostream &diag);
Outcome cmd_spectrum(const RunConfig &cfg, std::ostream &diag);
Outcome cmd_evolve(const RunConfig &cfg, std::ostream &diag);
Outcome cmd_validate(const RunConfig &cfg, std::ostream &diag);
Outcome cmd_eigs(const RunConfig &cfg, std::ostream &diag);

/// Whole command line: parse, dispatch, print. Returns the process exit code.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace raman::cli

#pragma once

// Named batteries of invariant checks, each against an independent reference
// value, for the verify subcommand.

#include <string>
#include <vector>

namespace szl {

struct Check {
  std::string suite;
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

/// geometry | timefreq | symbolics | quantize | szego | all.
const std::vector<std::string>& verify_suites();

/// Runs one suite. Numerical exceptions inside a check mark it failed with the
/// message as detail. Throws InvalidArgument for an unknown suite name.
std::vector<Check> run_verify(const std::string& suite, unsigned seed = 0);

}  // namespace szl

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "emhd/littlewood_paley.hpp"

namespace emhd {

enum class VerifyLevel { fast, full };

struct VerifyOptions {
  VerifyLevel level = VerifyLevel::fast;
  /// Cutoff used by the Littlewood-Paley checks; altering it is a mutation
  /// probe that the partition check must catch.
  CutoffProfile profile{};
  std::uint64_t seed = 20240611;
};

struct CheckResult {
  std::string suite;
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  double seconds = 0.0;
  bool all_pass() const;
};

/// Runs every module's invariant suite (fast: 16^3 grids; full: adds 32^3
/// cases and convergence-order fits). Each finished check is printed to
/// `progress` when given.
VerifyReport run_verify(const VerifyOptions& options, std::ostream* progress = nullptr);

/// Prints one PASS/FAIL line per check; returns 0 when all pass, 1 otherwise.
int cmd_verify(const VerifyOptions& options, std::ostream& out);

}  // namespace emhd

#pragma once

// The acceptance battery. Shared by the acceptance test binary and the CLI
// `suite` subcommand.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace bergman::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool checks_pass = false;  ///< all numerical checks
  double seconds = 0.0;
  double budget_seconds = 0.0;
  bool pass() const { return checks_pass && seconds < budget_seconds; }
  std::vector<std::string> failures;  ///< one line per failed check
  nlohmann::json data;
};

struct Options {
  std::uint64_t seed = 17;
  std::vector<int> only;  ///< empty runs all eleven
};

inline constexpr int kCriteria = 11;

CriterionResult run_criterion(int id, const Options& opts);
std::vector<CriterionResult> run_all(const Options& opts);

/// "PASS  3 kernel pointwise bounds (0.42 s)" plus failure detail lines.
std::string summary_line(const CriterionResult& r);
nlohmann::json to_json(const CriterionResult& r);

/// The 50 expressions used by the round-trip check.
const std::vector<std::string>& dsl_corpus();

/// sigma_min of T_z on the unweighted space at N = 8, from the closed-form
/// singular values; fixed before any truncation runs.
inline constexpr double kShiftSigmaOracle = 0.70710678118654752440;

}  // namespace bergman::acceptance

#pragma once

// Named verification suites, one per library module. Every check draws its
// own deterministic random stream from the run seed and the check name, runs
// independently of the others (the runner executes them in parallel), and
// reports a single max-residual number: the check passes iff that residual
// does not exceed its tolerance. Structural mismatches (a wrong dimension
// count, a missing spectral gap) surface as residual contributions >= 1 so
// the same pass rule applies everywhere.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace g2kit::verify {

enum class Backend { floating, exact };

struct RunOptions {
  std::uint64_t seed = 7;
  int samples = 100;
  std::optional<double> tol;  // overrides every per-check default tolerance
  Backend backend = Backend::floating;
};

struct CheckResult {
  std::string suite;
  std::string name;
  bool pass = false;
  double max_residual = 0.0;
  double tolerance = 0.0;
  int samples = 0;          // random draws actually used
  std::uint64_t seed = 0;   // run seed (streams derive from it per check)
  std::string backend;      // "exact" or "float" -- what actually ran
  std::string note;         // certified side facts or failure detail
};

// Suites in report order.
[[nodiscard]] std::vector<std::string> suite_names();
[[nodiscard]] bool is_suite_name(const std::string& name);

// Runs one suite, or every suite for "all". Checks execute in parallel;
// the returned report is sorted by (suite, name).
[[nodiscard]] std::vector<CheckResult> run_suites(const std::string& which,
                                                  const RunOptions& opt);

}  // namespace g2kit::verify

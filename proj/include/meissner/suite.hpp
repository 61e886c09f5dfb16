#pragma once

#include <string>
#include <vector>

// The end-to-end check list run by `meissner validate` and by the acceptance
// tests. Checks c01..c10 are the acceptance criteria; x01.. are additional
// oracle checks on the closed forms.

namespace meissner::suite {

struct CheckResult {
  std::string id;
  std::string name;
  bool passed = false;
  double measured = 0.0;   // primary metric
  double threshold = 0.0;  // bound the primary metric is held to
  std::string detail;      // every sub-measurement, human readable
  double seconds = 0.0;
  double time_limit = 0.0;  // seconds; part of the pass condition
};

struct SuiteOptions {
  bool fast = false;  // reduced mesh and wave grids
};

std::vector<std::string> check_ids();
/// Throws std::invalid_argument for an unknown id. Exceptions thrown by the
/// code under test are caught and reported as a failed check.
CheckResult run_check(const std::string& id, const SuiteOptions& opts = {});
std::vector<CheckResult> run_all(const SuiteOptions& opts = {});

}  // namespace meissner::suite

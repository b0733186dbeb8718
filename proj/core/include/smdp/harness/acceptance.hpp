#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace smdp::harness {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

struct AcceptanceOptions {
  std::vector<std::uint64_t> seeds{7, 8, 9, 10, 11};
  /// Empty runs all ten criteria.
  std::vector<int> only;
  std::size_t jobs = 0;
  /// Called after each criterion finishes.
  std::function<void(const CriterionResult&)> on_result;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {});

/// "[PASS] 3 operator-properties (0.02s / 1s): detail"
std::string format_criterion(const CriterionResult& r);

}  // namespace smdp::harness

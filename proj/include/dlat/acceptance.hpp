#pragma once

#include <string>
#include <vector>

namespace dlat {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  /// One line per sub-check, newline separated.
  std::string detail;
  double seconds = 0.0;
};

constexpr int kCriterionCount = 10;

/// Runs acceptance criterion `id` (1..10). Exceptions thrown by the
/// experiment are caught and reported as a failure.
CriterionResult run_criterion(int id);

std::string criterion_name(int id);

}  // namespace dlat

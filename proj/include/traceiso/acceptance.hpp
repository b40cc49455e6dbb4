#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace traceiso {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

struct AcceptanceOptions {
  std::uint64_t seed = 1;
  /// Criteria run concurrently on this many threads.
  int jobs = 1;
  /// Criterion ids to run; empty means all.
  std::vector<int> only;
};

constexpr int kCriterionCount = 13;

CriterionResult run_criterion(int id, std::uint64_t seed);
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options);
/// One line: PASS or FAIL, id, title, detail and wall time.
std::string format_result(const CriterionResult& r);

}  // namespace traceiso

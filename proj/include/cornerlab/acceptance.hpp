#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace cornerlab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct Criterion {
  int id;
  std::string name;
  std::vector<std::string> tags;
  std::function<CriterionResult()> run;
};

/// The ten acceptance checks, in order.
const std::vector<Criterion>& acceptance_criteria();

/// Empty filter selects everything. Otherwise a comma-separated list; a token
/// matches a tag, the criterion number or a substring of its name.
bool criterion_matches(const Criterion& c, const std::string& filter);

/// Runs the selected checks on up to `jobs` threads. Results come back in
/// criterion order; exceptions become failures. Lines are printed to
/// `progress` (if given) as checks finish.
std::vector<CriterionResult> run_acceptance(const std::string& filter, int jobs, std::ostream* progress = nullptr);

/// `PASS [4] name (1.23 s): detail`
std::string format_result(const CriterionResult& r);

}  // namespace cornerlab

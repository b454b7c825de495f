#pragma once

#include <string>
#include <vector>

namespace shadowlab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::vector<std::string> lines;
};

// Acceptance suites. `cli_path` is needed only by the determinism criterion
// (it reruns the command-line tool); pass an empty string to skip spawning
// and evaluate the library-level determinism contract instead.
CriterionResult acceptance_criterion(int id, const std::string& cli_path = "");
std::vector<int> acceptance_ids();

// Named suites for the `verify` command; returns the criterion ids they run.
std::vector<int> suite_criteria(const std::string& suite);
std::vector<std::string> suite_names();

}  // namespace shadowlab

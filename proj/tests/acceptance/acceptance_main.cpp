// Acceptance suite runner: one pass/fail line per criterion check.

#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include "shadowlab/acceptance.hpp"

int main(int argc, char** argv) {
  std::vector<int> ids;
  std::string cli_path;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      ids.push_back(std::atoi(argv[++i]));
    } else if (std::strcmp(argv[i], "--cli") == 0 && i + 1 < argc) {
      cli_path = argv[++i];
    } else {
      std::cerr << "usage: acceptance_tests [--criterion N]... [--cli path]\n";
      return 2;
    }
  }
  if (ids.empty()) ids = shadowlab::acceptance_ids();

  bool all_pass = true;
  for (int id : ids) {
    const shadowlab::CriterionResult r = shadowlab::acceptance_criterion(id, cli_path);
    for (const std::string& line : r.lines) std::cout << "  " << line << "\n";
    std::cout << "criterion " << r.id << " (" << r.name << "): " << (r.pass ? "PASS" : "FAIL")
              << "\n";
    all_pass &= r.pass;
  }
  return all_pass ? 0 : 1;
}

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace specrad {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

// Runs the acceptance criteria, printing one PASS/FAIL line per criterion
// to `log`.  `only` = 0 runs everything, otherwise the single criterion
// with that index.  `threads` = 0 uses all logical cores.
std::vector<CriterionResult> run_acceptance(std::ostream& log, int threads = 0, int only = 0);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace specrad

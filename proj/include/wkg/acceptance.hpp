#pragma once

#include <string>
#include <vector>

namespace wkg {

/// One acceptance criterion outcome. `detail` carries the measured
/// numbers that back the verdict.
struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Execute criterion k (1..11). Criteria 6 and 7 read their campaign
/// configuration from <preset_dir>/kgz-small.cfg and dkg-small.cfg; the
/// rest are self-contained.
CriterionResult run_criterion(int k, const std::string& preset_dir);

std::vector<CriterionResult> run_all_criteria(const std::string& preset_dir,
                                              const std::vector<int>& subset = {});

}  // namespace wkg

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace pfoco {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double budget_s = 0.0;  // 0 = no runtime limit
};

struct AcceptanceOptions {
  std::uint64_t master_seed = 20240601;
  // Restrict to these criterion ids (empty = all). Criteria 8 and 9 reuse
  // the runs of 6 and 7 and execute them on demand.
  std::vector<int> only;
};

// Runs the acceptance suite; `report` is called as each criterion finishes.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const std::function<void(const CriterionResult&)>& report = {});

// "PASS  1 lmo_correctness  0.12s/10s  <detail>"
std::string format_result(const CriterionResult& r);

}  // namespace pfoco

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace rmedge {

struct AcceptanceRow {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;   // measured quantities against their bounds
  double seconds = 0.0;
  double budget = 0.0;  // wall-time limit in seconds, 0 when none
};

struct AcceptanceOptions {
  std::uint64_t seed = 20240917;  // Monte Carlo criterion only
  int threads = 0;                // 0: hardware concurrency
  std::vector<int> only;          // empty: all criteria
};

int acceptance_count();

// Runs the criteria in order; on_row (if set) is called as each one finishes.
std::vector<AcceptanceRow> run_acceptance(const AcceptanceOptions& opt = {},
                                          const std::function<void(const AcceptanceRow&)>& on_row = {});

std::string format_row(const AcceptanceRow& r);

}  // namespace rmedge

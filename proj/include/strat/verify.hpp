#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace strat {

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;
};

/// golden, orthonormality, trace, partitions, fastpath, or all.
std::vector<std::string> suite_names();

/// Runs the named suite; std::invalid_argument for unknown names.
std::vector<CheckResult> run_suite(std::string_view name, unsigned threads = 1);

}  // namespace strat

#pragma once

#include <string>
#include <vector>

#include "dynq/types.hpp"

namespace dynq::shell {

struct CheckRow {
  std::string label;
  std::string expected;
  std::string computed;
  bool ok = false;
};

struct CheckReport {
  std::string name;
  std::vector<CheckRow> rows;
  bool all_ok() const {
    for (const auto& r : rows)
      if (!r.ok) return false;
    return true;
  }
};

std::vector<std::string> reproduce_names();
// Runs the named bundled-example pipeline ("all" runs every one).
std::vector<CheckReport> run_reproduce(const std::string& name);

}  // namespace dynq::shell

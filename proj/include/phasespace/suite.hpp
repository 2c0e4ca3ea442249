#pragma once

// Invariant batteries for every module, run from the CLI.

#include <cstdint>
#include <string>
#include <vector>

namespace phasespace {

struct SuiteCheck {
  std::string module;
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Each check reports its worst observed value against its tolerance. Checks
/// that throw are recorded as failures with value NaN.
std::vector<SuiteCheck> run_property_suite(std::uint64_t seed = 1);

}  // namespace phasespace

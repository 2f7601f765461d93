#pragma once

// Fast self-checks of the library's invariants, run by `combilab verify`.

#include <cstdint>
#include <vector>

#include "combilab/harness.hpp"

namespace combilab {

struct PropertySuiteOptions {
  std::uint64_t seed = 20240601;
  /// Scales corpus sizes down for a quick smoke run.
  bool quick = false;
  int threads = 1;
};

std::vector<CheckOutcome> run_property_suite(const PropertySuiteOptions& options);

}  // namespace combilab

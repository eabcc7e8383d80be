#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dpad/config.hpp"

namespace dpad::testing {

struct SuiteResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// The small end-to-end configuration used by gradient checks
/// (T=16, H=4, K=3, L=2, widths 8).
ModelConfig tiny_config();

/// Oracle-equivalence and gradient-check suites. Prints one line per suite to
/// `log` when non-null.
std::vector<SuiteResult> run_selftest(std::ostream* log);

}  // namespace dpad::testing

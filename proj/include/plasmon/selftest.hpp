#pragma once

#include <string>
#include <vector>

namespace plasmon {

struct SelfTestResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Fast oracle checks of the numerical core (a few seconds on one core).
std::vector<SelfTestResult> run_selftest();

}  // namespace plasmon

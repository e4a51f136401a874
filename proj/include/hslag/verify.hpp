#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hslag/types.hpp"

namespace hslag {

struct CheckResult {
    int index = 0;  // 1..10
    std::string name;
    bool pass = false;
    double seconds = 0.0;
    std::string detail;
};

// Criteria bundles by suite name: blowup {1,2,3}, rank {4,8}, cones {5,9,10},
// wente {6}, uniqueness {7}, all {1..10}. Unknown names throw ConfigError.
std::vector<int> suite_criteria(const std::string& suite);

// Runs one acceptance criterion; never throws (failures and exceptions both
// come back as pass = false with the reason in `detail`).
CheckResult run_criterion(int index, std::uint64_t seed = 1, Exec exec = Exec::Parallel);

std::vector<CheckResult> run_suite(const std::string& suite, std::uint64_t seed = 1,
                                   Exec exec = Exec::Parallel);

}  // namespace hslag

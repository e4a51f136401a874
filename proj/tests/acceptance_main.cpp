// Runs every acceptance criterion and prints one line per check; exits
// nonzero when any of them fails.
#include <cstdio>

#include "hslag/verify.hpp"

int main() {
    const auto indices = hslag::suite_criteria("all");
    int failed = 0;
    for (const int index : indices) {
        const hslag::CheckResult c = hslag::run_criterion(index, 1, hslag::Exec::Parallel);
        if (!c.pass) ++failed;
        std::printf("[%s] %2d %-20s %8.2f s  %s\n", c.pass ? "PASS" : "FAIL", c.index,
                    c.name.c_str(), c.seconds, c.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", indices.size() - failed, indices.size());
    return failed == 0 ? 0 : 1;
}

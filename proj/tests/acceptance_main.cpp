#include <cstdio>

#include "gbmlab/verify.hpp"

int main() {
    bool all_passed = true;
    for (const int id : gbmlab::suite_criteria("all")) {
        const gbmlab::CriterionResult res = gbmlab::run_criterion(id);
        std::printf("criterion %02d %s (%6.2fs) %s\n", res.id, res.passed ? "PASS" : "FAIL",
                    res.seconds, res.name.c_str());
        for (const auto& line : res.details) std::printf("    %s\n", line.c_str());
        std::fflush(stdout);
        all_passed = all_passed && res.passed;
    }
    return all_passed ? 0 : 1;
}

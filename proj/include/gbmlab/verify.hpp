#pragma once

#include <string>
#include <vector>

namespace gbmlab {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    double seconds = 0.0;
    std::vector<std::string> details;  // one "measured vs target" line per check
};

// Criterion ids for a named suite: axioms, oracles, envelopes, all.
std::vector<int> suite_criteria(const std::string& suite);

// Runs one acceptance criterion at its stated scale; never throws (an aborted
// run fails with the exception message in the details).
CriterionResult run_criterion(int id);

}  // namespace gbmlab

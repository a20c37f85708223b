#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gbmlab/config.hpp"

namespace gbmlab {

inline constexpr const char* kVersion = "gbmlab 1.0.0";

struct RunOptions {
    std::optional<std::string> out_dir;  // overrides [experiment] out
    std::optional<std::uint64_t> seed;   // overrides [experiment] seed
};

struct RunResult {
    std::string kind;
    std::string out_dir;
    std::vector<std::string> files;  // names written inside out_dir
};

// Executes the experiment described by the config and writes result.csv,
// plot.svg (when the kind has a natural curve) and manifest.txt. The manifest
// is itself a runnable config carrying the effective seed and output
// directory. Unknown config keys abort before any computation.
RunResult run_experiment(Config cfg, const RunOptions& opts);

// one line per catalog entry: payoffs, coefficients, moduli, drivers
std::string catalog_text();

}  // namespace gbmlab

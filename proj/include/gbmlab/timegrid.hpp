#pragma once

#include <cstddef>

#include "gbmlab/common.hpp"

namespace gbmlab {

// Uniform grid 0 = t_0 < t_1 < ... < t_n = horizon.
struct TimeGrid {
    double horizon = 1.0;
    std::size_t n_steps = 1;

    TimeGrid() = default;
    TimeGrid(double horizon_, std::size_t n_steps_) : horizon(horizon_), n_steps(n_steps_) {
        require(horizon > 0.0 && std::isfinite(horizon), "time grid horizon must be positive");
        require(n_steps >= 1, "time grid needs at least one step");
    }

    double dt() const { return horizon / static_cast<double>(n_steps); }
    double time(std::size_t k) const {
        return k == n_steps ? horizon : static_cast<double>(k) * dt();
    }

    friend bool operator==(const TimeGrid& a, const TimeGrid& b) {
        return a.horizon == b.horizon && a.n_steps == b.n_steps;
    }
};

}  // namespace gbmlab

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "gbmlab/uncertainty.hpp"

namespace gbmlab {

enum class BoundaryMode { linear_extrapolation, clamped };

// Explicit monotone scheme for u_t = G(u_xx), G(a) = (var_hi*a+ - var_lo*a-)/2,
// on [-L, L]. The space grid is x_i = (i - (n_x-1)/2) * dx, bitwise symmetric
// about 0.
struct PdeConfig {
    double half_width = 0.0;
    std::size_t n_x = 0;
    std::size_t n_t = 0;
    double var_lo = 0.0;
    double var_hi = 0.0;
    BoundaryMode boundary = BoundaryMode::linear_extrapolation;

    double dx() const { return 2.0 * half_width / static_cast<double>(n_x - 1); }
    double x(std::size_t i) const {
        return (static_cast<double>(i) - static_cast<double>(n_x - 1) / 2.0) * dx();
    }
};

// Defaults: half_width = 8*sqrt(var_hi*t_final); n_t = 0 picks the smallest
// step count satisfying the monotonicity bound dt*var_hi/dx^2 <= 1.
PdeConfig make_pde_config(const UncertaintySet& uset, double t_final, std::size_t n_x = 401,
                          std::size_t n_t = 0, double half_width = 0.0,
                          BoundaryMode boundary = BoundaryMode::linear_extrapolation);

// Throws ValidationError naming the maximal admissible dt when the
// monotonicity bound fails.
void check_monotone_step(const PdeConfig& cfg, double t_final);

std::vector<double> sample_on_grid(const PdeConfig& cfg, const std::function<double(double)>& phi);

// Returns u(t_final, .) from u(0, .) = phi (one value per grid point).
std::vector<double> solve_gheat(const PdeConfig& cfg, std::vector<double> phi, double t_final);

// u(t, 0); the distribution of the G-normal evaluated on phi. n_x must be odd
// so that x = 0 is a grid point.
double gnormal_expectation(const UncertaintySet& uset, const std::function<double(double)>& phi,
                           double t, std::size_t n_x = 401);

}  // namespace gbmlab

#include "gbmlab/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "gbmlab/rng.hpp"

namespace gbmlab {

UncertaintySet::UncertaintySet(std::size_t dimension, std::vector<Matd> gammas)
    : d_(dimension), gammas_(std::move(gammas)) {
    require(d_ >= 1, "uncertainty set dimension must be >= 1");
    require(!gammas_.empty(), "uncertainty set needs at least one gamma");
    sigmas_.reserve(gammas_.size());
    for (const Matd& g : gammas_) {
        require(g.rows() == d_ && g.cols() == d_, "gamma has wrong dimensions");
        require(g.all_finite(), "gamma has non-finite entries");
        sigmas_.push_back(g.aat());
    }
}

UncertaintySet UncertaintySet::interval(double var_lo, double var_hi, std::size_t interior) {
    require(std::isfinite(var_lo) && std::isfinite(var_hi), "variance bounds must be finite");
    require(0.0 <= var_lo && var_lo <= var_hi, "need 0 <= var_lo <= var_hi");
    std::vector<double> vars;
    vars.push_back(var_lo);
    for (std::size_t i = 1; i <= interior; ++i) {
        const double frac = static_cast<double>(i) / static_cast<double>(interior + 1);
        vars.push_back(var_lo + frac * (var_hi - var_lo));
    }
    vars.push_back(var_hi);
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    std::vector<Matd> gammas;
    gammas.reserve(vars.size());
    for (double v : vars) gammas.push_back(Matd(1, 1, {std::sqrt(v)}));
    return UncertaintySet(1, std::move(gammas));
}

void validate_control(const UncertaintySet& uset, const ScenarioControl& control) {
    require(control.values.size() == control.grid.n_steps,
            "scenario control needs one gamma index per step");
    for (std::uint32_t v : control.values)
        require(v < uset.size(), "scenario control references a gamma outside the set");
}

ScenarioControl constant_control(const UncertaintySet& uset, const TimeGrid& grid,
                                 std::uint32_t gamma_index) {
    require(gamma_index < uset.size(), "gamma index out of range");
    ScenarioControl c;
    c.grid = grid;
    c.values.assign(grid.n_steps, gamma_index);
    return c;
}

double evaluate_g(const UncertaintySet& uset, const Matd& a) {
    require(a.rows() == uset.dimension() && a.cols() == uset.dimension(),
            "evaluate_g: matrix dimension mismatch");
    require(a.all_finite(), "evaluate_g: non-finite entries");
    require(a.is_symmetric(1e-12), "evaluate_g: matrix must be symmetric");
    double best = -std::numeric_limits<double>::infinity();
    for (const Matd& s : uset.covariances()) best = std::fmax(best, trace_product(s, a));
    return 0.5 * best;
}

double evaluate_g(const UncertaintySet& uset, double a) {
    return evaluate_g(uset, Matd(1, 1, {a}));
}

std::pair<double, double> sigma_bounds(const UncertaintySet& uset, const Vecd& a) {
    require(a.size() == uset.dimension(), "sigma_bounds: vector dimension mismatch");
    for (double x : a) require(std::isfinite(x), "sigma_bounds: non-finite entries");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const Matd& s : uset.covariances()) {
        const double q = quad_form(s, a);  // tr(γγᵀ aaᵀ) = aᵀγγᵀa
        lo = std::fmin(lo, q);
        hi = std::fmax(hi, q);
    }
    return {lo, hi};
}

std::vector<ScenarioControl> enumerate_controls(const UncertaintySet& uset, const TimeGrid& grid,
                                                std::size_t cap, std::uint64_t seed) {
    require(cap >= 1, "enumerate_controls: cap must be >= 1");
    const std::size_t n_steps = grid.n_steps;
    const std::size_t m = uset.size();

    // total = m^n_steps, saturating at cap+1 to detect overflow
    std::size_t total = 1;
    for (std::size_t k = 0; k < n_steps; ++k) {
        if (total > (cap / m) + 1) {
            total = cap + 1;
            break;
        }
        total *= m;
    }

    std::vector<ScenarioControl> out;
    if (total <= cap) {
        out.reserve(total);
        std::vector<std::uint32_t> values(n_steps, 0);
        for (;;) {
            out.push_back({grid, values, ControlKind::open_loop});
            std::size_t k = 0;
            while (k < n_steps && ++values[k] == m) values[k++] = 0;
            if (k == n_steps) break;
        }
        return out;
    }

    std::set<std::vector<std::uint32_t>> seen;
    out.reserve(cap);
    for (std::uint32_t g = 0; g < m && out.size() < cap; ++g) {
        std::vector<std::uint32_t> values(n_steps, g);
        seen.insert(values);
        out.push_back({grid, std::move(values), ControlKind::open_loop});
    }
    std::uint64_t draw = 0;
    while (out.size() < cap) {
        std::vector<std::uint32_t> values(n_steps);
        for (std::size_t k = 0; k < n_steps; ++k) {
            const auto r = Philox4x32::generate(
                {static_cast<std::uint32_t>(draw), static_cast<std::uint32_t>(draw >> 32),
                 static_cast<std::uint32_t>(k), 0x1c0de5u},
                {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
            values[k] = static_cast<std::uint32_t>(r[0] % m);
        }
        ++draw;
        if (seen.insert(values).second)
            out.push_back({grid, std::move(values), ControlKind::open_loop});
    }
    return out;
}

std::vector<ScenarioControl> enumerate_controls(const UncertaintySet& uset, std::size_t n_steps,
                                                std::size_t cap, std::uint64_t seed) {
    return enumerate_controls(uset, TimeGrid(1.0, n_steps), cap, seed);
}

}  // namespace gbmlab

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "gbmlab/linalg.hpp"
#include "gbmlab/timegrid.hpp"

namespace gbmlab {

// Finite volatility alphabet Γ of d×d matrices. The induced covariance set is
// Σ = {γγᵀ : γ ∈ Γ} and the sublinear generator is G(A) = ½ max_γ tr(γγᵀA).
class UncertaintySet {
public:
    UncertaintySet(std::size_t dimension, std::vector<Matd> gammas);

    // d=1 alphabet from an interval of variances [var_lo, var_hi]; the two
    // endpoints plus `interior` evenly spaced interior variances. Coinciding
    // endpoints collapse to a singleton.
    static UncertaintySet interval(double var_lo, double var_hi, std::size_t interior = 0);

    std::size_t dimension() const { return d_; }
    std::size_t size() const { return gammas_.size(); }
    const std::vector<Matd>& gammas() const { return gammas_; }
    const Matd& gamma(std::size_t i) const { return gammas_[i]; }
    const std::vector<Matd>& covariances() const { return sigmas_; }  // γγᵀ, same order
    bool is_singleton() const { return gammas_.size() == 1; }

private:
    std::size_t d_;
    std::vector<Matd> gammas_;
    std::vector<Matd> sigmas_;
};

enum class ControlKind { open_loop, feedback };

// Piecewise-constant volatility path: gamma_index[k] applies on [t_k, t_{k+1}).
// One control picks out one classical scenario measure.
struct ScenarioControl {
    TimeGrid grid;
    std::vector<std::uint32_t> values;
    ControlKind kind = ControlKind::open_loop;
};

void validate_control(const UncertaintySet& uset, const ScenarioControl& control);
ScenarioControl constant_control(const UncertaintySet& uset, const TimeGrid& grid,
                                 std::uint32_t gamma_index);

double evaluate_g(const UncertaintySet& uset, const Matd& a);
double evaluate_g(const UncertaintySet& uset, double a);  // d = 1 shorthand

// (min, max) over γ of tr(γγᵀ aaᵀ) = ‖γᵀa‖²; the variance band of a·B.
std::pair<double, double> sigma_bounds(const UncertaintySet& uset, const Vecd& a);

class GFunction {
public:
    explicit GFunction(UncertaintySet uset) : uset_(std::move(uset)) {}
    double operator()(const Matd& a) const { return evaluate_g(uset_, a); }
    double operator()(double a) const { return evaluate_g(uset_, a); }
    const UncertaintySet& uset() const { return uset_; }

private:
    UncertaintySet uset_;
};

// Open-loop controls on `grid`. Full Cartesian product when |Γ|^n_steps ≤ cap;
// otherwise a seeded sample of size cap that always leads with the constant
// controls. Deterministic for fixed arguments.
std::vector<ScenarioControl> enumerate_controls(const UncertaintySet& uset, const TimeGrid& grid,
                                                std::size_t cap, std::uint64_t seed = 2718);
std::vector<ScenarioControl> enumerate_controls(const UncertaintySet& uset, std::size_t n_steps,
                                                std::size_t cap, std::uint64_t seed = 2718);

}  // namespace gbmlab

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "gbmlab/moduli.hpp"
#include "gbmlab/paths.hpp"

namespace gbmlab {

using PathPayoff = std::function<double(const PathBundle&)>;

enum class EstimateMode { open_loop_mc, lattice_dp };

struct UpperExpectationEstimate {
    double value = 0.0;
    double std_error = 0.0;  // Monte Carlo standard error of the maximizing scenario's mean
    ScenarioControl argmax_scenario;
    std::size_t n_paths = 0;
    std::size_t n_scenarios = 0;
    EstimateMode mode = EstimateMode::open_loop_mc;
};

// Per-scenario sample means of one payoff under common random numbers; the
// sup over rows is the open-loop estimate of the upper expectation.
struct SampleTable {
    std::vector<ScenarioControl> controls;
    std::vector<double> means;
    std::vector<double> variances;  // unbiased per-scenario sample variance
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;

    std::size_t argmax() const;
    double sup() const;
    double std_error(std::size_t scenario) const;
};

SampleTable scenario_means(const PathPayoff& payoff, const UncertaintySet& uset,
                           const std::vector<ScenarioControl>& controls, std::size_t n_paths,
                           std::uint64_t seed);

// Open-loop Monte Carlo estimate: evaluates every control with the same
// underlying noise and returns the maximal sample mean. A lower-bound
// estimator of the true supremum over adapted controls.
UpperExpectationEstimate upper_expectation_mc(const PathPayoff& payoff, const UncertaintySet& uset,
                                              const std::vector<ScenarioControl>& controls,
                                              std::size_t n_paths, std::uint64_t seed);
UpperExpectationEstimate upper_expectation_mc(const PathPayoff& payoff, const UncertaintySet& uset,
                                              const TimeGrid& grid, std::size_t n_paths,
                                              std::size_t control_cap, std::uint64_t seed);

// Slack values for the sublinear-expectation axioms evaluated on the
// common-random-number estimator; every slack is >= 0 up to float rounding.
struct AxiomReport {
    double monotonicity_slack = 0.0;   // sup(X) - sup(Y), meaningful when X >= Y pathwise
    double constant_slack = 0.0;       // -|sup(c) - c|
    double subadditivity_slack = 0.0;  // sup(X-Y) - (sup(X) - sup(Y))
    double homogeneity_slack = 0.0;    // -|sup(lambda X) - lambda sup(X)|
    double domination_margin = 0.0;    // min sampled X-Y; NaN for the table entry point
    double worst_slack() const;
};

// Table entry point: the five estimator outputs must share scenario set,
// path count and seed, otherwise the axioms have no reason to hold.
AxiomReport check_sublinearity(const SampleTable& x, const SampleTable& y,
                               const SampleTable& x_minus_y, const SampleTable& lambda_x,
                               const SampleTable& constant, double lambda, double c);

// Convenience entry point: evaluates X, Y, X-Y, lambda X and the constant c in
// one fused pass per scenario, and records the pathwise domination margin.
AxiomReport check_sublinearity(const PathPayoff& x, const PathPayoff& y, double lambda, double c,
                               const UncertaintySet& uset,
                               const std::vector<ScenarioControl>& controls, std::size_t n_paths,
                               std::uint64_t seed);

struct JensenReport {
    bool checked = false;  // false when rho is not declared concave; check skipped
    double lhs = 0.0;      // rho(sup means of X)
    double rhs = 0.0;      // sup means of rho(X)
    double slack() const { return lhs - rhs; }
};

// rho(E^[X]) >= E^[rho(X)] for concave increasing rho and X >= 0, exact on the
// shared-noise estimator by the finite-sample Jensen inequality.
JensenReport check_jensen_concave(const PathPayoff& x, const Modulus& rho,
                                  const UncertaintySet& uset,
                                  const std::vector<ScenarioControl>& controls,
                                  std::size_t n_paths, std::uint64_t seed);

// Recombining trinomial lattice for d=1: step k holds 2k+1 nodes with states
// (node - k) * dx, dx = sqrt(var_hi * dt); per-gamma branch probabilities
// {q/2, 1-q, q/2} with q = gamma^2/var_hi match mean 0 and variance
// gamma^2 * dt. gamma = 0 degenerates to the stay-put branch.
struct Lattice {
    TimeGrid grid;
    double dx = 0.0;
    double var_hi = 0.0;
    std::vector<double> variances;  // per-gamma

    std::size_t n_nodes(std::size_t step) const { return 2 * step + 1; }
    double state(std::size_t step, std::size_t node) const {
        return (static_cast<double>(node) - static_cast<double>(step)) * dx;
    }
};

Lattice make_lattice(const UncertaintySet& uset, const TimeGrid& grid);

// Backward recursion value(k) = max over gamma of the branch average of
// value(k+1); returns the full surface, slice k holding 2k+1 node values.
// The root value estimates E^[terminal(B_T)].
std::vector<std::vector<double>> conditional_g_expectation(const Lattice& lattice,
                                                           std::vector<double> terminal);

UpperExpectationEstimate upper_expectation_lattice(const std::function<double(double)>& phi,
                                                   const UncertaintySet& uset,
                                                   const TimeGrid& grid);

}  // namespace gbmlab

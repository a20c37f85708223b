#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "gbmlab/coefficients.hpp"
#include "gbmlab/expectation.hpp"
#include "gbmlab/moduli.hpp"
#include "gbmlab/paths.hpp"

namespace gbmlab {

// Forward problem dX = b dt + Σ h_ij d<B^i,B^j> + Σ_j σ_j dB^j, X_0 = x0.
struct SdeProblem {
    CoefficientSet coefficients;
    Vecd x0;
    TimeGrid grid;
    UncertaintySet uncertainty;
    ModulusRegime regime = ModulusRegime::h1h2;
};

// Dimension consistency plus regime agreement with the coefficient
// declarations.
void validate_problem(const SdeProblem& problem);

// One scenario path of the Euler discretization, node k holding X_{t_k}:
// X_{k+1} = ((X_k + b dt) + Σ h_ij qv_ij) + Σ_j σ_j ΔB_j, with the canonical
// increments ΔB = γ_k w_k drawn exactly as in simulate_path.
std::vector<Vecd> euler_solve(const SdeProblem& problem, const ScenarioControl& scenario,
                              std::uint64_t seed, std::uint64_t path_index = 0);

// Sampling configuration shared by the iterative solvers.
struct McConfig {
    std::size_t n_paths = 2000;
    std::size_t control_cap = 8;
    std::uint64_t seed = 1;
    // stop once the regime error metric drops below; 0 runs all iterations
    double tolerance = 0.0;
    // iterate ensembles above this byte budget are rejected up front
    std::size_t memory_budget = std::size_t(2) << 30;
};

// One iterate of the Picard ensemble, flat over (scenario, path, node, dim).
struct IterateStore {
    std::size_t n_scenarios = 0;
    std::size_t n_paths = 0;
    std::size_t n_nodes = 0;
    std::size_t dim = 0;
    std::vector<double> data;

    std::size_t offset(std::size_t s, std::size_t p, std::size_t k) const {
        return ((s * n_paths + p) * n_nodes + k) * dim;
    }
    double* node(std::size_t s, std::size_t p, std::size_t k) { return data.data() + offset(s, p, k); }
    const double* node(std::size_t s, std::size_t p, std::size_t k) const {
        return data.data() + offset(s, p, k);
    }
};

struct PicardTrace {
    ModulusRegime regime = ModulusRegime::h1h2;
    // per transition m -> m+1: sup over nodes of the scenario-sup sample mean
    // of |X^{m+1}-X^m|^2 and |X^{m+1}-X^m|; both metrics recorded on every run
    std::vector<double> errors_sq;
    std::vector<double> errors_abs;
    // per transition, per node, in the regime metric
    std::vector<std::vector<double>> node_errors;
    IterateStore solution;  // final iterate
    std::vector<ScenarioControl> controls;
    bool converged = false;
    // two-stage bookkeeping: realized truncation caps and the sup-node
    // first-moment gap between the final iterates of consecutive caps
    std::vector<double> caps;
    std::vector<double> cap_differences;

    // regime metric: squared for h1h2, first-moment for h1ph2p
    const std::vector<double>& errors() const {
        return regime == ModulusRegime::h1h2 ? errors_sq : errors_abs;
    }
};

// Picard iteration with all coefficients evaluated at the previous iterate;
// the same noise drives every iteration. X^0 = x0.
PicardTrace picard_solve_h2(const SdeProblem& problem, std::size_t n_iter, const McConfig& mc);

// Two-stage scheme: b, h frozen at the outer iterate while the diffusion
// argument is solved by an inner Picard loop (inner tolerance = outer / 10),
// on coefficients truncated at each cap of the escalation schedule. Requires
// a divergent Osgood integral for rho1 + rho3 and mc.tolerance > 0. The
// returned trace is the run at the final cap. Default schedule:
// {4, 16, 64, 256} scaled by max(1, |x0|_inf).
PicardTrace picard_solve_h2p(const SdeProblem& problem, std::size_t n_iter_outer,
                             std::size_t n_iter_inner, const McConfig& mc,
                             std::vector<double> cap_schedule = {});

// Gap between two Euler ensembles started at x1 and x2 on identical noise.
struct StabilityReport {
    std::vector<double> gap_sq;   // per node: scenario-sup mean |ΔX|^2
    std::vector<double> gap_abs;  // per node: scenario-sup mean |ΔX|
    std::vector<double> u_hat;    // running sup of gap_sq
    double final_u_hat = 0.0;
};

StabilityReport stability_experiment(const SdeProblem& problem, const Vecd& x1, const Vecd& x2,
                                     const McConfig& mc);

// Discrete iterated envelope env_{m+1}(t_k) = c · Σ_{l=1..k} ρ(env_m(t_l)) Δt
// with env_0 = e0 (right-point sums, conservative for increasing profiles);
// ρ arguments saturate at its evaluation cap.
std::vector<std::vector<double>> iterated_picard_envelope(const Modulus& rho,
                                                          std::vector<double> e0, double dt,
                                                          double c, std::size_t n_m);

// Backward problem Y_t = E^[ξ(B_T) + ∫_t^T f(s,Y_s)ds + ∫_t^T g(s,Y_s)d<B>_s | F_t]
// on the d = 1 lattice.
struct BsdeProblem {
    std::function<double(double)> xi;
    std::function<double(double, double)> f;  // f(s, y)
    std::function<double(double, double)> g;  // g(s, y)
    // declared growth |f(s,y)| + |g(s,y)| <= beta + c_growth |y|, spot-checked
    double c_growth = 0.0;
    double beta = 0.0;
    Modulus rho = Modulus::linear(1.0);  // driver continuity modulus
    TimeGrid grid;
    UncertaintySet uncertainty;
};

void validate_bsde_problem(const BsdeProblem& problem);

struct BsdeSolution {
    std::vector<std::vector<double>> y;  // per step, per lattice node
    std::vector<double> stage_changes;   // sup-node |Y^{m+1}-Y^m| per stage
    std::size_t stages = 0;
    bool converged = false;
};

// Picard in the driver argument: each stage runs backward DP where the per-γ
// maximization jointly covers the branch average and the d<B> weight γ²Δt,
// with f, g evaluated at the previous stage's Y. Y^0 = 0.
BsdeSolution bsde_solve(const BsdeProblem& problem, std::size_t n_iter, double tolerance = 1e-10);

}  // namespace gbmlab

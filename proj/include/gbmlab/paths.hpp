#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "gbmlab/timegrid.hpp"
#include "gbmlab/uncertainty.hpp"

namespace gbmlab {

// One sampled trajectory of the canonical process under one scenario control.
// Quadratic variation is analytic in the control: each increment is γ_kγ_kᵀΔt,
// so qv_path carries no randomness at all.
struct PathBundle {
    TimeGrid grid;
    ScenarioControl scenario;
    std::size_t d = 1;
    std::uint64_t seed = 0;
    std::uint64_t path_index = 0;
    std::vector<Vecd> w;        // n_steps entries; component c ~ N(0, Δt)
    std::vector<Vecd> b_path;   // n_steps + 1 entries; B_0 = 0
    std::vector<Matd> qv_path;  // n_steps + 1 entries; ⟨Bⁱ,Bʲ⟩ at nodes

    double b_dir(std::size_t k, const Vecd& a) const;   // a·B_{t_k}
    double qv_dir(std::size_t k, const Vecd& a) const;  // aᵀ⟨B⟩_{t_k}a
};

PathBundle simulate_path(const UncertaintySet& uset, const ScenarioControl& scenario,
                         const TimeGrid& grid, std::uint64_t seed, std::uint64_t path_index = 0);

// Left-point sum Σ_k η_k (B^a_{t_{k+1}} − B^a_{t_k}); integrand has one value
// per node 0..n_steps−1.
double ito_integral(const std::vector<double>& integrand, const PathBundle& bundle,
                    const Vecd& direction);

// Left-point Stieltjes sum against the exact qv increments of ⟨Bⁱ,Bʲ⟩.
double qv_integral(const std::vector<double>& integrand, const PathBundle& bundle, std::size_t i,
                   std::size_t j);

// C² test function on ℝⁿ.
struct ItoTestFunction {
    std::function<double(const Vecd&)> value;
    std::function<Vecd(const Vecd&)> gradient;
    std::function<Matd(const Vecd&)> hessian;
};

// Coefficients of X_t = x0 + ∫α ds + Σ∫η_ij d⟨Bⁱ,Bʲ⟩ + Σ∫β_j dB^j, evaluated
// at (node index, current state); each returns an ℝⁿ vector.
struct ProcessCoefficients {
    std::size_t n = 1;
    Vecd x0;
    std::function<Vecd(std::size_t, const Vecd&)> alpha;
    std::function<Vecd(std::size_t, const Vecd&, std::size_t, std::size_t)> eta;
    std::function<Vecd(std::size_t, const Vecd&, std::size_t)> beta;
};

// |Φ(X_T) − Φ(X_0) − discretized right-hand side|; the right-hand side carries
// the first-order dB, ds, d⟨B⟩ terms and the ½∂²Φ ββᵀ d⟨Bⁱ,Bʲ⟩ correction.
double ito_formula_residual(const PathBundle& bundle, const ItoTestFunction& phi,
                            const ProcessCoefficients& coeffs);

// Discretized M^p norm: (1/T · Σ_k Ē[|η_{t_k}|^p] Δt)^{1/p}, left-point in k.
// per_node_samples[k] holds the ensemble of η_{t_k} values; upper_mean turns
// one such ensemble into an upper-expectation estimate.
double mg_norm(const std::vector<std::vector<double>>& per_node_samples, double p, double horizon,
               const std::function<double(const std::vector<double>&)>& upper_mean);

}  // namespace gbmlab

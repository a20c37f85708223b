#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "gbmlab/linalg.hpp"
#include "gbmlab/moduli.hpp"

namespace gbmlab {

// Which continuity hypothesis the coefficients declare: a single squared
// modulus ρ shared by all coefficients (sum-of-squares form), or the split
// form with ρ₁ for b/h and ρ₂ (squared argument) for σ plus the derived
// ρ₃(r) = ρ₂(r²)/r.
enum class ModulusRegime { h1h2, h1ph2p };

// b, h_ij, σ_j : [0,T] × ℝⁿ → ℝⁿ with declared growth and continuity data.
struct CoefficientSet {
    std::size_t n = 1;  // state dimension
    std::size_t d = 1;  // noise dimension
    std::function<Vecd(double, const Vecd&)> b;
    std::function<Vecd(double, const Vecd&, std::size_t, std::size_t)> h;
    std::function<Vecd(double, const Vecd&, std::size_t)> sigma;

    // growth declaration: |b|² + Σ|h_ij|² + Σ|σ_j|² ≤ β₁² + β₂²|x|²
    double beta1 = 0.0;
    double beta2 = 0.0;

    ModulusRegime regime = ModulusRegime::h1h2;
    double beta = 1.0;  // modulus scale in the continuity declaration
    std::optional<Modulus> rho;                // regime h1h2
    std::optional<Modulus> rho1, rho2, rho3;   // regime h1ph2p

    std::string tag;  // catalog name for reports
};

void validate_coefficients(const CoefficientSet& coeffs);

// Evaluation wrappers that reject NaN/∞ results with the offending (t, x).
Vecd eval_b(const CoefficientSet& coeffs, double t, const Vecd& x);
Vecd eval_h(const CoefficientSet& coeffs, double t, const Vecd& x, std::size_t i, std::size_t j);
Vecd eval_sigma(const CoefficientSet& coeffs, double t, const Vecd& x, std::size_t j);

// Radial clipping to norm ≤ n_cap of each coefficient block (b as a vector,
// each h_ij and σ_j separately); modulus declarations carry over.
CoefficientSet truncate_coefficients(const CoefficientSet& coeffs, double n_cap);

// Sampled verification of the declared growth bound over random (t, x);
// throws ValidationError naming the first violating sample.
void spot_check_growth(const CoefficientSet& coeffs, double horizon, double x_radius,
                       std::size_t samples, std::uint64_t seed);

// Sampled verification of the declared continuity bound on random pairs
// (t, x₁, x₂).
void spot_check_modulus(const CoefficientSet& coeffs, double horizon, double x_radius,
                        std::size_t samples, std::uint64_t seed);

// Derived ρ₃(r) = ρ₂(r²)/r for the h1ph2p regime.
Modulus derive_rho3(const Modulus& rho2);

// Catalog for config files: name(args) with scalar arguments, d = n = 1.
//   drift:  zero | linear_drift(k) | affine_drift(k,c) | rlogr_drift(scale)
//   sigma:  zero | constant_sigma(s) | lipschitz_sigma(k,c)
CoefficientSet make_coefficients_1d(const std::string& drift_spec, const std::string& sigma_spec);

}  // namespace gbmlab

#pragma once

#include <optional>
#include <vector>

#include "gbmlab/moduli.hpp"

namespace gbmlab {

struct BihariBound {
    double value = 0.0;
    bool overflow = false;  // v(a) + ∫β exceeded the range of v on the working domain
};

// The comparison bound of the nonlinear Gronwall lemma: from
// u(t) ≤ a + ∫₀ᵗ β(s)ρ(u(s))ds conclude u(t) ≤ v⁻¹(v(a) + ∫₀ᵗ β(s)ds) with
// v(x) = ∫_{t₀}^x ds/ρ(s). The bound does not depend on the anchor t₀.
// β is piecewise constant and nonnegative on [0, horizon].
class BihariEnvelope {
public:
    BihariEnvelope(Modulus rho, std::vector<double> beta_times, std::vector<double> beta_values,
                   std::optional<double> anchor = std::nullopt);
    BihariEnvelope(Modulus rho, double beta_const, double horizon,
                   std::optional<double> anchor = std::nullopt);

    double anchor() const { return t0_; }
    double horizon() const { return beta_times_.back(); }
    const Modulus& rho() const { return rho_; }

    double beta_integral(double t) const;  // ∫₀ᵗ β, exact for the step function
    double v(double x) const;              // x in (0, eval_max]
    double v_inverse(double y) const;      // clamped into (0, eval_max]

private:
    Modulus rho_;
    double t0_;
    std::vector<double> beta_times_;   // ascending, beta_times_[0] == 0
    std::vector<double> beta_values_;  // one per interval
    std::vector<double> beta_cum_;     // cumulative ∫β at beta_times_
};

// v⁻¹(v(a) + ∫₀ᵗ β); a = 0 returns exactly 0. Overflow clips to the working
// domain cap and flags it.
BihariBound bihari_bound(const BihariEnvelope& env, double a, double t);

}  // namespace gbmlab

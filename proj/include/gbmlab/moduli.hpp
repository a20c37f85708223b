#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "gbmlab/common.hpp"

namespace gbmlab {

enum class OsgoodClass { divergent, convergent, undecided };

std::string osgood_name(OsgoodClass c);

// Continuity modulus ρ on (0, eval_max]. valid_max bounds the range where the
// modulus properties (positive, increasing, optionally concave) are asserted;
// evaluation may extend further so that v(t) = ∫ ds/ρ(s) stays computable
// wherever 1/ρ remains positive (rlogr-type formulas peak inside their
// positive domain).
class Modulus {
public:
    Modulus(std::string name, std::function<double(double)> rho, double valid_max,
            double eval_max, bool concave, bool increasing, double probe_floor = 0.0);

    double operator()(double r) const;

    const std::string& name() const { return name_; }
    double valid_max() const { return valid_max_; }
    double eval_max() const { return eval_max_; }
    double probe_floor() const { return probe_floor_; }  // > 0 for table data
    bool concave() const { return concave_; }
    bool increasing() const { return increasing_; }
    OsgoodClass osgood() const { return osgood_; }

    static Modulus linear(double k);
    static Modulus sqrt_modulus();
    static Modulus rlogr();       // r·ln(1/r); modulus valid up to e^{-1}
    static Modulus rlogr_sqrt();  // r·(ln(1/r))^{1/2}; valid up to e^{-1/2}
    // piecewise-linear table of (r, ρ(r)), r ascending positive; extended
    // linearly to the origin below the first knot
    static Modulus from_table(std::string name, std::vector<std::pair<double, double>> points);

private:
    friend OsgoodClass osgood_test(const Modulus&, std::vector<double>);
    std::string name_;
    std::function<double(double)> rho_;
    double valid_max_;
    double eval_max_;
    double probe_floor_;
    bool concave_;
    bool increasing_;
    OsgoodClass osgood_ = OsgoodClass::undecided;
};

// ∫_{r_lo}^{r_hi} ds/ρ(s), 0 < r_lo ≤ r_hi ≤ eval_max; log-substituted
// composite Gauss-Legendre, accurate near the singular origin.
double inverse_rho_integral(const Modulus& rho, double r_lo, double r_hi);

// Numerical Osgood test: does ∫_r^{r_ref} ds/ρ(s) diverge as r → 0?
// Extrapolates the per-decade increments of the integral; never probes below
// the modulus's data floor, returning `undecided` when the evidence is thin.
OsgoodClass osgood_test(const Modulus& rho, std::vector<double> r_sequence = {});

}  // namespace gbmlab

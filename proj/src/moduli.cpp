#include "gbmlab/moduli.hpp"

#include <algorithm>
#include <cmath>

#include "gbmlab/quadrature.hpp"

namespace gbmlab {

namespace {

constexpr double kInvE = 0.36787944117144233;  // e^{-1}

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
    std::vector<double> out(count);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (std::size_t i = 0; i < count; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(count - 1);
        out[i] = std::exp(llo + f * (lhi - llo));
    }
    return out;
}

}  // namespace

std::string osgood_name(OsgoodClass c) {
    switch (c) {
        case OsgoodClass::divergent: return "divergent";
        case OsgoodClass::convergent: return "convergent";
        default: return "undecided";
    }
}

Modulus::Modulus(std::string name, std::function<double(double)> rho, double valid_max,
                 double eval_max, bool concave, bool increasing, double probe_floor)
    : name_(std::move(name)),
      rho_(std::move(rho)),
      valid_max_(valid_max),
      eval_max_(eval_max),
      probe_floor_(probe_floor),
      concave_(concave),
      increasing_(increasing) {
    require(static_cast<bool>(rho_), "modulus needs an evaluation function");
    require(valid_max_ > 0.0 && eval_max_ >= valid_max_, "modulus domain bounds malformed");
    require(probe_floor_ >= 0.0 && probe_floor_ < valid_max_, "modulus probe floor malformed");

    // sampled property checks on the validity domain
    const double lo = std::max(probe_floor_ > 0.0 ? probe_floor_ : 1e-13, 1e-13);
    const auto samples = log_spaced(lo, valid_max_, 48);
    double prev = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double r = samples[i];
        const double y = rho_(r);
        require(std::isfinite(y) && y > 0.0, "modulus must be positive on (0, valid_max]");
        if (increasing_)
            require(y >= prev * (1.0 - 1e-9), "modulus declared increasing but is not");
        prev = y;
    }
    if (probe_floor_ == 0.0)
        require(rho_(1e-13) <= 1e-2, "modulus must vanish at 0+");
    if (concave_) {
        for (std::size_t i = 0; i + 2 < samples.size(); i += 2) {
            const double r1 = samples[i], r2 = samples[i + 2];
            const double mid = 0.5 * (r1 + r2);
            require(rho_(mid) >= 0.5 * (rho_(r1) + rho_(r2)) - 1e-9 * rho_(mid) - 1e-300,
                    "modulus declared concave but is not");
        }
    }
    osgood_ = osgood_test(*this, {});
}

double Modulus::operator()(double r) const {
    require(std::isfinite(r) && r >= 0.0, "modulus argument must be finite and >= 0");
    if (r == 0.0) return 0.0;
    require(r <= eval_max_ * (1.0 + 1e-12), "modulus argument beyond evaluation domain");
    return rho_(std::min(r, eval_max_));
}

Modulus Modulus::linear(double k) {
    require(k > 0.0 && std::isfinite(k), "linear modulus needs k > 0");
    return Modulus("linear", [k](double r) { return k * r; }, 1.0, 1e12, true, true);
}

Modulus Modulus::sqrt_modulus() {
    return Modulus("sqrt", [](double r) { return std::sqrt(r); }, 1.0, 1e12, true, true);
}

Modulus Modulus::rlogr() {
    // r ln(1/r): increasing and concave on (0, e^{-1}]; positive up to 1
    return Modulus("rlogr", [](double r) { return r * std::log(1.0 / r); }, kInvE, 0.99, true,
                   true);
}

Modulus Modulus::rlogr_sqrt() {
    // r (ln(1/r))^{1/2}: increasing on (0, e^{-1/2}]; positive up to 1
    return Modulus("rlogr_sqrt", [](double r) { return r * std::sqrt(std::log(1.0 / r)); },
                   std::exp(-0.5), 0.99, true, true);
}

Modulus Modulus::from_table(std::string name, std::vector<std::pair<double, double>> points) {
    require(points.size() >= 2, "modulus table needs at least two points");
    for (std::size_t i = 0; i < points.size(); ++i) {
        require(points[i].first > 0.0 && std::isfinite(points[i].first),
                "modulus table abscissae must be positive finite");
        require(points[i].second > 0.0 && std::isfinite(points[i].second),
                "modulus table values must be positive finite");
        if (i > 0)
            require(points[i].first > points[i - 1].first,
                    "modulus table abscissae must be strictly ascending");
    }
    const double r_min = points.front().first;
    const double r_max = points.back().first;
    bool increasing = true;
    for (std::size_t i = 1; i < points.size(); ++i)
        if (points[i].second < points[i - 1].second) increasing = false;
    auto rho = [pts = std::move(points)](double r) {
        if (r <= pts.front().first)  // linear stretch to the origin
            return pts.front().second * (r / pts.front().first);
        auto it = std::lower_bound(pts.begin(), pts.end(), r,
                                   [](const auto& p, double x) { return p.first < x; });
        if (it == pts.end()) return pts.back().second;
        if (it == pts.begin()) return pts.front().second;
        const auto& [r1, y1] = *(it - 1);
        const auto& [r2, y2] = *it;
        return y1 + (y2 - y1) * (r - r1) / (r2 - r1);
    };
    return Modulus(std::move(name), std::move(rho), r_max, r_max, false, increasing, r_min);
}

double inverse_rho_integral(const Modulus& rho, double r_lo, double r_hi) {
    require(r_lo > 0.0 && r_hi >= r_lo, "inverse_rho_integral: need 0 < r_lo <= r_hi");
    require(r_hi <= rho.eval_max() * (1.0 + 1e-12),
            "inverse_rho_integral: r_hi beyond evaluation domain");
    if (r_lo == r_hi) return 0.0;
    // substitute s = e^u: ∫ ds/ρ(s) = ∫ e^u/ρ(e^u) du; segment geometrically in
    // |u| so the near-0 blowup of 1/ρ is resolved
    const double u_lo = std::log(r_lo);
    const double u_hi = std::log(std::min(r_hi, rho.eval_max()));
    auto f = [&rho](double u) {
        const double s = std::exp(u);
        return s / rho(s);
    };
    // segments grow geometrically away from u = 0, resolving the 1/ρ blowup
    // near r = 1 for rlogr-type formulas and near u = ±∞ harmlessly
    double acc = 0.0;
    double u = u_lo;
    while (u < u_hi) {
        double step = u < 0.0 ? std::max(0.5 * -u, 1e-3) : std::max(0.5 * u, 1e-3);
        const double next = std::min(u + step, u_hi);
        acc += integrate_gl(f, u, next, 16);
        u = next;
    }
    return acc;
}

OsgoodClass osgood_test(const Modulus& rho, std::vector<double> r_sequence) {
    if (r_sequence.empty())
        for (int k = 2; k <= 12; ++k) r_sequence.push_back(std::pow(10.0, -k));
    std::sort(r_sequence.begin(), r_sequence.end(), std::greater<>());
    r_sequence.erase(std::unique(r_sequence.begin(), r_sequence.end()), r_sequence.end());

    const double r_ref = std::min(1.0, rho.valid_max());
    std::vector<double> probes;
    for (double r : r_sequence)
        if (r >= rho.probe_floor() && r > 0.0 && r < r_ref) probes.push_back(r);
    if (probes.size() < 7) return OsgoodClass::undecided;

    std::vector<double> inc(probes.size() - 1);
    double total = inverse_rho_integral(rho, probes[0], r_ref);
    for (std::size_t i = 0; i + 1 < probes.size(); ++i) {
        inc[i] = inverse_rho_integral(rho, probes[i + 1], probes[i]);
        total += inc[i];
    }

    // saturation: tail contributes nothing measurable → the integral is Cauchy
    const std::size_t m = inc.size();
    bool saturated = true;
    for (std::size_t i = m - 4; i < m; ++i)
        if (inc[i] > 1e-12 * std::max(1.0, total)) saturated = false;
    if (saturated) return OsgoodClass::convergent;

    // geometric trend of the last increments
    double gsum = 0.0;
    std::size_t used = 0;
    for (std::size_t i = m - 4; i + 1 < m; ++i) {
        if (inc[i] <= 0.0) return OsgoodClass::undecided;
        gsum += std::log(inc[i + 1] / inc[i]);
        ++used;
    }
    const double qbar = std::exp(gsum / static_cast<double>(used));
    if (qbar <= 0.85) return OsgoodClass::convergent;
    if (qbar >= 0.999) return OsgoodClass::divergent;

    // borderline: power-law fit of increments against u = ln(1/r); exponent
    // <= 1 integrates to a divergent harmonic-type tail, > 1 to a convergent one
    double asum = 0.0;
    std::size_t aused = 0;
    for (std::size_t i = m - 4; i + 1 < m; ++i) {
        const double u1 = std::log(1.0 / probes[i]), u2 = std::log(1.0 / probes[i + 1]);
        const double u3 = std::log(1.0 / probes[i + 2]);
        const double mid1 = 0.5 * (u1 + u2), mid2 = 0.5 * (u2 + u3);
        const double q = inc[i + 1] / inc[i];
        asum += -std::log(q) / std::log(mid2 / mid1);
        ++aused;
    }
    const double alpha = asum / static_cast<double>(aused);
    if (alpha <= 1.05) return OsgoodClass::divergent;
    if (alpha >= 1.5) return OsgoodClass::convergent;
    return OsgoodClass::undecided;
}

}  // namespace gbmlab

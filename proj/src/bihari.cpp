#include "gbmlab/bihari.hpp"

#include <algorithm>
#include <cmath>

namespace gbmlab {

BihariEnvelope::BihariEnvelope(Modulus rho, std::vector<double> beta_times,
                               std::vector<double> beta_values, std::optional<double> anchor)
    : rho_(std::move(rho)),
      t0_(0.0),
      beta_times_(std::move(beta_times)),
      beta_values_(std::move(beta_values)) {
    require(beta_times_.size() >= 2 && beta_times_.front() == 0.0,
            "beta grid must start at 0 with at least one interval");
    require(beta_values_.size() + 1 == beta_times_.size(),
            "need one beta value per beta interval");
    for (std::size_t i = 1; i < beta_times_.size(); ++i)
        require(beta_times_[i] > beta_times_[i - 1], "beta grid must be strictly ascending");
    for (double b : beta_values_)
        require(b >= 0.0 && std::isfinite(b), "beta values must be finite and >= 0");

    t0_ = anchor.value_or(std::min(1.0, rho_.valid_max()));
    require(t0_ > 0.0 && t0_ <= rho_.eval_max(), "anchor must lie inside the modulus domain");

    beta_cum_.assign(beta_times_.size(), 0.0);
    for (std::size_t i = 0; i + 1 < beta_times_.size(); ++i)
        beta_cum_[i + 1] =
            beta_cum_[i] + beta_values_[i] * (beta_times_[i + 1] - beta_times_[i]);
}

BihariEnvelope::BihariEnvelope(Modulus rho, double beta_const, double horizon,
                               std::optional<double> anchor)
    : BihariEnvelope(std::move(rho), std::vector<double>{0.0, horizon},
                     std::vector<double>{beta_const}, anchor) {}

double BihariEnvelope::beta_integral(double t) const {
    require(t >= 0.0 && t <= beta_times_.back() * (1.0 + 1e-12),
            "time outside the beta path's horizon");
    const auto it = std::upper_bound(beta_times_.begin(), beta_times_.end(), t);
    const std::size_t seg = static_cast<std::size_t>(it - beta_times_.begin());
    if (seg >= beta_times_.size()) return beta_cum_.back();
    if (seg == 0) return 0.0;
    return beta_cum_[seg - 1] + beta_values_[seg - 1] * (t - beta_times_[seg - 1]);
}

double BihariEnvelope::v(double x) const {
    require(x > 0.0, "v is defined on (0, eval_max]");
    if (x >= t0_) return inverse_rho_integral(rho_, t0_, x);
    return -inverse_rho_integral(rho_, x, t0_);
}

double BihariEnvelope::v_inverse(double y) const {
    // bisection on ln x over the working domain, then Newton polish with
    // v' = 1/ρ
    double lo = std::log(1e-300);
    double hi = std::log(rho_.eval_max());
    if (y >= v(rho_.eval_max())) return rho_.eval_max();
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (v(std::exp(mid)) < y)
            lo = mid;
        else
            hi = mid;
    }
    double x = std::exp(0.5 * (lo + hi));
    for (int it = 0; it < 4; ++it) {
        const double step = (v(x) - y) * rho_(x);
        const double next = x - step;
        if (!(next > 0.0) || next > rho_.eval_max()) break;
        x = next;
    }
    return x;
}

BihariBound bihari_bound(const BihariEnvelope& env, double a, double t) {
    require(a >= 0.0 && std::isfinite(a), "bihari_bound: a must be finite and >= 0");
    if (a == 0.0) return {0.0, false};
    require(a <= env.rho().eval_max(), "bihari_bound: a beyond the working domain");
    const double y = env.v(a) + env.beta_integral(t);
    const double cap = env.rho().eval_max();
    if (y >= env.v(cap)) return {cap, true};
    return {env.v_inverse(y), false};
}

}  // namespace gbmlab

#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <vector>

#include "gbmlab/common.hpp"

namespace gbmlab {

// Gauss-Legendre rule on [-1, 1]. Nodes are mirrored bitwise around 0 so that
// symmetric integrands cancel exactly in paired summation.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline GaussLegendre make_gauss_legendre(std::size_t n) {
    require(n >= 1, "quadrature order must be >= 1");
    GaussLegendre rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        // Newton on P_n from the classic cosine initial guess
        double x = std::cos(M_PI * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double pk = ((2.0 * static_cast<double>(k) - 1.0) * x * p1 -
                                   (static_cast<double>(k) - 1.0) * p0) /
                                  static_cast<double>(k);
                p0 = p1;
                p1 = pk;
            }
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        if (2 * i + 1 == n) x = 0.0;  // center node of odd rules
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -std::fabs(x);
        rule.nodes[n - 1 - i] = std::fabs(x);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

inline const GaussLegendre& gauss_legendre(std::size_t n) {
    static std::mutex mu;
    static std::map<std::size_t, GaussLegendre> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
    return it->second;
}

// ∫_a^b f
template <typename F>
double integrate_gl(F f, double a, double b, std::size_t order = 16) {
    const GaussLegendre& rule = gauss_legendre(order);
    const double mid = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q)
        acc += rule.weights[q] * f(mid + hw * rule.nodes[q]);
    return acc * hw;
}

}  // namespace gbmlab

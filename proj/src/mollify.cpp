#include "gbmlab/mollify.hpp"

#include <cmath>
#include <memory>
#include <vector>

#include "gbmlab/common.hpp"
#include "gbmlab/quadrature.hpp"

namespace gbmlab {

double bump_unnormalized(double radius2) {
    if (radius2 >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - radius2));
}

namespace {

struct MirrorPair {
    Vecd offset;  // w * y, the mirrored node contributes -offset
    double weight;
};

struct Stencil {
    std::vector<MirrorPair> pairs;
    double center_weight = 0.0;  // node y = 0, present only for odd orders
    double mass = 0.0;
};

Stencil build_stencil(std::size_t n, double w, std::size_t m) {
    const auto& gl = gauss_legendre(m);
    Stencil st;
    std::vector<std::size_t> idx(n, 0);
    for (;;) {
        // visit each {y, -y} pair once; mirroring index i -> m-1-i negates
        // the node bitwise
        bool take = false, center = true;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t mi = m - 1 - idx[i];
            if (idx[i] != mi) center = false;
            if (idx[i] < mi) {
                take = true;
                break;
            }
            if (idx[i] > mi) break;
        }
        if (take || center) {
            Vecd y(n);
            double r2 = 0.0, wq = 1.0;
            for (std::size_t i = 0; i < n; ++i) {
                y[i] = gl.nodes[idx[i]];
                r2 += y[i] * y[i];
                wq *= gl.weights[idx[i]];
            }
            const double jw = bump_unnormalized(r2) * wq;
            if (jw > 0.0) {
                if (center) {
                    st.center_weight = jw;
                } else {
                    for (double& e : y) e *= w;
                    st.pairs.push_back({std::move(y), jw});
                }
            }
        }
        std::size_t i = 0;
        while (i < n && ++idx[i] == m) idx[i++] = 0;
        if (i == n) break;
    }
    for (const auto& p : st.pairs) st.mass += 2.0 * p.weight;
    st.mass += st.center_weight;
    return st;
}

}  // namespace

ScalarField mollify(ScalarField g, std::size_t n, double w, std::size_t quad_points) {
    require(static_cast<bool>(g), "mollify needs an evaluation function");
    require(n >= 1 && n <= 3, "mollify supports dimensions 1 to 3");
    require(std::isfinite(w) && w > 0.0, "mollifier width must be > 0");
    require(quad_points >= 2, "mollify needs at least 2 quadrature points per axis");

    auto st = std::make_shared<const Stencil>(build_stencil(n, w, quad_points));
    return [g = std::move(g), st, n](const Vecd& x) {
        require(x.size() == n, "mollified field: argument dimension mismatch");
        double acc = 0.0;
        Vecd lo(n), hi(n);
        for (const auto& p : st->pairs) {
            for (std::size_t i = 0; i < n; ++i) {
                lo[i] = x[i] - p.offset[i];
                hi[i] = x[i] + p.offset[i];
            }
            acc += p.weight * (g(lo) + g(hi));
        }
        if (st->center_weight > 0.0) acc += st->center_weight * g(x);
        return acc / st->mass;
    };
}

double kernel_derivative_l1() {
    // |J'| integrates to 2 (J(0) - J(1)) = 2/e before normalization
    static const double value = [] {
        double z_half = 0.0;
        const int panels = 16;
        for (int k = 0; k < panels; ++k)
            z_half += integrate_gl([](double y) { return bump_unnormalized(y * y); },
                                   k / static_cast<double>(panels),
                                   (k + 1) / static_cast<double>(panels), 16);
        return (2.0 * std::exp(-1.0)) / (2.0 * z_half);
    }();
    return value;
}

double mollified_lipschitz_bound(double sup_abs_g, double w) {
    require(std::isfinite(w) && w > 0.0, "mollifier width must be > 0");
    require(sup_abs_g >= 0.0, "sup|g| must be >= 0");
    return sup_abs_g * kernel_derivative_l1() / w;
}

}  // namespace gbmlab

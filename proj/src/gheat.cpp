#include "gbmlab/gheat.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gbmlab/kernels.hpp"

namespace gbmlab {

namespace {

std::pair<double, double> variance_band(const UncertaintySet& uset) {
    require(uset.dimension() == 1, "the G-heat solver supports d = 1 only");
    double lo = uset.covariances().front()(0, 0);
    double hi = lo;
    for (const Matd& cov : uset.covariances()) {
        lo = std::min(lo, cov(0, 0));
        hi = std::max(hi, cov(0, 0));
    }
    return {lo, hi};
}

}  // namespace

PdeConfig make_pde_config(const UncertaintySet& uset, double t_final, std::size_t n_x,
                          std::size_t n_t, double half_width, BoundaryMode boundary) {
    require(t_final > 0.0 && std::isfinite(t_final), "t_final must be positive");
    require(n_x >= 3, "need at least 3 space points");

    PdeConfig cfg;
    std::tie(cfg.var_lo, cfg.var_hi) = variance_band(uset);
    require(cfg.var_hi > 0.0, "G-heat needs a scenario with positive variance");
    cfg.n_x = n_x;
    cfg.half_width = half_width > 0.0 ? half_width : 8.0 * std::sqrt(cfg.var_hi * t_final);
    cfg.boundary = boundary;

    if (n_t == 0) {
        const double dx2 = cfg.dx() * cfg.dx();
        n_t = static_cast<std::size_t>(std::ceil(t_final * cfg.var_hi / dx2));
        if (n_t == 0) n_t = 1;
    }
    cfg.n_t = n_t;
    check_monotone_step(cfg, t_final);
    return cfg;
}

void check_monotone_step(const PdeConfig& cfg, double t_final) {
    require(cfg.n_x >= 3 && cfg.n_t >= 1 && cfg.half_width > 0.0, "PDE grid malformed");
    require(cfg.var_hi >= cfg.var_lo && cfg.var_lo >= 0.0 && cfg.var_hi > 0.0,
            "PDE variance band malformed");
    const double dt = t_final / static_cast<double>(cfg.n_t);
    const double dx2 = cfg.dx() * cfg.dx();
    if (dt * cfg.var_hi > dx2 * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "explicit scheme loses monotonicity: dt = " << dt
           << " exceeds the admissible maximum dx^2/var_hi = " << dx2 / cfg.var_hi;
        throw ValidationError(os.str());
    }
}

std::vector<double> sample_on_grid(const PdeConfig& cfg,
                                   const std::function<double(double)>& phi) {
    require(static_cast<bool>(phi), "need an initial datum");
    std::vector<double> u(cfg.n_x);
    for (std::size_t i = 0; i < cfg.n_x; ++i) u[i] = phi(cfg.x(i));
    return u;
}

std::vector<double> solve_gheat(const PdeConfig& cfg, std::vector<double> phi, double t_final) {
    require(phi.size() == cfg.n_x, "initial datum must be sampled on the space grid");
    for (double v : phi)
        require(std::isfinite(v), "initial datum must be finite");
    check_monotone_step(cfg, t_final);

    const double dt = t_final / static_cast<double>(cfg.n_t);
    const double dx2 = cfg.dx() * cfg.dx();
    const double c_up = 0.5 * dt * cfg.var_hi / dx2;
    const double c_dn = 0.5 * dt * cfg.var_lo / dx2;
    const double left_datum = phi.front();
    const double right_datum = phi.back();

    const auto& kern = kernels::table();
    std::vector<double> next(cfg.n_x);
    const std::size_t last = cfg.n_x - 1;
    for (std::size_t k = 0; k < cfg.n_t; ++k) {
        kern.heat_step(phi.data(), next.data(), cfg.n_x, c_up, c_dn);
        if (cfg.boundary == BoundaryMode::linear_extrapolation) {
            // zero curvature at the edge, from the updated interior
            next[0] = 2.0 * next[1] - next[2];
            next[last] = 2.0 * next[last - 1] - next[last - 2];
        } else {
            next[0] = left_datum;
            next[last] = right_datum;
        }
        phi.swap(next);
    }
    return phi;
}

double gnormal_expectation(const UncertaintySet& uset, const std::function<double(double)>& phi,
                           double t, std::size_t n_x) {
    require(n_x % 2 == 1, "n_x must be odd so that x = 0 is a grid point");
    const PdeConfig cfg = make_pde_config(uset, t, n_x);
    const std::vector<double> u = solve_gheat(cfg, sample_on_grid(cfg, phi), t);
    return u[(n_x - 1) / 2];
}

}  // namespace gbmlab

#include "gbmlab/paths.hpp"

#include <cmath>

#include "gbmlab/rng.hpp"

namespace gbmlab {

double PathBundle::b_dir(std::size_t k, const Vecd& a) const {
    return dot(a, b_path[k]);
}

double PathBundle::qv_dir(std::size_t k, const Vecd& a) const {
    return quad_form(qv_path[k], a);
}

PathBundle simulate_path(const UncertaintySet& uset, const ScenarioControl& scenario,
                         const TimeGrid& grid, std::uint64_t seed, std::uint64_t path_index) {
    require(scenario.grid == grid, "scenario control grid does not match the simulation grid");
    validate_control(uset, scenario);
    const std::size_t d = uset.dimension();
    const std::size_t n = grid.n_steps;
    const double dt = grid.dt();
    const double sqrt_dt = std::sqrt(dt);

    PathBundle bundle;
    bundle.grid = grid;
    bundle.scenario = scenario;
    bundle.d = d;
    bundle.seed = seed;
    bundle.path_index = path_index;
    bundle.w.assign(n, Vecd(d, 0.0));
    bundle.b_path.assign(n + 1, Vecd(d, 0.0));
    bundle.qv_path.assign(n + 1, Matd(d, d));

    const NormalStream noise(seed);
    Vecd z(d, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        noise.fill_normals(path_index, static_cast<std::uint32_t>(k), z.data(), d);
        for (std::size_t c = 0; c < d; ++c) bundle.w[k][c] = z[c] * sqrt_dt;

        const Matd& gamma = uset.gamma(scenario.values[k]);
        const Vecd db = gamma.mul(bundle.w[k]);
        const Matd& cov = uset.covariances()[scenario.values[k]];
        for (std::size_t c = 0; c < d; ++c) bundle.b_path[k + 1][c] = bundle.b_path[k][c] + db[c];
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                bundle.qv_path[k + 1](i, j) = bundle.qv_path[k](i, j) + cov(i, j) * dt;
    }
    return bundle;
}

double ito_integral(const std::vector<double>& integrand, const PathBundle& bundle,
                    const Vecd& direction) {
    const std::size_t n = bundle.grid.n_steps;
    require(integrand.size() == n, "ito_integral: need one integrand value per step");
    require(direction.size() == bundle.d, "ito_integral: direction dimension mismatch");
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        acc += integrand[k] * (bundle.b_dir(k + 1, direction) - bundle.b_dir(k, direction));
    return acc;
}

double qv_integral(const std::vector<double>& integrand, const PathBundle& bundle, std::size_t i,
                   std::size_t j) {
    const std::size_t n = bundle.grid.n_steps;
    require(integrand.size() == n, "qv_integral: need one integrand value per step");
    require(i < bundle.d && j < bundle.d, "qv_integral: component index out of range");
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        acc += integrand[k] * (bundle.qv_path[k + 1](i, j) - bundle.qv_path[k](i, j));
    return acc;
}

double ito_formula_residual(const PathBundle& bundle, const ItoTestFunction& phi,
                            const ProcessCoefficients& coeffs) {
    require(static_cast<bool>(phi.value) && static_cast<bool>(phi.gradient) &&
                static_cast<bool>(phi.hessian),
            "ito_formula_residual: phi needs value, gradient, hessian");
    require(coeffs.x0.size() == coeffs.n, "ito_formula_residual: x0 dimension mismatch");
    const std::size_t n_steps = bundle.grid.n_steps;
    const std::size_t n = coeffs.n;
    const std::size_t d = bundle.d;
    const double dt = bundle.grid.dt();

    Vecd x = coeffs.x0;
    double rhs = 0.0;
    for (std::size_t k = 0; k < n_steps; ++k) {
        const Vecd grad = phi.gradient(x);
        const Matd hess = phi.hessian(x);
        require(grad.size() == n && hess.rows() == n && hess.cols() == n,
                "ito_formula_residual: phi derivative dimensions mismatch");

        // dr mirrors dx term for term so pure-telescoping cases cancel exactly
        const Vecd a = coeffs.alpha(k, x);
        Vecd dx(n, 0.0);
        double dr = 0.0;
        for (std::size_t v = 0; v < n; ++v) dx[v] += a[v] * dt;
        dr += dot(grad, a) * dt;

        std::vector<Vecd> betas(d);
        for (std::size_t j = 0; j < d; ++j) {
            betas[j] = coeffs.beta(k, x, j);
            const double db = bundle.b_path[k + 1][j] - bundle.b_path[k][j];
            for (std::size_t v = 0; v < n; ++v) dx[v] += betas[j][v] * db;
            dr += dot(grad, betas[j]) * db;
        }

        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                const double dqv = bundle.qv_path[k + 1](i, j) - bundle.qv_path[k](i, j);
                const Vecd e = coeffs.eta(k, x, i, j);
                for (std::size_t v = 0; v < n; ++v) dx[v] += e[v] * dqv;
                dr += dot(grad, e) * dqv;
                double quad = 0.0;
                for (std::size_t u = 0; u < n; ++u)
                    for (std::size_t v = 0; v < n; ++v)
                        quad += hess(u, v) * betas[i][u] * betas[j][v];
                dr += 0.5 * quad * dqv;
            }

        for (std::size_t v = 0; v < n; ++v) x[v] += dx[v];
        rhs += dr;
    }
    return std::fabs(phi.value(x) - phi.value(coeffs.x0) - rhs);
}

double mg_norm(const std::vector<std::vector<double>>& per_node_samples, double p, double horizon,
               const std::function<double(const std::vector<double>&)>& upper_mean) {
    require(p >= 1.0, "mg_norm: p must be >= 1");
    require(horizon > 0.0, "mg_norm: horizon must be positive");
    require(!per_node_samples.empty(), "mg_norm: need at least one node");
    const double dt = horizon / static_cast<double>(per_node_samples.size());
    double acc = 0.0;
    std::vector<double> powered;
    for (const auto& node : per_node_samples) {
        require(!node.empty(), "mg_norm: empty sample set at a node");
        powered.resize(node.size());
        for (std::size_t s = 0; s < node.size(); ++s)
            powered[s] = std::pow(std::fabs(node[s]), p);
        acc += upper_mean(powered) * dt;
    }
    return std::pow(acc / horizon, 1.0 / p);
}

}  // namespace gbmlab

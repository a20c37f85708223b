#include "gbmlab/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "gbmlab/kernels.hpp"

namespace gbmlab {

void validate_bsde_problem(const BsdeProblem& problem) {
    require(static_cast<bool>(problem.xi), "backward problem needs a terminal payoff");
    require(static_cast<bool>(problem.f) && static_cast<bool>(problem.g),
            "backward problem needs both drivers (use zero functions)");
    require(problem.uncertainty.dimension() == 1, "the lattice solver supports d = 1 only");
    require(std::isfinite(problem.beta) && problem.beta >= 0.0, "beta must be nonnegative");
    require(std::isfinite(problem.c_growth) && problem.c_growth >= 0.0,
            "growth constant must be nonnegative");
    require(problem.rho.concave() && problem.rho.increasing(),
            "driver modulus must be concave and increasing");
    require(osgood_test(problem.rho) == OsgoodClass::divergent,
            "driver modulus must satisfy the Osgood condition");

    // sampled growth check |f| + |g| <= beta + c|y|
    std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    for (int i = 0; i < 64; ++i) {
        const double s = ud(rng) * problem.grid.horizon;
        const double y = (2.0 * ud(rng) - 1.0) * 50.0;
        const double lhs = std::fabs(problem.f(s, y)) + std::fabs(problem.g(s, y));
        const double rhs = problem.beta + problem.c_growth * std::fabs(y);
        if (!(lhs <= rhs * (1.0 + 1e-9) + 1e-12)) {
            std::ostringstream os;
            os << "driver growth bound violated at (s=" << s << ", y=" << y << "): |f|+|g| = "
               << lhs << " > " << rhs;
            throw ValidationError(os.str());
        }
    }
}

BsdeSolution bsde_solve(const BsdeProblem& problem, std::size_t n_iter, double tolerance) {
    validate_bsde_problem(problem);
    require(n_iter >= 1, "need at least one stage");
    require(tolerance >= 0.0, "tolerance must be nonnegative");

    const Lattice lat = make_lattice(problem.uncertainty, problem.grid);
    const std::size_t n = problem.grid.n_steps;
    const double dt = problem.grid.dt();

    std::vector<double> xi_vals(lat.n_nodes(n));
    for (std::size_t j = 0; j < xi_vals.size(); ++j) {
        xi_vals[j] = problem.xi(lat.state(n, j));
        require(std::isfinite(xi_vals[j]), "terminal payoff must be finite on the lattice");
    }

    struct Branch {
        double p_edge, p_mid, qvdt;
    };
    std::vector<Branch> branches;
    branches.reserve(lat.variances.size());
    for (const double var : lat.variances) {
        const double q = var / lat.var_hi;
        branches.push_back({0.5 * q, 1.0 - q, var * dt});
    }

    // Y^0 = 0 everywhere
    std::vector<std::vector<double>> y(n + 1);
    for (std::size_t k = 0; k <= n; ++k) y[k].assign(lat.n_nodes(k), 0.0);
    std::vector<std::vector<double>> y_next(n + 1);

    const auto& kern = kernels::table();
    BsdeSolution sol;
    std::vector<double> fdt, gv, off_arr;
    for (std::size_t stage = 1; stage <= n_iter; ++stage) {
        y_next[n] = xi_vals;
        for (std::size_t k = n; k-- > 0;) {
            const std::size_t nk = lat.n_nodes(k);
            const double s = problem.grid.time(k);
            fdt.resize(nk);
            gv.resize(nk);
            for (std::size_t i = 0; i < nk; ++i) {
                fdt[i] = problem.f(s, y[k][i]) * dt;
                gv[i] = problem.g(s, y[k][i]);
            }
            off_arr.resize(nk);
            y_next[k].assign(nk, -std::numeric_limits<double>::infinity());
            for (const Branch& br : branches) {
                kern.lincomb2(off_arr.data(), fdt.data(), gv.data(), nk, 1.0, br.qvdt);
                kern.dp_candidate_max(y_next[k].data(), y_next[k + 1].data(), nk, br.p_edge,
                                      br.p_mid, br.p_edge, 0.0, off_arr.data());
            }
        }

        double change = 0.0;
        for (std::size_t k = 0; k <= n; ++k)
            for (std::size_t i = 0; i < y[k].size(); ++i)
                change = std::max(change, std::fabs(y_next[k][i] - y[k][i]));
        sol.stage_changes.push_back(change);
        y.swap(y_next);
        sol.stages = stage;
        if (change < tolerance) {
            sol.converged = true;
            break;
        }
    }

    if (!sol.converged && sol.stage_changes.back() >= tolerance && tolerance > 0.0) {
        std::ostringstream os;
        os << "backward iteration did not converge in " << n_iter << " stages; changes:";
        for (double c : sol.stage_changes) os << " " << c;
        throw NumericalError(os.str());
    }
    sol.y = std::move(y);
    return sol;
}


}  // namespace gbmlab

#include "gbmlab/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <sstream>

#include "gbmlab/kernels.hpp"
#include "gbmlab/parallel.hpp"
#include "gbmlab/rng.hpp"

namespace gbmlab {

namespace {

constexpr std::size_t kPathBlock = 256;

// raw N(0, dt) component draws, identical to the ones simulate_path scales
struct NoiseTable {
    std::size_t n_paths = 0;
    std::size_t n_steps = 0;
    std::size_t d = 1;
    std::vector<double> w;  // [path][step][component]

    const double* path(std::size_t p) const { return w.data() + p * n_steps * d; }
};

NoiseTable draw_noise(const TimeGrid& grid, std::size_t d, std::size_t n_paths,
                      std::uint64_t seed) {
    NoiseTable t;
    t.n_paths = n_paths;
    t.n_steps = grid.n_steps;
    t.d = d;
    t.w.resize(n_paths * grid.n_steps * d);
    const double sqrt_dt = std::sqrt(grid.dt());
    for_blocks(n_paths, kPathBlock, [&](std::size_t begin, std::size_t end, std::size_t) {
        const NormalStream noise(seed);
        std::vector<double> z(d);
        for (std::size_t p = begin; p < end; ++p)
            for (std::size_t k = 0; k < t.n_steps; ++k) {
                noise.fill_normals(p, static_cast<std::uint32_t>(k), z.data(), d);
                double* row = t.w.data() + (p * t.n_steps + k) * d;
                for (std::size_t c = 0; c < d; ++c) row[c] = z[c] * sqrt_dt;
            }
    });
    return t;
}

// One path of the Euler recursion into next[(n_steps+1) x dim]. Drift
// coefficients read drift_src, the diffusion argument reads sigma_src; a null
// source means the recursion reads its own current node (plain Euler).
void advance_path(const CoefficientSet& cf, const UncertaintySet& uset,
                  const ScenarioControl& control, const TimeGrid& grid, const double* w_path,
                  const Vecd& x0, const double* drift_src, const double* sigma_src, double* next,
                  Vecd& xdrift, Vecd& xsigma, Vecd& dwv) {
    const auto& kern = kernels::table();
    const double dt = grid.dt();
    const std::size_t dim = cf.n;
    const std::size_t d = cf.d;
    for (std::size_t i = 0; i < dim; ++i) next[i] = x0[i];
    for (std::size_t k = 0; k < grid.n_steps; ++k) {
        const double t = grid.time(k);
        const double* cur = next + k * dim;
        double* out = next + (k + 1) * dim;
        const double* dsrc = drift_src ? drift_src + k * dim : cur;
        const double* ssrc = sigma_src ? sigma_src + k * dim : cur;
        xdrift.assign(dsrc, dsrc + dim);
        xsigma.assign(ssrc, ssrc + dim);

        const std::size_t gi = control.values[k];
        const Matd& gamma = uset.gamma(gi);
        const Matd& cov = uset.covariances()[gi];
        const double* wk = w_path + k * d;

        const Vecd bv = eval_b(cf, t, xdrift);
        const Vecd h00 = eval_h(cf, t, xdrift, 0, 0);
        const Vecd s0 = eval_sigma(cf, t, xsigma, 0);
        double db0 = 0.0;
        for (std::size_t c = 0; c < d; ++c) db0 += gamma(0, c) * wk[c];
        std::memcpy(out, cur, dim * sizeof(double));
        dwv.assign(dim, db0);
        kern.euler_update(out, bv.data(), h00.data(), s0.data(), dwv.data(), dim, dt,
                          cov(0, 0) * dt);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = (i == 0 ? 1 : 0); j < d; ++j) {
                const Vecd hv = eval_h(cf, t, xdrift, i, j);
                kern.axpy(out, hv.data(), dim, cov(i, j) * dt);
            }
        for (std::size_t j = 1; j < d; ++j) {
            const Vecd sv = eval_sigma(cf, t, xsigma, j);
            double dbj = 0.0;
            for (std::size_t c = 0; c < d; ++c) dbj += gamma(j, c) * wk[c];
            kern.axpy(out, sv.data(), dim, dbj);
        }
    }
}

IterateStore make_store(std::size_t n_s, std::size_t n_p, std::size_t n_nodes, std::size_t dim) {
    IterateStore st;
    st.n_scenarios = n_s;
    st.n_paths = n_p;
    st.n_nodes = n_nodes;
    st.dim = dim;
    st.data.assign(n_s * n_p * n_nodes * dim, 0.0);
    return st;
}

void fill_constant_state(IterateStore& st, const Vecd& x0) {
    for (std::size_t flat = 0; flat < st.data.size(); ++flat) st.data[flat] = x0[flat % st.dim];
}

void guard_memory(const McConfig& mc, std::size_t n_stores, std::size_t n_s, std::size_t n_p,
                  std::size_t n_nodes, std::size_t dim) {
    const std::size_t bytes = n_stores * n_s * n_p * n_nodes * dim * sizeof(double);
    if (bytes > mc.memory_budget) {
        std::ostringstream os;
        os << "iterate storage needs " << bytes << " bytes ( " << n_stores << " ensembles of "
           << n_s << " x " << n_p << " x " << n_nodes << " nodes ), over the budget of "
           << mc.memory_budget;
        throw ValidationError(os.str());
    }
}

// per-node sums over paths of |diff|^2 and |diff|
struct NodeSums {
    std::vector<double> sq, ab;
    NodeSums operator+(const NodeSums& o) const {
        NodeSums r = *this;
        for (std::size_t i = 0; i < r.sq.size(); ++i) {
            r.sq[i] += o.sq[i];
            r.ab[i] += o.ab[i];
        }
        return r;
    }
};

struct TransitionMetrics {
    std::vector<double> node_sq, node_ab;  // scenario-sup sample means per node
    double sup_sq = 0.0, sup_ab = 0.0;
};

TransitionMetrics finalize_metrics(std::vector<NodeSums> per_scenario, std::size_t n_paths,
                                   std::size_t n_nodes) {
    TransitionMetrics m;
    m.node_sq.assign(n_nodes, 0.0);
    m.node_ab.assign(n_nodes, 0.0);
    for (const NodeSums& s : per_scenario)
        for (std::size_t k = 0; k < n_nodes; ++k) {
            m.node_sq[k] = std::max(m.node_sq[k], s.sq[k] / static_cast<double>(n_paths));
            m.node_ab[k] = std::max(m.node_ab[k], s.ab[k] / static_cast<double>(n_paths));
        }
    for (std::size_t k = 0; k < n_nodes; ++k) {
        m.sup_sq = std::max(m.sup_sq, m.node_sq[k]);
        m.sup_ab = std::max(m.sup_ab, m.node_ab[k]);
    }
    return m;
}

// One Picard transition: next = recursion with drift at drift_src (per path)
// and diffusion argument at sigma_src; returns the gap metrics next vs ref.
TransitionMetrics transition(const CoefficientSet& cf, const UncertaintySet& uset,
                             const std::vector<ScenarioControl>& controls, const TimeGrid& grid,
                             const NoiseTable& noise, const Vecd& x0,
                             const IterateStore* drift_src, const IterateStore* sigma_src,
                             const IterateStore& ref, IterateStore& next) {
    const std::size_t n_nodes = grid.n_steps + 1;
    const std::size_t dim = cf.n;
    std::vector<NodeSums> per_scenario(controls.size());
    for (std::size_t s = 0; s < controls.size(); ++s) {
        per_scenario[s] = reduce_blocks(
            noise.n_paths, kPathBlock,
            NodeSums{std::vector<double>(n_nodes, 0.0), std::vector<double>(n_nodes, 0.0)},
            [&, s](std::size_t begin, std::size_t end) {
                NodeSums local{std::vector<double>(n_nodes, 0.0),
                               std::vector<double>(n_nodes, 0.0)};
                Vecd xdrift(dim), xsigma(dim), dwv(dim);
                for (std::size_t p = begin; p < end; ++p) {
                    advance_path(cf, uset, controls[s], grid, noise.path(p), x0,
                                 drift_src ? drift_src->node(s, p, 0) : nullptr,
                                 sigma_src ? sigma_src->node(s, p, 0) : nullptr,
                                 next.node(s, p, 0), xdrift, xsigma, dwv);
                    const double* a = next.node(s, p, 0);
                    const double* b = ref.node(s, p, 0);
                    for (std::size_t k = 0; k < n_nodes; ++k) {
                        double d2 = 0.0;
                        for (std::size_t i = 0; i < dim; ++i) {
                            const double di = a[k * dim + i] - b[k * dim + i];
                            d2 += di * di;
                        }
                        local.sq[k] += d2;
                        local.ab[k] += std::sqrt(d2);
                    }
                }
                return local;
            });
    }
    return finalize_metrics(std::move(per_scenario), noise.n_paths, n_nodes);
}

// gap metrics between two stored ensembles (no recursion)
TransitionMetrics compare_stores(const IterateStore& a, const IterateStore& b) {
    TransitionMetrics m;
    const std::size_t n_nodes = a.n_nodes;
    const std::size_t dim = a.dim;
    std::vector<NodeSums> per_scenario(a.n_scenarios);
    for (std::size_t s = 0; s < a.n_scenarios; ++s) {
        NodeSums sums{std::vector<double>(n_nodes, 0.0), std::vector<double>(n_nodes, 0.0)};
        for (std::size_t p = 0; p < a.n_paths; ++p) {
            const double* pa = a.node(s, p, 0);
            const double* pb = b.node(s, p, 0);
            for (std::size_t k = 0; k < n_nodes; ++k) {
                double d2 = 0.0;
                for (std::size_t i = 0; i < dim; ++i) {
                    const double di = pa[k * dim + i] - pb[k * dim + i];
                    d2 += di * di;
                }
                sums.sq[k] += d2;
                sums.ab[k] += std::sqrt(d2);
            }
        }
        per_scenario[s] = std::move(sums);
    }
    return finalize_metrics(std::move(per_scenario), a.n_paths, n_nodes);
}

std::vector<ScenarioControl> solver_controls(const SdeProblem& problem, const McConfig& mc) {
    require(mc.n_paths >= 1, "need at least one path");
    require(mc.control_cap >= 1, "need at least one scenario control");
    return enumerate_controls(problem.uncertainty, problem.grid, mc.control_cap);
}

}  // namespace

void validate_problem(const SdeProblem& problem) {
    validate_coefficients(problem.coefficients);
    require(problem.x0.size() == problem.coefficients.n,
            "initial condition dimension does not match the coefficients");
    require(problem.uncertainty.dimension() == problem.coefficients.d,
            "uncertainty set dimension does not match the coefficients' noise dimension");
    require(problem.regime == problem.coefficients.regime,
            "problem regime does not match the coefficient declarations");
}

std::vector<Vecd> euler_solve(const SdeProblem& problem, const ScenarioControl& scenario,
                              std::uint64_t seed, std::uint64_t path_index) {
    validate_problem(problem);
    const PathBundle bundle =
        simulate_path(problem.uncertainty, scenario, problem.grid, seed, path_index);

    const CoefficientSet& cf = problem.coefficients;
    const std::size_t n_steps = problem.grid.n_steps;
    const std::size_t d = cf.d;
    std::vector<double> w_flat(n_steps * d);
    for (std::size_t k = 0; k < n_steps; ++k)
        for (std::size_t c = 0; c < d; ++c) w_flat[k * d + c] = bundle.w[k][c];

    std::vector<double> nodes((n_steps + 1) * cf.n);
    Vecd xdrift(cf.n), xsigma(cf.n), dwv(cf.n);
    advance_path(cf, problem.uncertainty, scenario, problem.grid, w_flat.data(), problem.x0,
                 nullptr, nullptr, nodes.data(), xdrift, xsigma, dwv);

    std::vector<Vecd> out(n_steps + 1, Vecd(cf.n, 0.0));
    for (std::size_t k = 0; k <= n_steps; ++k)
        for (std::size_t i = 0; i < cf.n; ++i) out[k][i] = nodes[k * cf.n + i];
    return out;
}

PicardTrace picard_solve_h2(const SdeProblem& problem, std::size_t n_iter, const McConfig& mc) {
    validate_problem(problem);
    require(problem.regime == ModulusRegime::h1h2,
            "picard_solve_h2 handles the shared-modulus regime only");
    require(n_iter >= 1, "need at least one iteration");

    PicardTrace trace;
    trace.regime = ModulusRegime::h1h2;
    trace.controls = solver_controls(problem, mc);
    const std::size_t n_s = trace.controls.size();
    const std::size_t n_nodes = problem.grid.n_steps + 1;
    const std::size_t dim = problem.coefficients.n;
    guard_memory(mc, 2, n_s, mc.n_paths, n_nodes, dim);

    const NoiseTable noise =
        draw_noise(problem.grid, problem.coefficients.d, mc.n_paths, mc.seed);
    IterateStore prev = make_store(n_s, mc.n_paths, n_nodes, dim);
    fill_constant_state(prev, problem.x0);
    IterateStore next = make_store(n_s, mc.n_paths, n_nodes, dim);

    for (std::size_t m = 0; m < n_iter; ++m) {
        const TransitionMetrics tm =
            transition(problem.coefficients, problem.uncertainty, trace.controls, problem.grid,
                       noise, problem.x0, &prev, &prev, prev, next);
        trace.errors_sq.push_back(tm.sup_sq);
        trace.errors_abs.push_back(tm.sup_ab);
        trace.node_errors.push_back(tm.node_sq);
        prev.data.swap(next.data);

        if (m >= 1 && trace.errors_sq[0] > 0.0 &&
            trace.errors_sq[m] > 1e3 * trace.errors_sq[0]) {
            std::ostringstream os;
            os << "picard iteration diverges: e_" << m << " = " << trace.errors_sq[m]
               << " exceeds 1000 x e_0 = " << trace.errors_sq[0];
            throw NumericalError(os.str());
        }
        const double primary = trace.errors_sq[m];
        if (primary == 0.0 || (mc.tolerance > 0.0 && primary < mc.tolerance)) {
            trace.converged = true;
            break;
        }
    }
    trace.solution = std::move(prev);
    return trace;
}

PicardTrace picard_solve_h2p(const SdeProblem& problem, std::size_t n_iter_outer,
                             std::size_t n_iter_inner, const McConfig& mc,
                             std::vector<double> cap_schedule) {
    validate_problem(problem);
    require(problem.regime == ModulusRegime::h1ph2p,
            "picard_solve_h2p handles the split-modulus regime only");
    require(n_iter_outer >= 1 && n_iter_inner >= 1, "need at least one iteration");
    require(mc.tolerance > 0.0,
            "the two-stage scheme needs a positive outer tolerance (inner = outer/10)");
    const double inner_tol = mc.tolerance / 10.0;

    const CoefficientSet& cf = problem.coefficients;
    const Modulus rho1 = *cf.rho1;
    const Modulus rho3 = *cf.rho3;
    const Modulus rho_sum(
        "rho1+rho3", [rho1, rho3](double r) { return rho1(r) + rho3(r); },
        std::min(rho1.valid_max(), rho3.valid_max()), std::min(rho1.eval_max(), rho3.eval_max()),
        false, true, std::max(rho1.probe_floor(), rho3.probe_floor()));
    require(rho_sum.osgood() == OsgoodClass::divergent,
            "the two-stage scheme requires a divergent Osgood integral for rho1 + rho3");

    if (cap_schedule.empty()) {
        double scale = 1.0;
        for (double xi : problem.x0) scale = std::max(scale, std::fabs(xi));
        cap_schedule = {4.0 * scale, 16.0 * scale, 64.0 * scale, 256.0 * scale};
    }
    for (std::size_t i = 0; i < cap_schedule.size(); ++i) {
        require(cap_schedule[i] > 0.0, "truncation caps must be positive");
        if (i) require(cap_schedule[i] > cap_schedule[i - 1], "truncation caps must increase");
    }

    PicardTrace trace;
    trace.regime = ModulusRegime::h1ph2p;
    trace.controls = solver_controls(problem, mc);
    const std::size_t n_s = trace.controls.size();
    const std::size_t n_nodes = problem.grid.n_steps + 1;
    const std::size_t dim = cf.n;
    guard_memory(mc, 4, n_s, mc.n_paths, n_nodes, dim);

    const NoiseTable noise = draw_noise(problem.grid, cf.d, mc.n_paths, mc.seed);
    IterateStore prev_cap_final;

    for (const double cap : cap_schedule) {
        const CoefficientSet capped = truncate_coefficients(cf, cap);
        IterateStore outer = make_store(n_s, mc.n_paths, n_nodes, dim);
        fill_constant_state(outer, problem.x0);
        IterateStore inner_prev = make_store(n_s, mc.n_paths, n_nodes, dim);
        IterateStore inner_next = make_store(n_s, mc.n_paths, n_nodes, dim);

        trace.errors_sq.clear();
        trace.errors_abs.clear();
        trace.node_errors.clear();
        trace.converged = false;

        for (std::size_t m = 0; m < n_iter_outer; ++m) {
            // stage equation: drift frozen at the outer iterate, sigma solved
            // by inner Picard starting from the outer iterate
            inner_prev.data = outer.data;
            bool inner_done = false;
            double inner_err = 0.0;
            for (std::size_t j = 0; j < n_iter_inner; ++j) {
                const TransitionMetrics im =
                    transition(capped, problem.uncertainty, trace.controls, problem.grid, noise,
                               problem.x0, &outer, &inner_prev, inner_prev, inner_next);
                inner_prev.data.swap(inner_next.data);
                inner_err = im.sup_ab;
                if (inner_err < inner_tol) {
                    inner_done = true;
                    break;
                }
            }
            if (!inner_done) {
                std::ostringstream os;
                os << "inner diffusion loop stalled at outer stage " << m << ", cap " << cap
                   << ": last inner change " << inner_err << " vs tolerance " << inner_tol;
                throw NumericalError(os.str());
            }

            const TransitionMetrics om = compare_stores(inner_prev, outer);
            trace.errors_sq.push_back(om.sup_sq);
            trace.errors_abs.push_back(om.sup_ab);
            trace.node_errors.push_back(om.node_ab);
            outer.data.swap(inner_prev.data);

            if (m >= 1 && trace.errors_abs[0] > 0.0 &&
                trace.errors_abs[m] > 1e3 * trace.errors_abs[0]) {
                std::ostringstream os;
                os << "two-stage iteration diverges at cap " << cap << ": e_" << m << " = "
                   << trace.errors_abs[m] << " exceeds 1000 x e_0 = " << trace.errors_abs[0];
                throw NumericalError(os.str());
            }
            if (trace.errors_abs[m] < mc.tolerance) {
                trace.converged = true;
                break;
            }
        }

        trace.caps.push_back(cap);
        if (!prev_cap_final.data.empty())
            trace.cap_differences.push_back(compare_stores(outer, prev_cap_final).sup_ab);
        prev_cap_final.data = outer.data;
        prev_cap_final.n_scenarios = outer.n_scenarios;
        prev_cap_final.n_paths = outer.n_paths;
        prev_cap_final.n_nodes = outer.n_nodes;
        prev_cap_final.dim = outer.dim;
        trace.solution = std::move(outer);
    }
    return trace;
}

StabilityReport stability_experiment(const SdeProblem& problem, const Vecd& x1, const Vecd& x2,
                                     const McConfig& mc) {
    validate_problem(problem);
    require(x1.size() == problem.coefficients.n && x2.size() == problem.coefficients.n,
            "initial conditions must match the state dimension");

    const std::vector<ScenarioControl> controls = solver_controls(problem, mc);
    const CoefficientSet& cf = problem.coefficients;
    const std::size_t n_nodes = problem.grid.n_steps + 1;
    const std::size_t dim = cf.n;
    const NoiseTable noise = draw_noise(problem.grid, cf.d, mc.n_paths, mc.seed);

    std::vector<NodeSums> per_scenario(controls.size());
    for (std::size_t s = 0; s < controls.size(); ++s) {
        per_scenario[s] = reduce_blocks(
            mc.n_paths, kPathBlock,
            NodeSums{std::vector<double>(n_nodes, 0.0), std::vector<double>(n_nodes, 0.0)},
            [&, s](std::size_t begin, std::size_t end) {
                NodeSums local{std::vector<double>(n_nodes, 0.0),
                               std::vector<double>(n_nodes, 0.0)};
                std::vector<double> a(n_nodes * dim), b(n_nodes * dim);
                Vecd xdrift(dim), xsigma(dim), dwv(dim);
                for (std::size_t p = begin; p < end; ++p) {
                    advance_path(cf, problem.uncertainty, controls[s], problem.grid,
                                 noise.path(p), x1, nullptr, nullptr, a.data(), xdrift, xsigma,
                                 dwv);
                    advance_path(cf, problem.uncertainty, controls[s], problem.grid,
                                 noise.path(p), x2, nullptr, nullptr, b.data(), xdrift, xsigma,
                                 dwv);
                    for (std::size_t k = 0; k < n_nodes; ++k) {
                        double d2 = 0.0;
                        for (std::size_t i = 0; i < dim; ++i) {
                            const double di = a[k * dim + i] - b[k * dim + i];
                            d2 += di * di;
                        }
                        local.sq[k] += d2;
                        local.ab[k] += std::sqrt(d2);
                    }
                }
                return local;
            });
    }
    const TransitionMetrics m = finalize_metrics(std::move(per_scenario), mc.n_paths, n_nodes);

    StabilityReport report;
    report.gap_sq = m.node_sq;
    report.gap_abs = m.node_ab;
    report.u_hat.resize(n_nodes);
    double running = 0.0;
    for (std::size_t k = 0; k < n_nodes; ++k) {
        running = std::max(running, report.gap_sq[k]);
        report.u_hat[k] = running;
    }
    report.final_u_hat = running;
    return report;
}

std::vector<std::vector<double>> iterated_picard_envelope(const Modulus& rho,
                                                          std::vector<double> e0, double dt,
                                                          double c, std::size_t n_m) {
    require(!e0.empty(), "envelope needs a seed profile");
    require(dt > 0.0 && std::isfinite(dt), "envelope needs a positive step");
    require(c >= 0.0 && std::isfinite(c), "envelope constant must be nonnegative");
    for (double v : e0) require(std::isfinite(v) && v >= 0.0, "seed profile must be nonnegative");

    std::vector<std::vector<double>> env(n_m + 1);
    env[0] = std::move(e0);
    const double cap = rho.eval_max();
    for (std::size_t m = 1; m <= n_m; ++m) {
        const std::vector<double>& prev = env[m - 1];
        std::vector<double> cur(prev.size(), 0.0);
        double acc = 0.0;
        for (std::size_t k = 1; k < prev.size(); ++k) {
            const double r = std::min(prev[k], cap);
            acc += (r > 0.0 ? rho(r) : 0.0) * dt;
            cur[k] = c * acc;
        }
        env[m] = std::move(cur);
    }
    return env;
}

}  // namespace gbmlab

#include "gbmlab/expectation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gbmlab/kernels.hpp"
#include "gbmlab/parallel.hpp"

namespace gbmlab {

namespace {

constexpr std::size_t kPathBlock = 2048;

void validate_scenario_inputs(const UncertaintySet& uset,
                              const std::vector<ScenarioControl>& controls,
                              std::size_t n_paths) {
    require(!controls.empty(), "upper expectation needs a nonempty control set");
    require(n_paths >= 1, "upper expectation needs at least one path");
    for (const auto& c : controls) {
        validate_control(uset, c);
        require(c.grid == controls.front().grid, "all controls must share one time grid");
    }
}

double unbiased_variance(double sum, double sum_sq, std::size_t n) {
    if (n < 2) return 0.0;
    const double mean = sum / static_cast<double>(n);
    const double ss = sum_sq - static_cast<double>(n) * mean * mean;
    return std::max(0.0, ss / static_cast<double>(n - 1));
}

bool same_scenarios(const SampleTable& a, const SampleTable& b) {
    if (a.seed != b.seed || a.n_paths != b.n_paths ||
        a.controls.size() != b.controls.size())
        return false;
    for (std::size_t s = 0; s < a.controls.size(); ++s) {
        const auto& ca = a.controls[s];
        const auto& cb = b.controls[s];
        if (!(ca.grid == cb.grid) || ca.kind != cb.kind || ca.values != cb.values) return false;
    }
    return true;
}

}  // namespace

std::size_t SampleTable::argmax() const {
    require(!means.empty(), "empty sample table");
    std::size_t best = 0;
    for (std::size_t s = 1; s < means.size(); ++s)
        if (means[s] > means[best]) best = s;
    return best;
}

double SampleTable::sup() const { return means[argmax()]; }

double SampleTable::std_error(std::size_t scenario) const {
    require(scenario < variances.size(), "scenario index out of range");
    return std::sqrt(variances[scenario] / static_cast<double>(n_paths));
}

SampleTable scenario_means(const PathPayoff& payoff, const UncertaintySet& uset,
                           const std::vector<ScenarioControl>& controls, std::size_t n_paths,
                           std::uint64_t seed) {
    require(static_cast<bool>(payoff), "scenario_means needs a payoff");
    validate_scenario_inputs(uset, controls, n_paths);

    SampleTable table;
    table.controls = controls;
    table.n_paths = n_paths;
    table.seed = seed;
    table.means.resize(controls.size());
    table.variances.resize(controls.size());

    struct Acc {
        double sum = 0.0, sum_sq = 0.0;
        Acc operator+(const Acc& o) const { return {sum + o.sum, sum_sq + o.sum_sq}; }
    };

    const TimeGrid& grid = controls.front().grid;
    for (std::size_t s = 0; s < controls.size(); ++s) {
        const Acc acc = reduce_blocks(n_paths, kPathBlock, Acc{},
                                      [&](std::size_t begin, std::size_t end) {
                                          Acc local;
                                          for (std::size_t p = begin; p < end; ++p) {
                                              const PathBundle b =
                                                  simulate_path(uset, controls[s], grid, seed, p);
                                              const double v = payoff(b);
                                              local.sum += v;
                                              local.sum_sq += v * v;
                                          }
                                          return local;
                                      });
        table.means[s] = acc.sum / static_cast<double>(n_paths);
        table.variances[s] = unbiased_variance(acc.sum, acc.sum_sq, n_paths);
    }
    return table;
}

UpperExpectationEstimate upper_expectation_mc(const PathPayoff& payoff,
                                              const UncertaintySet& uset,
                                              const std::vector<ScenarioControl>& controls,
                                              std::size_t n_paths, std::uint64_t seed) {
    const SampleTable table = scenario_means(payoff, uset, controls, n_paths, seed);
    const std::size_t best = table.argmax();
    UpperExpectationEstimate est;
    est.value = table.means[best];
    est.std_error = table.std_error(best);
    est.argmax_scenario = table.controls[best];
    est.n_paths = n_paths;
    est.n_scenarios = controls.size();
    est.mode = EstimateMode::open_loop_mc;
    return est;
}

UpperExpectationEstimate upper_expectation_mc(const PathPayoff& payoff,
                                              const UncertaintySet& uset, const TimeGrid& grid,
                                              std::size_t n_paths, std::size_t control_cap,
                                              std::uint64_t seed) {
    return upper_expectation_mc(payoff, uset, enumerate_controls(uset, grid, control_cap),
                                n_paths, seed);
}

double AxiomReport::worst_slack() const {
    return std::min(std::min(monotonicity_slack, constant_slack),
                    std::min(subadditivity_slack, homogeneity_slack));
}

AxiomReport check_sublinearity(const SampleTable& x, const SampleTable& y,
                               const SampleTable& x_minus_y, const SampleTable& lambda_x,
                               const SampleTable& constant, double lambda, double c) {
    require(lambda >= 0.0, "positive homogeneity needs lambda >= 0");
    for (const SampleTable* t : {&y, &x_minus_y, &lambda_x, &constant})
        require(same_scenarios(x, *t),
                "sublinearity check needs one scenario set and one noise stream");

    AxiomReport r;
    r.monotonicity_slack = x.sup() - y.sup();
    r.constant_slack = -std::fabs(constant.sup() - c);
    r.subadditivity_slack = x_minus_y.sup() - (x.sup() - y.sup());
    r.homogeneity_slack = -std::fabs(lambda_x.sup() - lambda * x.sup());
    r.domination_margin = std::numeric_limits<double>::quiet_NaN();
    return r;
}

AxiomReport check_sublinearity(const PathPayoff& x, const PathPayoff& y, double lambda, double c,
                               const UncertaintySet& uset,
                               const std::vector<ScenarioControl>& controls, std::size_t n_paths,
                               std::uint64_t seed) {
    require(static_cast<bool>(x) && static_cast<bool>(y), "sublinearity check needs two payoffs");
    require(lambda >= 0.0, "positive homogeneity needs lambda >= 0");
    validate_scenario_inputs(uset, controls, n_paths);

    struct Acc {
        double sx = 0.0, sy = 0.0, sd = 0.0, sl = 0.0, sc = 0.0;
        double margin = std::numeric_limits<double>::infinity();
        Acc operator+(const Acc& o) const {
            Acc r;
            r.sx = sx + o.sx;
            r.sy = sy + o.sy;
            r.sd = sd + o.sd;
            r.sl = sl + o.sl;
            r.sc = sc + o.sc;
            r.margin = std::min(margin, o.margin);
            return r;
        }
    };

    const std::size_t n_s = controls.size();
    const TimeGrid& grid = controls.front().grid;
    SampleTable tx, ty, td, tl, tc;
    for (SampleTable* t : {&tx, &ty, &td, &tl, &tc}) {
        t->controls = controls;
        t->n_paths = n_paths;
        t->seed = seed;
        t->means.resize(n_s);
        t->variances.assign(n_s, 0.0);
    }

    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < n_s; ++s) {
        const Acc acc = reduce_blocks(
            n_paths, kPathBlock, Acc{}, [&](std::size_t begin, std::size_t end) {
                Acc local;
                for (std::size_t p = begin; p < end; ++p) {
                    const PathBundle b = simulate_path(uset, controls[s], grid, seed, p);
                    const double vx = x(b);
                    const double vy = y(b);
                    local.sx += vx;
                    local.sy += vy;
                    local.sd += vx - vy;
                    local.sl += lambda * vx;
                    local.sc += c;
                    local.margin = std::min(local.margin, vx - vy);
                }
                return local;
            });
        const double n = static_cast<double>(n_paths);
        tx.means[s] = acc.sx / n;
        ty.means[s] = acc.sy / n;
        td.means[s] = acc.sd / n;
        tl.means[s] = acc.sl / n;
        tc.means[s] = acc.sc / n;
        margin = std::min(margin, acc.margin);
    }

    AxiomReport r = check_sublinearity(tx, ty, td, tl, tc, lambda, c);
    r.domination_margin = margin;
    return r;
}

JensenReport check_jensen_concave(const PathPayoff& x, const Modulus& rho,
                                  const UncertaintySet& uset,
                                  const std::vector<ScenarioControl>& controls,
                                  std::size_t n_paths, std::uint64_t seed) {
    require(static_cast<bool>(x), "jensen check needs a payoff");
    JensenReport report;
    if (!rho.concave() || !rho.increasing()) return report;  // flagged, skipped
    validate_scenario_inputs(uset, controls, n_paths);

    struct Acc {
        double sx = 0.0, srho = 0.0;
        double min_x = std::numeric_limits<double>::infinity();
        Acc operator+(const Acc& o) const {
            return {sx + o.sx, srho + o.srho, std::min(min_x, o.min_x)};
        }
    };

    const TimeGrid& grid = controls.front().grid;
    double sup_x = -std::numeric_limits<double>::infinity();
    double sup_rho = -std::numeric_limits<double>::infinity();
    double min_x = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < controls.size(); ++s) {
        const Acc acc = reduce_blocks(
            n_paths, kPathBlock, Acc{}, [&](std::size_t begin, std::size_t end) {
                Acc local;
                for (std::size_t p = begin; p < end; ++p) {
                    const PathBundle b = simulate_path(uset, controls[s], grid, seed, p);
                    const double vx = x(b);
                    local.sx += vx;
                    local.srho += rho(vx);
                    local.min_x = std::min(local.min_x, vx);
                }
                return local;
            });
        sup_x = std::max(sup_x, acc.sx / static_cast<double>(n_paths));
        sup_rho = std::max(sup_rho, acc.srho / static_cast<double>(n_paths));
        min_x = std::min(min_x, acc.min_x);
    }
    require(min_x >= 0.0, "jensen check needs a nonnegative payoff");

    report.checked = true;
    report.lhs = rho(sup_x);
    report.rhs = sup_rho;
    return report;
}

Lattice make_lattice(const UncertaintySet& uset, const TimeGrid& grid) {
    require(uset.dimension() == 1, "the lattice supports d = 1 only");
    Lattice lat;
    lat.grid = grid;
    lat.variances.reserve(uset.size());
    for (const Matd& cov : uset.covariances()) lat.variances.push_back(cov(0, 0));
    lat.var_hi = *std::max_element(lat.variances.begin(), lat.variances.end());
    require(lat.var_hi > 0.0, "lattice needs a scenario with positive variance");
    lat.dx = std::sqrt(lat.var_hi * grid.dt());
    return lat;
}

std::vector<std::vector<double>> conditional_g_expectation(const Lattice& lattice,
                                                           std::vector<double> terminal) {
    const std::size_t n = lattice.grid.n_steps;
    require(terminal.size() == lattice.n_nodes(n),
            "terminal slice size must match the lattice's final step");
    for (double v : terminal)
        require(std::isfinite(v), "terminal values must be finite");

    std::vector<std::vector<double>> surface(n + 1);
    surface[n] = std::move(terminal);

    const auto& kern = kernels::table();
    std::vector<std::pair<double, double>> branch;  // (p_dn == p_up, p_mid) per gamma
    branch.reserve(lattice.variances.size());
    for (const double var : lattice.variances) {
        const double q = var / lattice.var_hi;
        branch.emplace_back(0.5 * q, 1.0 - q);
    }

    for (std::size_t k = n; k-- > 0;) {
        auto& out = surface[k];
        out.assign(lattice.n_nodes(k), -std::numeric_limits<double>::infinity());
        const auto& v = surface[k + 1];
        for (const auto& [p_edge, p_mid] : branch)
            kern.dp_candidate_max(out.data(), v.data(), out.size(), p_edge, p_mid, p_edge, 0.0,
                                  nullptr);
    }
    return surface;
}

UpperExpectationEstimate upper_expectation_lattice(const std::function<double(double)>& phi,
                                                   const UncertaintySet& uset,
                                                   const TimeGrid& grid) {
    require(static_cast<bool>(phi), "lattice estimate needs a terminal function");
    const Lattice lat = make_lattice(uset, grid);
    const std::size_t n = grid.n_steps;
    std::vector<double> terminal(lat.n_nodes(n));
    for (std::size_t j = 0; j < terminal.size(); ++j) terminal[j] = phi(lat.state(n, j));
    const auto surface = conditional_g_expectation(lat, std::move(terminal));

    UpperExpectationEstimate est;
    est.value = surface[0][0];
    est.std_error = 0.0;
    // the maximizing control is feedback (chosen per node), not one open-loop row
    est.argmax_scenario = ScenarioControl{grid, {}, ControlKind::feedback};
    est.n_paths = 0;
    est.n_scenarios = uset.size();
    est.mode = EstimateMode::lattice_dp;
    return est;
}

}  // namespace gbmlab

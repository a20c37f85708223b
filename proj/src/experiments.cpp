#include "gbmlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gbmlab/bihari.hpp"
#include "gbmlab/coefficients.hpp"
#include "gbmlab/common.hpp"
#include "gbmlab/csv.hpp"
#include "gbmlab/expectation.hpp"
#include "gbmlab/gheat.hpp"
#include "gbmlab/kernels.hpp"
#include "gbmlab/mollify.hpp"
#include "gbmlab/moduli.hpp"
#include "gbmlab/parallel.hpp"
#include "gbmlab/paths.hpp"
#include "gbmlab/solvers.hpp"
#include "gbmlab/svg.hpp"

namespace gbmlab {
namespace {

using Runner = std::function<std::vector<std::string>(const std::string& out_dir)>;

std::function<double(double)> make_payoff_1d(const std::string& text) {
    const CatalogCall call = parse_catalog_call(text);
    const auto arity = [&](std::size_t want) {
        require(call.args.size() == want,
                "payoff '" + call.name + "' takes " + std::to_string(want) + " argument(s)");
    };
    if (call.name == "constant") {
        arity(1);
        const double c = call.args[0];
        return [c](double) { return c; };
    }
    if (call.name == "linear") {
        arity(1);
        const double k = call.args[0];
        return [k](double x) { return k * x; };
    }
    if (call.name == "square") {
        arity(0);
        return [](double x) { return x * x; };
    }
    if (call.name == "square_plus") {
        arity(1);
        const double c = call.args[0];
        return [c](double x) { return x * x + c; };
    }
    if (call.name == "neg_square") {
        arity(0);
        return [](double x) { return -(x * x); };
    }
    if (call.name == "abs") {
        arity(0);
        return [](double x) { return std::fabs(x); };
    }
    if (call.name == "neg_abs") {
        arity(0);
        return [](double x) { return -std::fabs(x); };
    }
    if (call.name == "exp_half") {
        arity(0);
        return [](double x) { return std::exp(0.5 * x); };
    }
    if (call.name == "neg_cosh") {
        arity(0);
        return [](double x) { return -std::cosh(x); };
    }
    if (call.name == "tanh") {
        arity(0);
        return [](double x) { return std::tanh(x); };
    }
    if (call.name == "cos") {
        arity(0);
        return [](double x) { return std::cos(x); };
    }
    throw ValidationError("unknown payoff '" + call.name + "'");
}

Modulus make_modulus(const std::string& text) {
    if (text.rfind("table:", 0) == 0) {
        const std::string path = text.substr(6);
        std::ifstream in(path);
        require(in.good(), "cannot open modulus table '" + path + "'");
        std::vector<std::pair<double, double>> points;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream row(line);
            double r = 0.0, v = 0.0;
            if (row >> r >> v) points.emplace_back(r, v);
        }
        return Modulus::from_table(path, std::move(points));
    }
    const CatalogCall call = parse_catalog_call(text);
    if (call.name == "linear") {
        require(call.args.size() == 1, "modulus 'linear' takes 1 argument");
        return Modulus::linear(call.args[0]);
    }
    if (call.name == "sqrt") {
        require(call.args.empty(), "modulus 'sqrt' takes no arguments");
        return Modulus::sqrt_modulus();
    }
    if (call.name == "rlogr") {
        require(call.args.empty(), "modulus 'rlogr' takes no arguments");
        return Modulus::rlogr();
    }
    if (call.name == "rlogr_sqrt") {
        require(call.args.empty(), "modulus 'rlogr_sqrt' takes no arguments");
        return Modulus::rlogr_sqrt();
    }
    throw ValidationError("unknown modulus '" + call.name + "'");
}

struct Driver {
    std::function<double(double, double)> fn;  // (s, y)
    double lip = 0.0;
    double bound = 0.0;
};

Driver make_driver(const std::string& text) {
    const CatalogCall call = parse_catalog_call(text);
    if (call.name == "zero") {
        require(call.args.empty(), "driver 'zero' takes no arguments");
        return {[](double, double) { return 0.0; }, 0.0, 0.0};
    }
    if (call.name == "constant") {
        require(call.args.size() == 1, "driver 'constant' takes 1 argument");
        const double c = call.args[0];
        return {[c](double, double) { return c; }, 0.0, std::fabs(c)};
    }
    if (call.name == "linear") {
        require(call.args.size() == 1, "driver 'linear' takes 1 argument");
        const double a = call.args[0];
        return {[a](double, double y) { return a * y; }, std::fabs(a), 0.0};
    }
    throw ValidationError("unknown driver '" + call.name + "'");
}

UncertaintySet read_uncertainty(const Config& cfg) {
    if (cfg.has("uncertainty", "sigma2_min")) {
        const double lo = cfg.get_double("uncertainty", "sigma2_min");
        const double hi = cfg.get_double("uncertainty", "sigma2_max");
        const auto interior =
            static_cast<std::size_t>(cfg.get_int("uncertainty", "interior", 0));
        return UncertaintySet::interval(lo, hi, interior);
    }
    const auto d = static_cast<std::size_t>(cfg.get_int("uncertainty", "d"));
    require(d >= 1, "uncertainty.d must be at least 1");
    std::vector<Matd> gammas;
    for (std::size_t i = 0; cfg.has("uncertainty", "gamma." + std::to_string(i)); ++i) {
        const auto flat = cfg.get_doubles("uncertainty", "gamma." + std::to_string(i));
        require(flat.size() == d * d, "uncertainty.gamma." + std::to_string(i) + " needs " +
                                          std::to_string(d * d) + " entries (row-major)");
        Matd g(d, d);
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c) g(r, c) = flat[r * d + c];
        gammas.push_back(std::move(g));
    }
    require(!gammas.empty(),
            "matrix uncertainty needs gamma.0, gamma.1, ... alongside uncertainty.d");
    return UncertaintySet(d, std::move(gammas));
}

TimeGrid read_grid(const Config& cfg) {
    const double horizon = cfg.get_double("grid", "horizon");
    const auto n_steps = static_cast<std::size_t>(cfg.get_int("grid", "n_steps"));
    return TimeGrid(horizon, n_steps);
}

BoundaryMode read_boundary(const Config& cfg) {
    const std::string mode = cfg.get_string("gheat", "boundary", "extrapolate");
    if (mode == "extrapolate") return BoundaryMode::linear_extrapolation;
    if (mode == "clamp") return BoundaryMode::clamped;
    throw ValidationError("gheat.boundary must be 'extrapolate' or 'clamp', got '" + mode + "'");
}

PathPayoff terminal_payoff(std::function<double(double)> phi) {
    return [phi = std::move(phi)](const PathBundle& b) { return phi(b.b_path.back()[0]); };
}

void maybe_plot(SvgPlot& plot, const std::string& out_dir, std::vector<std::string>& files) {
    plot.write(out_dir + "/plot.svg");
    files.push_back("plot.svg");
}

bool all_positive(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x > 0.0; });
}

// Largest observed per-node contraction factor over the first transitions:
// e_m(t_k) <= c * integral_0^{t_k} rho(e_{m-1}) ds with rho deferred to the
// envelope recursion, so the fit uses rho = identity on the raw profile sums.
double fit_contraction(const PicardTrace& trace, double dt) {
    double c_fit = 0.0;
    const std::size_t transitions = std::min<std::size_t>(trace.node_errors.size(), 4);
    for (std::size_t m = 1; m < transitions; ++m) {
        double acc = 0.0;
        const auto& prev = trace.node_errors[m - 1];
        const auto& cur = trace.node_errors[m];
        for (std::size_t k = 0; k + 1 < cur.size(); ++k) {
            acc += prev[k + 1] * dt;
            if (acc > 0.0 && cur[k + 1] > 0.0) c_fit = std::max(c_fit, cur[k + 1] / acc);
        }
    }
    return c_fit;
}

std::vector<double> envelope_column(const PicardTrace& trace, const Modulus& rho, double dt) {
    const std::size_t m_count = trace.errors().size();
    std::vector<double> sup_env(m_count, 0.0);
    if (m_count == 0 || trace.node_errors.empty()) return sup_env;
    const double c_fit = fit_contraction(trace, dt);
    if (c_fit == 0.0) {
        sup_env[0] = *std::max_element(trace.node_errors[0].begin(), trace.node_errors[0].end());
        return sup_env;
    }
    const auto env =
        iterated_picard_envelope(rho, trace.node_errors[0], dt, 1.1 * c_fit, m_count - 1);
    for (std::size_t m = 0; m < m_count; ++m)
        sup_env[m] = *std::max_element(env[m].begin(), env[m].end());
    return sup_env;
}

Modulus sum_modulus(const Modulus& rho1, const Modulus& rho3) {
    auto r1 = rho1;
    auto r3 = rho3;
    return Modulus(
        rho1.name() + "+" + rho3.name(), [r1, r3](double r) { return r1(r) + r3(r); },
        std::min(rho1.valid_max(), rho3.valid_max()), std::min(rho1.eval_max(), rho3.eval_max()),
        false, true, std::max(rho1.probe_floor(), rho3.probe_floor()));
}

Runner parse_gheat(Config& cfg, std::uint64_t /*seed*/) {
    const auto phi = make_payoff_1d(cfg.get_string("gheat", "payoff"));
    const auto n_x = static_cast<std::size_t>(cfg.get_int("gheat", "n_x", 401));
    const auto n_t = static_cast<std::size_t>(cfg.get_int("gheat", "n_t", 0));
    const double half_width = cfg.get_double("gheat", "half_width", 0.0);
    const BoundaryMode boundary = read_boundary(cfg);
    const double t_final = cfg.get_double("grid", "horizon", 1.0);
    const UncertaintySet uset = read_uncertainty(cfg);
    require(uset.dimension() == 1, "gheat runs on d = 1 uncertainty sets");

    return [=](const std::string& out_dir) {
        const PdeConfig pde = make_pde_config(uset, t_final, n_x, n_t, half_width, boundary);
        const std::vector<double> phi0 = sample_on_grid(pde, phi);
        const std::vector<double> u = solve_gheat(pde, phi0, t_final);
        CsvWriter csv(out_dir + "/result.csv", {"x", "u", "phi"});
        std::vector<double> xs(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) {
            xs[i] = pde.x(i);
            csv.row({xs[i], u[i], phi0[i]});
        }
        std::vector<std::string> files{"result.csv"};
        SvgPlot plot("u_t = G(u_xx)", "x", "u");
        plot.add_line(xs, u, "u(T, x)");
        plot.add_line(xs, phi0, "u(0, x)");
        maybe_plot(plot, out_dir, files);
        return files;
    };
}

Runner parse_expect(Config& cfg, std::uint64_t seed) {
    const std::string payoff_text = cfg.get_string("expect", "payoff");
    const auto phi = make_payoff_1d(payoff_text);
    const auto n_paths = static_cast<std::size_t>(cfg.get_int("expect", "n_paths", 10000));
    const auto cap = static_cast<std::size_t>(cfg.get_int("expect", "control_cap", 27));
    const auto lattice_steps =
        static_cast<std::size_t>(cfg.get_int("expect", "lattice_steps", 200));
    const auto n_x = static_cast<std::size_t>(cfg.get_int("expect", "n_x", 401));
    const TimeGrid grid = read_grid(cfg);  // scenario-control grid for the MC estimate
    const UncertaintySet uset = read_uncertainty(cfg);

    return [=](const std::string& out_dir) {
        const auto controls = enumerate_controls(uset, grid, cap);
        const SampleTable table = scenario_means(terminal_payoff(phi), uset, controls, n_paths, seed);
        CsvWriter csv(out_dir + "/result.csv",
                      {"method", "value", "std_error", "n_paths", "n_scenarios"});
        csv.row("mc_open_loop", {table.sup(), table.std_error(table.argmax()),
                                 static_cast<double>(n_paths), static_cast<double>(table.means.size())});
        if (uset.dimension() == 1) {
            const auto lat =
                upper_expectation_lattice(phi, uset, TimeGrid(grid.horizon, lattice_steps));
            csv.row("lattice_dp", {lat.value, 0.0, 0.0, static_cast<double>(lat.n_scenarios)});
            const double pde = gnormal_expectation(uset, phi, grid.horizon, n_x);
            csv.row("gheat_pde", {pde, 0.0, 0.0, 0.0});
        }
        std::vector<std::string> files{"result.csv"};
        std::vector<double> idx(table.means.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<double>(i);
        if (idx.size() >= 2) {
            SvgPlot plot("scenario means of " + payoff_text, "scenario", "mean");
            plot.add_line(idx, table.means, "mean");
            maybe_plot(plot, out_dir, files);
        }
        return files;
    };
}

Runner parse_sde(Config& cfg, std::uint64_t seed) {
    CoefficientSet cf =
        make_coefficients_1d(cfg.get_string("sde", "drift"), cfg.get_string("sde", "sigma"));
    const double x0 = cfg.get_double("sde", "x0", 0.0);
    const auto path_index = static_cast<std::uint64_t>(cfg.get_int("sde", "path_index", 0));
    const TimeGrid grid = read_grid(cfg);
    const UncertaintySet uset = read_uncertainty(cfg);

    return [=, cf = std::move(cf)](const std::string& out_dir) {
        SdeProblem problem{cf, Vecd{x0}, grid, uset, cf.regime};
        std::vector<std::vector<double>> columns;
        std::vector<std::string> header{"t"};
        for (std::size_t g = 0; g < uset.size(); ++g) {
            const auto control = constant_control(uset, grid, static_cast<std::uint32_t>(g));
            const auto path = euler_solve(problem, control, seed, path_index);
            std::vector<double> col(path.size());
            for (std::size_t k = 0; k < path.size(); ++k) col[k] = path[k][0];
            columns.push_back(std::move(col));
            header.push_back("x_gamma" + std::to_string(g));
        }
        CsvWriter csv(out_dir + "/result.csv", header);
        std::vector<double> ts(grid.n_steps + 1);
        for (std::size_t k = 0; k <= grid.n_steps; ++k) {
            ts[k] = grid.time(k);
            std::vector<double> row{ts[k]};
            for (const auto& col : columns) row.push_back(col[k]);
            csv.row(row);
        }
        std::vector<std::string> files{"result.csv"};
        SvgPlot plot(cf.tag, "t", "x");
        for (std::size_t g = 0; g < columns.size(); ++g)
            plot.add_line(ts, columns[g], header[g + 1]);
        maybe_plot(plot, out_dir, files);
        return files;
    };
}

Runner parse_picard(Config& cfg, std::uint64_t seed) {
    CoefficientSet cf =
        make_coefficients_1d(cfg.get_string("picard", "drift"), cfg.get_string("picard", "sigma"));
    const double x0 = cfg.get_double("picard", "x0", 1.0);
    McConfig mc;
    mc.n_paths = static_cast<std::size_t>(cfg.get_int("picard", "n_paths", 2000));
    mc.control_cap = static_cast<std::size_t>(cfg.get_int("picard", "control_cap", 8));
    mc.seed = seed;
    const bool split = cf.regime == ModulusRegime::h1ph2p;
    mc.tolerance = cfg.get_double("picard", "tolerance", split ? 1e-4 : 0.0);
    const auto n_iter = static_cast<std::size_t>(cfg.get_int("picard", "n_iter", 10));
    const auto inner_iter = static_cast<std::size_t>(cfg.get_int("picard", "inner_iter", 40));
    std::vector<double> caps;
    if (cfg.has("picard", "caps")) caps = cfg.get_doubles("picard", "caps");
    const TimeGrid grid = read_grid(cfg);
    const UncertaintySet uset = read_uncertainty(cfg);

    return [=, cf = std::move(cf), caps = std::move(caps)](const std::string& out_dir) {
        SdeProblem problem{cf, Vecd{x0}, grid, uset, cf.regime};
        const PicardTrace trace = split ? picard_solve_h2p(problem, n_iter, inner_iter, mc, caps)
                                        : picard_solve_h2(problem, n_iter, mc);
        const Modulus rho_env = split ? sum_modulus(*cf.rho1, *cf.rho3) : *cf.rho;
        const auto envelope = envelope_column(trace, rho_env, grid.dt());
        const auto& primary = trace.errors();
        CsvWriter csv(out_dir + "/result.csv", {"m", "error", "error_sq", "error_abs", "envelope"});
        std::vector<double> ms(primary.size());
        for (std::size_t m = 0; m < primary.size(); ++m) {
            ms[m] = static_cast<double>(m);
            csv.row({ms[m], primary[m], trace.errors_sq[m], trace.errors_abs[m], envelope[m]});
        }
        std::vector<std::string> files{"result.csv"};
        if (primary.size() >= 2) {
            SvgPlot plot("iteration error, " + cf.tag, "m", "error");
            plot.set_log_y(all_positive(primary) && all_positive(envelope));
            plot.add_line(ms, primary, "error");
            plot.add_line(ms, envelope, "envelope");
            maybe_plot(plot, out_dir, files);
        }
        return files;
    };
}

Runner parse_bihari(Config& cfg, std::uint64_t /*seed*/) {
    const Modulus rho = make_modulus(cfg.get_string("bihari", "rho"));
    const double a = cfg.get_double("bihari", "a");
    const double horizon = cfg.get_double("bihari", "horizon", 1.0);
    const auto n_points = static_cast<std::size_t>(cfg.get_int("bihari", "n_points", 65));
    require(n_points >= 2, "bihari.n_points must be at least 2");
    std::vector<double> beta_times, beta_values;
    double beta_const = 0.0;
    const bool stepwise = cfg.has("bihari", "beta_times");
    if (stepwise) {
        beta_times = cfg.get_doubles("bihari", "beta_times");
        beta_values = cfg.get_doubles("bihari", "beta_values");
    } else {
        beta_const = cfg.get_double("bihari", "beta");
    }

    return [=](const std::string& out_dir) {
        const BihariEnvelope env = stepwise ? BihariEnvelope(rho, beta_times, beta_values)
                                            : BihariEnvelope(rho, beta_const, horizon);
        CsvWriter csv(out_dir + "/result.csv", {"t", "bound", "overflow"});
        std::vector<double> ts(n_points), bounds(n_points);
        bool finite = true;
        for (std::size_t i = 0; i < n_points; ++i) {
            ts[i] = env.horizon() * static_cast<double>(i) / static_cast<double>(n_points - 1);
            const BihariBound b = bihari_bound(env, a, ts[i]);
            bounds[i] = b.value;
            finite = finite && std::isfinite(b.value);
            csv.row({ts[i], b.value, b.overflow ? 1.0 : 0.0});
        }
        std::vector<std::string> files{"result.csv"};
        if (finite) {
            SvgPlot plot("Bihari bound, rho = " + rho.name(), "t", "bound");
            plot.add_line(ts, bounds, "bound");
            maybe_plot(plot, out_dir, files);
        }
        return files;
    };
}

Runner parse_bsde(Config& cfg, std::uint64_t /*seed*/) {
    const auto xi = make_payoff_1d(cfg.get_string("bsde", "xi"));
    const Driver f = make_driver(cfg.get_string("bsde", "f", "zero"));
    const Driver g = make_driver(cfg.get_string("bsde", "g", "zero"));
    const auto n_iter = static_cast<std::size_t>(cfg.get_int("bsde", "n_iter", 40));
    const double tolerance = cfg.get_double("bsde", "tolerance", 1e-10);
    const TimeGrid grid = read_grid(cfg);
    const UncertaintySet uset = read_uncertainty(cfg);

    return [=](const std::string& out_dir) {
        BsdeProblem problem{xi,
                            f.fn,
                            g.fn,
                            f.lip + g.lip,
                            f.bound + g.bound,
                            Modulus::linear(std::max(1.0, f.lip + g.lip)),
                            grid,
                            uset};
        const BsdeSolution sol = bsde_solve(problem, n_iter, tolerance);
        CsvWriter csv(out_dir + "/result.csv", {"t", "y_center"});
        std::vector<double> ts(grid.n_steps + 1), ys(grid.n_steps + 1);
        for (std::size_t k = 0; k <= grid.n_steps; ++k) {
            ts[k] = grid.time(k);
            ys[k] = sol.y[k][k];
            csv.row({ts[k], ys[k]});
        }
        std::vector<std::string> files{"result.csv"};
        SvgPlot plot("Y along the lattice center", "t", "Y_t");
        plot.add_line(ts, ys, "Y");
        maybe_plot(plot, out_dir, files);
        return files;
    };
}

Runner parse_mollify(Config& cfg, std::uint64_t /*seed*/) {
    const std::string payoff_text = cfg.get_string("mollify", "payoff");
    const auto g1 = make_payoff_1d(payoff_text);
    std::vector<double> widths{0.1, 0.01};
    if (cfg.has("mollify", "widths")) widths = cfg.get_doubles("mollify", "widths");
    for (const double w : widths) require(w > 0.0, "mollify.widths must be positive");
    const double half_width = cfg.get_double("mollify", "half_width", 2.0);
    const auto n_x = static_cast<std::size_t>(cfg.get_int("mollify", "n_x", 201));
    const auto quad = static_cast<std::size_t>(cfg.get_int("mollify", "quad_points", 16));
    require(n_x >= 2, "mollify.n_x must be at least 2");

    return [=](const std::string& out_dir) {
        const ScalarField field = [&](const Vecd& v) { return g1(v[0]); };
        std::vector<std::string> header{"x", "g"};
        std::vector<ScalarField> smooth;
        for (const double w : widths) {
            smooth.push_back(mollify(field, 1, w, quad));
            header.push_back("w" + csv_number(w));
        }
        CsvWriter csv(out_dir + "/result.csv", header);
        std::vector<double> xs(n_x);
        std::vector<std::vector<double>> cols(widths.size() + 1, std::vector<double>(n_x));
        for (std::size_t i = 0; i < n_x; ++i) {
            xs[i] = -half_width +
                    2.0 * half_width * static_cast<double>(i) / static_cast<double>(n_x - 1);
            std::vector<double> row{xs[i]};
            cols[0][i] = g1(xs[i]);
            row.push_back(cols[0][i]);
            for (std::size_t j = 0; j < widths.size(); ++j) {
                cols[j + 1][i] = smooth[j]({xs[i]});
                row.push_back(cols[j + 1][i]);
            }
            csv.row(row);
        }
        std::vector<std::string> files{"result.csv"};
        SvgPlot plot("mollified " + payoff_text, "x", "g_w");
        plot.add_line(xs, cols[0], "g");
        for (std::size_t j = 0; j < widths.size(); ++j)
            plot.add_line(xs, cols[j + 1], header[j + 2]);
        maybe_plot(plot, out_dir, files);
        return files;
    };
}

Runner parse_axioms(Config& cfg, std::uint64_t seed) {
    const auto phi_x = make_payoff_1d(cfg.get_string("axioms", "payoff_x", "square_plus(0.1)"));
    const auto phi_y = make_payoff_1d(cfg.get_string("axioms", "payoff_y", "square"));
    const double lambda = cfg.get_double("axioms", "lambda", 2.0);
    const double c = cfg.get_double("axioms", "c", 5.0);
    const auto n_paths = static_cast<std::size_t>(cfg.get_int("axioms", "n_paths", 10000));
    const auto cap = static_cast<std::size_t>(cfg.get_int("axioms", "control_cap", 27));
    const TimeGrid grid = read_grid(cfg);
    const UncertaintySet uset = read_uncertainty(cfg);

    return [=](const std::string& out_dir) {
        const auto controls = enumerate_controls(uset, grid, cap);
        const AxiomReport report = check_sublinearity(terminal_payoff(phi_x), terminal_payoff(phi_y),
                                                      lambda, c, uset, controls, n_paths, seed);
        CsvWriter csv(out_dir + "/result.csv", {"axiom", "slack"});
        csv.row("monotonicity", {report.monotonicity_slack});
        csv.row("constant", {report.constant_slack});
        csv.row("subadditivity", {report.subadditivity_slack});
        csv.row("homogeneity", {report.homogeneity_slack});
        csv.row("domination_margin", {report.domination_margin});
        csv.row("worst", {report.worst_slack()});
        return std::vector<std::string>{"result.csv"};
    };
}

void write_manifest(const Config& cfg, const std::string& out_dir) {
    std::ofstream out(out_dir + "/manifest.txt", std::ios::binary);
    require(out.good(), "cannot write " + out_dir + "/manifest.txt");
    out << "# " << kVersion << "\n";
    out << "# isa = " << kernels::isa_name(kernels::active_isa()) << "\n";
    out << "# threads = " << thread_count() << "\n";
    std::string current;
    for (const auto& [section, key, value] : cfg.entries()) {
        if (section != current) {
            out << "[" << section << "]\n";
            current = section;
        }
        out << key << " = " << value << "\n";
    }
}

}  // namespace

RunResult run_experiment(Config cfg, const RunOptions& opts) {
    const std::string kind = cfg.get_string("experiment", "kind");
    auto seed = static_cast<std::uint64_t>(cfg.get_int("experiment", "seed", 1));
    if (opts.seed) seed = *opts.seed;
    std::string out_dir = cfg.get_string("experiment", "out", ".");
    if (opts.out_dir) out_dir = *opts.out_dir;

    Runner runner;
    if (kind == "gheat") runner = parse_gheat(cfg, seed);
    else if (kind == "expect") runner = parse_expect(cfg, seed);
    else if (kind == "sde") runner = parse_sde(cfg, seed);
    else if (kind == "picard") runner = parse_picard(cfg, seed);
    else if (kind == "bihari") runner = parse_bihari(cfg, seed);
    else if (kind == "bsde") runner = parse_bsde(cfg, seed);
    else if (kind == "mollify") runner = parse_mollify(cfg, seed);
    else if (kind == "axioms") runner = parse_axioms(cfg, seed);
    else
        throw ValidationError(
            "unknown experiment kind '" + kind +
            "' (expected gheat, expect, sde, picard, bihari, bsde, mollify or axioms)");

    cfg.require_all_consumed();

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    require(!ec, "cannot create output directory '" + out_dir + "': " + ec.message());

    RunResult result;
    result.kind = kind;
    result.out_dir = out_dir;
    result.files = runner(out_dir);

    cfg.set("experiment", "seed", std::to_string(seed));
    cfg.set("experiment", "out", out_dir);
    write_manifest(cfg, out_dir);
    result.files.push_back("manifest.txt");
    return result;
}

std::string catalog_text() {
    std::ostringstream out;
    out << "payoffs (1-d terminal functionals)\n"
        << "  constant(c)     c\n"
        << "  linear(k)       k*x\n"
        << "  square          x^2\n"
        << "  square_plus(c)  x^2 + c\n"
        << "  neg_square      -x^2\n"
        << "  abs             |x|\n"
        << "  neg_abs         -|x|\n"
        << "  exp_half        exp(x/2)\n"
        << "  neg_cosh        -cosh(x)\n"
        << "  tanh            tanh(x)\n"
        << "  cos             cos(x)\n"
        << "drifts\n"
        << "  zero\n"
        << "  linear_drift(k)     k*x\n"
        << "  affine_drift(k,c)   k*x + c\n"
        << "  rlogr_drift(scale)  scale * sign(x) * |x|log(1/|x|), split regime\n"
        << "diffusions\n"
        << "  zero\n"
        << "  constant_sigma(s)\n"
        << "  lipschitz_sigma(k,c)  k*x + c\n"
        << "moduli\n"
        << "  linear(k) | sqrt | rlogr | rlogr_sqrt | table:<csv path>\n"
        << "drivers (bsde)\n"
        << "  zero | constant(c) | linear(a)\n";
    return out.str();
}

}  // namespace gbmlab

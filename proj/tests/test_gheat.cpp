#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "gbmlab/expectation.hpp"
#include "gbmlab/gheat.hpp"

using namespace gbmlab;

namespace {

const double kMeanAbsUnit = std::sqrt(2.0 / 3.141592653589793);

UncertaintySet band() { return UncertaintySet::interval(0.5, 1.0, 1); }

// classical explicit heat scheme with one diffusion coefficient, kept in the
// exact evaluation order of the production stencil
std::vector<double> classical_heat(std::vector<double> u, std::size_t n_t, double c) {
    std::vector<double> next(u.size());
    const std::size_t last = u.size() - 1;
    for (std::size_t k = 0; k < n_t; ++k) {
        for (std::size_t i = 1; i < last; ++i) {
            const double d2 = (u[i - 1] - 2.0 * u[i]) + u[i + 1];
            next[i] = u[i] + c * d2;
        }
        next[0] = 2.0 * next[1] - next[2];
        next[last] = 2.0 * next[last - 1] - next[last - 2];
        u.swap(next);
    }
    return u;
}

}  // namespace

TEST_CASE("config defaults pick the tight monotone step count") {
    const PdeConfig cfg = make_pde_config(band(), 1.0);
    CHECK(cfg.n_x == 401);
    CHECK(cfg.half_width == 8.0);
    CHECK(cfg.dx() == doctest::Approx(0.04).epsilon(1e-15));
    CHECK(cfg.var_lo == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(cfg.var_hi == 1.0);
    // smallest admissible step count: one step fewer breaks the bound
    const double dx2 = cfg.dx() * cfg.dx();
    CHECK(1.0 / static_cast<double>(cfg.n_t) * cfg.var_hi <= dx2 * (1.0 + 1e-12));
    CHECK(1.0 / static_cast<double>(cfg.n_t - 1) * cfg.var_hi > dx2);
    CHECK_NOTHROW(check_monotone_step(cfg, 1.0));
}

TEST_CASE("config validation rejects malformed requests") {
    CHECK_THROWS_AS(make_pde_config(band(), 0.0), ValidationError);
    CHECK_THROWS_AS(make_pde_config(band(), 1.0, 2), ValidationError);
    const auto multi = UncertaintySet(2, {Matd::identity(2)});
    CHECK_THROWS_AS(make_pde_config(multi, 1.0), ValidationError);
    const auto flat = UncertaintySet::interval(0.0, 0.0);
    CHECK_THROWS_AS(make_pde_config(flat, 1.0), ValidationError);
}

TEST_CASE("undersized step counts are refused with the admissible bound") {
    CHECK_THROWS_WITH_AS(make_pde_config(band(), 1.0, 401, 100),
                         doctest::Contains("admissible"), ValidationError);
}

TEST_CASE("space grid is bitwise symmetric about zero") {
    const PdeConfig cfg = make_pde_config(band(), 1.0);
    const std::size_t center = (cfg.n_x - 1) / 2;
    CHECK(cfg.x(center) == 0.0);
    for (std::size_t k : {1u, 17u, 100u, 200u})
        CHECK(cfg.x(center + k) == -cfg.x(center - k));
    CHECK(cfg.x(0) == -8.0);
    CHECK(cfg.x(cfg.n_x - 1) == 8.0);
}

TEST_CASE("sampling and solving validate their inputs") {
    const PdeConfig cfg = make_pde_config(band(), 1.0);
    CHECK_THROWS_AS(sample_on_grid(cfg, nullptr), ValidationError);
    CHECK_THROWS_AS(solve_gheat(cfg, std::vector<double>(7, 0.0), 1.0), ValidationError);
    std::vector<double> bad(cfg.n_x, 0.0);
    bad[5] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(solve_gheat(cfg, bad, 1.0), ValidationError);
    CHECK_THROWS_AS(gnormal_expectation(band(), [](double x) { return x; }, 1.0, 400),
                    ValidationError);
}

TEST_CASE("constants are preserved bitwise in both boundary modes") {
    for (const BoundaryMode mode : {BoundaryMode::linear_extrapolation, BoundaryMode::clamped}) {
        const PdeConfig cfg = make_pde_config(band(), 0.5, 201, 0, 4.0, mode);
        const auto u = solve_gheat(cfg, std::vector<double>(cfg.n_x, 3.7), 0.5);
        for (double v : u) CHECK(v == 3.7);
    }
}

TEST_CASE("linear data is a steady state") {
    const PdeConfig cfg = make_pde_config(band(), 1.0);
    const auto u = solve_gheat(cfg, sample_on_grid(cfg, [](double x) { return x; }), 1.0);
    const std::size_t center = (cfg.n_x - 1) / 2;
    CHECK(std::fabs(u[center]) <= 1e-12);
    for (std::size_t i = 0; i < cfg.n_x; ++i) CHECK(u[i] == doctest::Approx(cfg.x(i)).epsilon(1e-10));
}

TEST_CASE("convex and concave quadratics reach the variance extremes") {
    const double hi = gnormal_expectation(band(), [](double x) { return x * x; }, 1.0);
    CHECK(hi == doctest::Approx(1.0).epsilon(1e-3));
    const double lo = gnormal_expectation(band(), [](double x) { return -x * x; }, 1.0);
    CHECK(lo == doctest::Approx(-0.5).epsilon(1e-3));
}

TEST_CASE("absolute value matches the Gaussian mean at the extremal variances") {
    const double hi = gnormal_expectation(band(), [](double x) { return std::fabs(x); }, 1.0);
    CHECK(std::fabs(hi - kMeanAbsUnit) <= 2e-3);
    const double lo = gnormal_expectation(band(), [](double x) { return -std::fabs(x); }, 1.0);
    CHECK(lo == doctest::Approx(-kMeanAbsUnit * std::sqrt(0.5)).epsilon(0.01));
}

TEST_CASE("odd bounded data: zero for one variance, skewed upward for a band") {
    const auto single = UncertaintySet::interval(1.0, 1.0);
    const double u0 = gnormal_expectation(single, [](double x) { return std::tanh(x); }, 1.0);
    CHECK(std::fabs(u0) <= 1e-12);

    // with distinct variances the scheme is not odd-symmetric and the value is
    // genuinely positive; the lattice root for the same payoff must agree
    const double band_value =
        gnormal_expectation(band(), [](double x) { return std::tanh(x); }, 1.0);
    CHECK(band_value > 0.005);
    const auto lattice = upper_expectation_lattice([](double x) { return std::tanh(x); }, band(),
                                                   TimeGrid(1.0, 256));
    CHECK(std::fabs(band_value - lattice.value) <= 5e-3);
}

TEST_CASE("comparison principle holds pointwise for dominated data") {
    // double the step count so the stencil keeps strictly positive weights
    PdeConfig cfg = make_pde_config(band(), 1.0, 201, 0, 6.0, BoundaryMode::clamped);
    cfg.n_t *= 2;
    const auto u_hi = solve_gheat(cfg, sample_on_grid(cfg, [](double x) { return std::fabs(x); }),
                                  1.0);
    const auto u_lo = solve_gheat(cfg, sample_on_grid(cfg, [](double x) { return 0.5 * x; }), 1.0);
    for (std::size_t i = 0; i < cfg.n_x; ++i) CHECK(u_hi[i] >= u_lo[i]);
}

TEST_CASE("interior evolution is translation equivariant bitwise") {
    PdeConfig cfg;
    cfg.half_width = 2.0;
    cfg.n_x = 101;
    cfg.n_t = 10;
    cfg.var_lo = 0.5;
    cfg.var_hi = 1.0;
    cfg.boundary = BoundaryMode::clamped;
    const double t_final = 0.008;  // dt*var_hi/dx^2 = 0.5
    CHECK_NOTHROW(check_monotone_step(cfg, t_final));

    const auto phi = sample_on_grid(
        cfg, [](double x) { return std::exp(-10.0 * (x - 0.3) * (x - 0.3)); });
    const std::size_t shift = 7;
    std::vector<double> shifted(cfg.n_x, phi.front());
    for (std::size_t j = shift; j < cfg.n_x; ++j) shifted[j] = phi[j - shift];

    const auto u = solve_gheat(cfg, phi, t_final);
    const auto u_shifted = solve_gheat(cfg, shifted, t_final);
    // compare where neither dependence cone touches the boundary or the pad
    for (std::size_t i = shift + cfg.n_t + 1; i + cfg.n_t + 1 < cfg.n_x; ++i)
        CHECK(u_shifted[i] == u[i - shift]);
}

TEST_CASE("a single variance reduces to the classical explicit scheme bitwise") {
    const auto single = UncertaintySet::interval(0.8, 0.8);
    const PdeConfig cfg = make_pde_config(single, 0.5, 101, 0, 3.0);
    const auto phi =
        sample_on_grid(cfg, [](double x) { return std::sin(x) + 0.3 * x * x; });

    const double dt = 0.5 / static_cast<double>(cfg.n_t);
    const double c = 0.5 * dt * cfg.var_hi / (cfg.dx() * cfg.dx());
    const auto expected = classical_heat(phi, cfg.n_t, c);
    const auto got = solve_gheat(cfg, phi, 0.5);
    for (std::size_t i = 0; i < cfg.n_x; ++i) CHECK(got[i] == expected[i]);
}

TEST_CASE("pde and lattice agree on smooth convex and concave payoffs") {
    const TimeGrid grid(1.0, 512);
    const double pde_convex =
        gnormal_expectation(band(), [](double x) { return std::exp(0.5 * x); }, 1.0);
    const auto lat_convex =
        upper_expectation_lattice([](double x) { return std::exp(0.5 * x); }, band(), grid);
    CHECK(std::fabs(pde_convex - lat_convex.value) <= 5e-3);
    CHECK(pde_convex == doctest::Approx(std::exp(0.125)).epsilon(5e-3));

    const double pde_concave =
        gnormal_expectation(band(), [](double x) { return -std::cosh(x); }, 1.0);
    const auto lat_concave =
        upper_expectation_lattice([](double x) { return -std::cosh(x); }, band(), grid);
    CHECK(std::fabs(pde_concave - lat_concave.value) <= 5e-3);
    CHECK(pde_concave == doctest::Approx(-std::exp(0.25)).epsilon(5e-3));
}

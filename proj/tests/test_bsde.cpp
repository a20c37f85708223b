#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "gbmlab/expectation.hpp"
#include "gbmlab/solvers.hpp"

using namespace gbmlab;

namespace {

std::function<double(double, double)> zero_driver() {
    return [](double, double) { return 0.0; };
}

BsdeProblem zero_driver_problem(std::function<double(double)> xi, const TimeGrid& grid,
                                const UncertaintySet& uset) {
    return BsdeProblem{std::move(xi), zero_driver(), zero_driver(), 0.0,  0.0,
                       Modulus::linear(1.0),         grid,          uset};
}

}  // namespace

TEST_CASE("backward problem validation rejects bad inputs") {
    const auto uset = UncertaintySet::interval(0.5, 1.0);
    const TimeGrid grid(1.0, 8);

    BsdeProblem no_xi = zero_driver_problem(nullptr, grid, uset);
    CHECK_THROWS_WITH_AS(validate_bsde_problem(no_xi), doctest::Contains("terminal"),
                         ValidationError);

    BsdeProblem bad_dim =
        zero_driver_problem([](double x) { return x; }, grid,
                            UncertaintySet(2, {Matd::identity(2)}));
    CHECK_THROWS_WITH_AS(validate_bsde_problem(bad_dim), doctest::Contains("d = 1"),
                         ValidationError);

    BsdeProblem bad_rho = zero_driver_problem([](double x) { return x; }, grid, uset);
    bad_rho.rho = Modulus("convex probe", [](double r) { return r * r; }, 1.0, 1.0, false, true);
    CHECK_THROWS_WITH_AS(validate_bsde_problem(bad_rho), doctest::Contains("concave"),
                         ValidationError);

    BsdeProblem bad_osgood = zero_driver_problem([](double x) { return x; }, grid, uset);
    bad_osgood.rho = Modulus::sqrt_modulus();
    CHECK_THROWS_WITH_AS(validate_bsde_problem(bad_osgood), doctest::Contains("Osgood"),
                         ValidationError);

    BsdeProblem bad_growth = zero_driver_problem([](double x) { return x; }, grid, uset);
    bad_growth.f = [](double, double y) { return 3.0 + 0.5 * std::fabs(y); };
    bad_growth.beta = 1.0;
    bad_growth.c_growth = 0.1;
    bad_growth.rho = Modulus::linear(0.5);
    CHECK_THROWS_WITH_AS(validate_bsde_problem(bad_growth), doctest::Contains("growth"),
                         ValidationError);
}

TEST_CASE("zero drivers preserve a constant terminal value at every node") {
    const auto uset = UncertaintySet::interval(0.5, 1.0, 1);
    const TimeGrid grid(1.0, 50);
    const BsdeProblem pb = zero_driver_problem([](double) { return 3.7; }, grid, uset);

    const BsdeSolution sol = bsde_solve(pb, 5);
    CHECK(sol.converged);
    CHECK(sol.stages == 2);
    CHECK(sol.stage_changes[0] == 3.7);
    CHECK(sol.stage_changes[1] == 0.0);
    for (const auto& slice : sol.y)
        for (double v : slice) CHECK(v == 3.7);
}

TEST_CASE("zero drivers reduce to the conditional lattice expectation") {
    const auto uset = UncertaintySet::interval(0.5, 1.0, 1);
    const TimeGrid grid(1.0, 64);
    const BsdeProblem pb = zero_driver_problem([](double x) { return x * x; }, grid, uset);

    const BsdeSolution sol = bsde_solve(pb, 5);
    const Lattice lat = make_lattice(uset, grid);
    std::vector<double> terminal(lat.n_nodes(grid.n_steps));
    for (std::size_t j = 0; j < terminal.size(); ++j) {
        const double x = lat.state(grid.n_steps, j);
        terminal[j] = x * x;
    }
    const auto surface = conditional_g_expectation(lat, terminal);
    REQUIRE(surface.size() == sol.y.size());
    for (std::size_t k = 0; k < surface.size(); ++k) {
        REQUIRE(surface[k].size() == sol.y[k].size());
        for (std::size_t i = 0; i < surface[k].size(); ++i) CHECK(sol.y[k][i] == surface[k][i]);
    }
}

TEST_CASE("unit time driver integrates to the remaining horizon") {
    // Y_t solves Y = E^[0 + int_t^T 1 ds], so Y(t_k) = T - t_k at every node
    auto make_problem = [](const UncertaintySet& uset, std::size_t n_steps) {
        BsdeProblem pb = zero_driver_problem([](double) { return 0.0; }, TimeGrid(1.0, n_steps),
                                             uset);
        pb.f = [](double, double) { return 1.0; };
        pb.beta = 1.0;
        return pb;
    };

    SUBCASE("singleton alphabet, dyadic step") {
        const auto uset = UncertaintySet::interval(1.0, 1.0);
        const BsdeSolution sol = bsde_solve(make_problem(uset, 256), 5);
        CHECK(sol.converged);
        CHECK(sol.stages == 2);
        const double dt = 1.0 / 256.0;
        for (std::size_t k = 0; k <= 256; ++k) {
            const double want = static_cast<double>(256 - k) * dt;
            for (double v : sol.y[k]) CHECK(v == want);
        }
    }
    SUBCASE("volatility band, dyadic step") {
        const auto uset = UncertaintySet::interval(0.5, 1.0, 1);
        const BsdeSolution sol = bsde_solve(make_problem(uset, 256), 5);
        const double dt = 1.0 / 256.0;
        for (std::size_t k = 0; k <= 256; ++k) {
            const double want = static_cast<double>(256 - k) * dt;
            for (double v : sol.y[k]) CHECK(v == doctest::Approx(want).epsilon(2e-13));
        }
    }
}

TEST_CASE("squared terminal recovers the upper variance") {
    const auto uset = UncertaintySet::interval(0.5, 1.0, 1);
    const TimeGrid grid(1.0, 200);
    const BsdeProblem pb = zero_driver_problem([](double x) { return x * x; }, grid, uset);

    const BsdeSolution sol = bsde_solve(pb, 5);
    CHECK(sol.stages == 2);
    CHECK(sol.y[0][0] == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("quadratic-variation driver picks the matching variance extreme") {
    const auto uset = UncertaintySet::interval(0.5, 1.0, 1);
    const TimeGrid grid(0.5, 64);

    BsdeProblem up = zero_driver_problem([](double) { return 0.0; }, grid, uset);
    up.g = [](double, double) { return 1.0; };
    up.beta = 1.0;
    const BsdeSolution sol_up = bsde_solve(up, 5);
    CHECK(sol_up.stages == 2);
    CHECK(sol_up.y[0][0] == 0.5);  // sup_theta int g d<B> = var_hi * T

    BsdeProblem dn = zero_driver_problem([](double) { return 0.0; }, grid, uset);
    dn.g = [](double, double) { return -1.0; };
    dn.beta = 1.0;
    const BsdeSolution sol_dn = bsde_solve(dn, 5);
    // sup_theta of -<B>_T sits at var_lo; the realized lower covariance
    // carries the gamma = sqrt(var) round trip
    const double var_lo = uset.covariances()[0](0, 0);
    CHECK(sol_dn.y[0][0] == doctest::Approx(-var_lo * 0.5).epsilon(1e-12));
}

TEST_CASE("linear driver matches the exponential tilt of the terminal expectation") {
    const double a = 0.2;
    const auto uset = UncertaintySet::interval(0.5, 1.0, 1);
    const TimeGrid grid(1.0, 128);
    BsdeProblem pb = zero_driver_problem([](double x) { return x * x; }, grid, uset);
    pb.f = [a](double, double y) { return a * y; };
    pb.c_growth = a;
    pb.rho = Modulus::linear(a);

    const BsdeSolution sol = bsde_solve(pb, 40, 1e-10);
    CHECK(sol.converged);
    CHECK(sol.stages <= 25);
    // Y_t = e^{a(T-t)} E^[xi | F_t] for a terminal-only linear driver
    CHECK(sol.y[0][0] == doctest::Approx(std::exp(a) * 1.0).epsilon(0.02));

    // successive stage changes contract
    for (std::size_t m = 2; m < sol.stage_changes.size(); ++m)
        CHECK(sol.stage_changes[m] < sol.stage_changes[m - 1]);
}

TEST_CASE("backward solution composes across a split horizon") {
    const auto uset = UncertaintySet::interval(0.5, 1.0, 1);
    const TimeGrid full_grid(0.5, 64);
    const TimeGrid half_grid(0.25, 32);

    auto with_unit_f = [&](BsdeProblem pb) {
        pb.f = [](double, double) { return 1.0; };
        pb.beta = 1.0;
        return pb;
    };

    for (int with_driver = 0; with_driver <= 1; ++with_driver) {
        BsdeProblem full = zero_driver_problem([](double x) { return std::cos(x); }, full_grid,
                                               uset);
        if (with_driver) full = with_unit_f(std::move(full));
        const BsdeSolution sol_full = bsde_solve(full, 5);

        // the half-horizon lattice lands on the same nodes, so the slice at
        // t = 0.25 restates the full solve's terminal condition
        const Lattice lat = make_lattice(uset, full_grid);
        const std::vector<double> mid = sol_full.y[32];
        auto mid_payoff = [&, mid](double x) {
            const double pos = x / lat.dx + 32.0;
            const auto j = static_cast<std::size_t>(std::llround(pos));
            return mid[j];
        };
        BsdeProblem half = zero_driver_problem(mid_payoff, half_grid, uset);
        if (with_driver) half = with_unit_f(std::move(half));
        const BsdeSolution sol_half = bsde_solve(half, 5);

        for (std::size_t k = 0; k <= 32; ++k) {
            REQUIRE(sol_half.y[k].size() == sol_full.y[k].size());
            for (std::size_t i = 0; i < sol_half.y[k].size(); ++i)
                CHECK(sol_half.y[k][i] == sol_full.y[k][i]);
        }
    }
}

TEST_CASE("stage iteration aborts when the budget cannot reach the tolerance") {
    const auto uset = UncertaintySet::interval(0.5, 1.0);
    const TimeGrid grid(1.0, 32);
    BsdeProblem pb = zero_driver_problem([](double x) { return x * x; }, grid, uset);
    pb.f = [](double, double y) { return 0.5 * y; };
    pb.c_growth = 0.5;
    pb.rho = Modulus::linear(0.5);

    CHECK_THROWS_WITH_AS(bsde_solve(pb, 2, 1e-12), doctest::Contains("did not converge"),
                         NumericalError);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gbmlab/common.hpp"
#include "gbmlab/mollify.hpp"

using namespace gbmlab;

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, std::size_t n) {
    if (n % 2 == 1) ++n;
    const double h = (b - a) / static_cast<double>(n);
    double acc = f(a) + f(b);
    for (std::size_t i = 1; i < n; ++i) acc += f(a + h * i) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

// direct normalized convolution (J_w * g)(x) on a fine 1-d grid
double brute_mollify_1d(const std::function<double(double)>& g, double w, double x) {
    const double mass = simpson([](double y) { return bump_unnormalized(y * y); }, -1.0, 1.0,
                                20000);
    const double num = simpson(
        [&](double y) { return bump_unnormalized(y * y) * g(x - w * y); }, -1.0, 1.0, 20000);
    return num / mass;
}

}  // namespace

TEST_CASE("bump kernel and its derivative constant") {
    CHECK(bump_unnormalized(0.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(bump_unnormalized(1.0) == 0.0);
    CHECK(bump_unnormalized(4.0) == 0.0);

    const double mass = simpson([](double y) { return bump_unnormalized(y * y); }, -1.0, 1.0,
                                20000);
    CHECK(kernel_derivative_l1() == doctest::Approx(2.0 * std::exp(-1.0) / mass).epsilon(1e-9));
    CHECK_THROWS_AS(mollified_lipschitz_bound(1.0, 0.0), ValidationError);
    CHECK_THROWS_AS(mollified_lipschitz_bound(-1.0, 0.1), ValidationError);
}

TEST_CASE("constants pass through unchanged") {
    const auto c1 = mollify([](const Vecd&) { return 0.7; }, 1, 0.3);
    CHECK(c1({0.0}) == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(c1({-5.0}) == doctest::Approx(0.7).epsilon(1e-14));

    const auto c3 = mollify([](const Vecd&) { return -2.0; }, 3, 0.5, 8);
    CHECK(c3({0.1, -0.2, 0.3}) == doctest::Approx(-2.0).epsilon(1e-13));
}

TEST_CASE("linear fields pass through unchanged") {
    const auto l1 = mollify([](const Vecd& x) { return 2.0 * x[0] - 1.0; }, 1, 0.25);
    for (const double x : {-1.3, 0.0, 0.4, 2.0})
        CHECK(l1({x}) == doctest::Approx(2.0 * x - 1.0).epsilon(1e-13));

    const auto l2 = mollify([](const Vecd& x) { return x[0] - 3.0 * x[1] + 0.5; }, 2, 0.2);
    CHECK(l2({0.3, -0.7}) == doctest::Approx(0.3 + 2.1 + 0.5).epsilon(1e-12));
    CHECK(l2({-1.0, 2.0}) == doctest::Approx(-1.0 - 6.0 + 0.5).epsilon(1e-12));
}

TEST_CASE("absolute value: sup deviation stays below the width") {
    const auto g = [](const Vecd& x) { return std::fabs(x[0]); };
    for (const double w : {0.1, 0.01}) {
        const auto gw = mollify(g, 1, w, 32);
        double dev = 0.0;
        for (int i = 0; i <= 800; ++i) {
            const double x = -2.0 + i * 0.005;
            dev = std::max(dev, std::fabs(gw({x}) - std::fabs(x)));
        }
        for (int i = 0; i <= 300; ++i) {
            const double x = -1.5 * w + i * 0.01 * w;
            dev = std::max(dev, std::fabs(gw({x}) - std::fabs(x)));
        }
        CHECK(dev <= w);
        CHECK(dev > 0.2 * w);  // the kink really is smoothed, not copied

        // away from the kink the kernel sees a linear function
        CHECK(std::fabs(gw({2.0 * w}) - 2.0 * w) < 1e-12);
        CHECK(std::fabs(gw({-3.0 * w}) - 3.0 * w) < 1e-12);
    }
}

TEST_CASE("quadrature agrees with a brute-force convolution through the kink") {
    // Gauss-Legendre converges slowly when the kink sits inside the support;
    // 256 points leave a ~1e-6 truncation gap against the dense oracle
    const double w = 0.1;
    const auto gw = mollify([](const Vecd& x) { return std::fabs(x[0]); }, 1, w, 256);
    for (int i = -12; i <= 12; ++i) {
        const double x = 0.01 * i;
        const double want = brute_mollify_1d([](double y) { return std::fabs(y); }, w, x);
        CHECK(std::fabs(gw({x}) - want) < 2e-5);
    }
}

TEST_CASE("a steep ramp comes close to the predicted Lipschitz constant") {
    // g = clamp(x/eps) has sup|g| = 1; the mollified slope at 0 equals
    // (1/eps) * mass of J_w on (-eps, eps), approaching the bound as eps -> 0
    const double w = 0.05, eps = 0.025;
    const auto gw = mollify(
        [eps](const Vecd& x) { return std::max(-1.0, std::min(1.0, x[0] / eps)); }, 1, w, 64);
    const double bound = mollified_lipschitz_bound(1.0, w);

    const double mass = simpson([](double y) { return bump_unnormalized(y * y); }, -1.0, 1.0,
                                20000);
    const double inner = simpson([](double y) { return bump_unnormalized(y * y); }, -eps / w,
                                 eps / w, 20000);
    const double slope_at_zero = inner / mass / eps;
    CHECK(slope_at_zero >= 0.85 * bound);

    const double h = 1e-5;
    double steepest = 0.0;
    for (int i = -120; i <= 120; ++i) {
        const double x = 5e-4 * i;
        steepest = std::max(steepest, std::fabs(gw({x + h}) - gw({x - h})) / (2.0 * h));
    }
    CHECK(steepest <= bound * (1.0 + 1e-4));
    CHECK(steepest == doctest::Approx(slope_at_zero).epsilon(0.05));
}

TEST_CASE("mollification does not worsen a Lipschitz modulus") {
    const auto gw = mollify([](const Vecd& x) { return std::fabs(x[0]); }, 1, 0.07, 32);
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    for (int i = 0; i < 500; ++i) {
        const double x1 = unif(gen), x2 = unif(gen);
        CHECK(std::fabs(gw({x1}) - gw({x2})) <= std::fabs(x1 - x2) * (1.0 + 1e-9) + 1e-12);
    }
}

TEST_CASE("quadratic fields shift by a constant below w^2") {
    const double w = 0.3;
    const auto gw = mollify([](const Vecd& x) { return x[0] * x[0] + x[1] * x[1]; }, 2, w);
    const auto shift_at = [&](double x0, double x1) {
        return gw({x0, x1}) - (x0 * x0 + x1 * x1);
    };
    const double s = shift_at(0.0, 0.0);
    CHECK(s > 0.0);
    CHECK(s < w * w);
    CHECK(shift_at(1.2, -0.4) == doctest::Approx(s).epsilon(1e-10));
    CHECK(shift_at(-3.0, 2.0) == doctest::Approx(s).epsilon(1e-10));
}

TEST_CASE("argument validation") {
    const auto g = [](const Vecd& x) { return x[0]; };
    CHECK_THROWS_AS(mollify(g, 1, 0.0), ValidationError);
    CHECK_THROWS_AS(mollify(g, 1, -0.5), ValidationError);
    CHECK_THROWS_AS(mollify(g, 0, 0.1), ValidationError);
    CHECK_THROWS_AS(mollify(g, 4, 0.1), ValidationError);
    CHECK_THROWS_AS(mollify(g, 1, 0.1, 1), ValidationError);
    CHECK_THROWS_AS(mollify(nullptr, 1, 0.1), ValidationError);

    const auto gw = mollify(g, 2, 0.1);
    CHECK_THROWS_AS((void)gw({1.0}), ValidationError);
}

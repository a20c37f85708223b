#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "gbmlab/uncertainty.hpp"

using namespace gbmlab;

namespace {

Matd random_symmetric(std::mt19937_64& gen, std::size_t d) {
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    Matd a(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) a(i, j) = a(j, i) = dist(gen);
    return a;
}

UncertaintySet random_set(std::mt19937_64& gen, std::size_t d, std::size_t count) {
    std::uniform_real_distribution<double> dist(-1.5, 1.5);
    std::vector<Matd> gammas;
    for (std::size_t c = 0; c < count; ++c) {
        Matd g(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) g(i, j) = dist(gen);
        gammas.push_back(g);
    }
    return UncertaintySet(d, gammas);
}

}  // namespace

TEST_CASE("one-dimensional generator matches the two-sided closed form") {
    const auto uset = UncertaintySet::interval(0.5, 1.0);
    CHECK(evaluate_g(uset, 2.0) == doctest::Approx(1.0));
    CHECK(evaluate_g(uset, -2.0) == doctest::Approx(-0.5));
    CHECK(evaluate_g(uset, 0.0) == 0.0);

    // against the closed form across a sweep, including interior points
    const auto uset3 = UncertaintySet::interval(0.5, 1.0, 1);
    CHECK(uset3.size() == 3);
    for (double beta : {-3.0, -1.0, -0.25, 0.0, 0.4, 1.7, 5.0}) {
        const double expected = 0.5 * (1.0 * std::fmax(beta, 0.0) - 0.5 * -std::fmin(beta, 0.0));
        CHECK(evaluate_g(uset3, beta) == doctest::Approx(expected).epsilon(1e-14));
    }
}

TEST_CASE("generator is positively homogeneous, subadditive, and monotone") {
    std::mt19937_64 gen(99);
    for (int rep = 0; rep < 50; ++rep) {
        const auto uset = random_set(gen, 2, 3);
        const Matd a = random_symmetric(gen, 2);
        const Matd b = random_symmetric(gen, 2);
        std::uniform_real_distribution<double> lam(0.0, 4.0);
        const double l = lam(gen);

        Matd la(2, 2), apb(2, 2);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) {
                la(i, j) = l * a(i, j);
                apb(i, j) = a(i, j) + b(i, j);
            }
        CHECK(evaluate_g(uset, la) == doctest::Approx(l * evaluate_g(uset, a)).epsilon(1e-12));
        CHECK(evaluate_g(uset, apb) <= evaluate_g(uset, a) + evaluate_g(uset, b) + 1e-12);

        // A = B + wwᵀ dominates B
        std::uniform_real_distribution<double> wd(-1.0, 1.0);
        const double w0 = wd(gen), w1 = wd(gen);
        Matd dom(2, 2);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) dom(i, j) = b(i, j);
        dom(0, 0) += w0 * w0;
        dom(0, 1) += w0 * w1;
        dom(1, 0) += w1 * w0;
        dom(1, 1) += w1 * w1;
        CHECK(evaluate_g(uset, dom) >= evaluate_g(uset, b) - 1e-12);
    }
}

TEST_CASE("non-symmetric matrices are rejected") {
    std::mt19937_64 gen(1);
    const auto uset = random_set(gen, 2, 2);
    Matd bad(2, 2, {0.0, 1.0, -1.0, 0.0});
    CHECK_THROWS_AS(evaluate_g(uset, bad), ValidationError);
}

TEST_CASE("sigma_bounds endpoints, scaling, and zero") {
    const auto uset = UncertaintySet::interval(0.5, 1.0);
    auto [lo1, hi1] = sigma_bounds(uset, {1.0});
    CHECK(lo1 == doctest::Approx(0.5));
    CHECK(hi1 == doctest::Approx(1.0));
    auto [lo2, hi2] = sigma_bounds(uset, {2.0});
    CHECK(lo2 == doctest::Approx(2.0));
    CHECK(hi2 == doctest::Approx(4.0));
    auto [lo0, hi0] = sigma_bounds(uset, {0.0});
    CHECK(lo0 == 0.0);
    CHECK(hi0 == 0.0);

    std::mt19937_64 gen(3);
    const auto uset2 = random_set(gen, 3, 4);
    const Vecd a = {0.3, -1.1, 0.7};
    auto [blo, bhi] = sigma_bounds(uset2, a);
    CHECK(blo >= 0.0);
    CHECK(blo <= bhi);
    const double lam = 2.5;
    auto [slo, shi] = sigma_bounds(uset2, {lam * a[0], lam * a[1], lam * a[2]});
    CHECK(slo == doctest::Approx(lam * lam * blo).epsilon(1e-12));
    CHECK(shi == doctest::Approx(lam * lam * bhi).epsilon(1e-12));

    // consistency with the generator: max = 2 G(aaᵀ), min = -2 G(-aaᵀ)
    Matd aat(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) aat(i, j) = a[i] * a[j];
    Matd naat(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) naat(i, j) = -aat(i, j);
    CHECK(bhi == doctest::Approx(2.0 * evaluate_g(uset2, aat)).epsilon(1e-12));
    CHECK(blo == doctest::Approx(-2.0 * evaluate_g(uset2, naat)).epsilon(1e-12));
}

TEST_CASE("interval constructor shapes") {
    CHECK(UncertaintySet::interval(0.5, 1.0).size() == 2);
    CHECK(UncertaintySet::interval(0.5, 1.0, 3).size() == 5);
    CHECK(UncertaintySet::interval(1.0, 1.0).is_singleton());
    CHECK(UncertaintySet::interval(0.0, 1.0).gamma(0)(0, 0) == 0.0);
    CHECK_THROWS_AS(UncertaintySet::interval(-0.1, 1.0), ValidationError);
    CHECK_THROWS_AS(UncertaintySet::interval(2.0, 1.0), ValidationError);
}

TEST_CASE("control enumeration: exhaustive, capped, singleton") {
    const auto uset2 = UncertaintySet::interval(0.5, 1.0);
    const auto all = enumerate_controls(uset2, 3, 100);
    CHECK(all.size() == 8);
    std::set<std::vector<std::uint32_t>> distinct;
    for (const auto& c : all) {
        CHECK(c.values.size() == 3);
        validate_control(uset2, c);
        distinct.insert(c.values);
    }
    CHECK(distinct.size() == 8);

    const auto capped = enumerate_controls(uset2, 3, 4);
    CHECK(capped.size() == 4);
    CHECK(capped[0].values == std::vector<std::uint32_t>{0, 0, 0});
    CHECK(capped[1].values == std::vector<std::uint32_t>{1, 1, 1});
    std::set<std::vector<std::uint32_t>> dcap;
    for (const auto& c : capped) dcap.insert(c.values);
    CHECK(dcap.size() == 4);

    const auto single = UncertaintySet::interval(1.0, 1.0);
    CHECK(enumerate_controls(single, 7, 10).size() == 1);

    // deterministic under repetition
    const auto again = enumerate_controls(uset2, 3, 4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(again[i].values == capped[i].values);

    const auto uset3 = UncertaintySet::interval(0.5, 1.0, 1);
    CHECK(enumerate_controls(uset3, 3, 27).size() == 27);
    CHECK(enumerate_controls(uset3, 3, 26).size() == 26);
}

TEST_CASE("control validation rejects malformed controls") {
    const auto uset = UncertaintySet::interval(0.5, 1.0);
    ScenarioControl c = constant_control(uset, TimeGrid(1.0, 4), 1);
    validate_control(uset, c);
    c.values.pop_back();
    CHECK_THROWS_AS(validate_control(uset, c), ValidationError);
    c.values = {0, 1, 2, 0};
    CHECK_THROWS_AS(validate_control(uset, c), ValidationError);
}

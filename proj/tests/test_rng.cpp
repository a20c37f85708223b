#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "gbmlab/rng.hpp"

using gbmlab::NormalStream;
using gbmlab::Philox4x32;

TEST_CASE("philox4x32-10 known-answer vectors") {
    {
        const auto r = Philox4x32::generate({0, 0, 0, 0}, {0, 0});
        CHECK(r[0] == 0x6627e8d5u);
        CHECK(r[1] == 0xe169c58du);
        CHECK(r[2] == 0xbc57ac4cu);
        CHECK(r[3] == 0x9b00dbd8u);
    }
    {
        const auto r = Philox4x32::generate({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                            {0xffffffffu, 0xffffffffu});
        CHECK(r[0] == 0x408f276du);
        CHECK(r[1] == 0x41c83b0eu);
        CHECK(r[2] == 0xa20bc7c6u);
        CHECK(r[3] == 0x6d5451fdu);
    }
    {
        const auto r = Philox4x32::generate({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                            {0xa4093822u, 0x299f31d0u});
        CHECK(r[0] == 0xd16cfe09u);
        CHECK(r[1] == 0x94fdccebu);
        CHECK(r[2] == 0x5001e420u);
        CHECK(r[3] == 0x24126ea1u);
    }
}

TEST_CASE("normal draws are a pure function of (seed, salt, path, step, component)") {
    const NormalStream s1(42), s2(42), s3(43), s4(42, 1);
    for (std::uint64_t path : {0ull, 1ull, 999ull}) {
        for (std::uint32_t step : {0u, 7u}) {
            for (std::uint32_t c : {0u, 1u, 2u, 5u}) {
                CHECK(s1.normal(path, step, c) == s2.normal(path, step, c));
            }
            CHECK(s1.normal(path, step, 0) != s3.normal(path, step, 0));
            CHECK(s1.normal(path, step, 0) != s4.normal(path, step, 0));
        }
    }
}

TEST_CASE("fill_normals matches per-component addressing") {
    const NormalStream s(7);
    double buf[5];
    s.fill_normals(3, 11, buf, 5);
    for (std::uint32_t c = 0; c < 5; ++c) CHECK(buf[c] == s.normal(3, 11, c));
}

TEST_CASE("draws have standard-normal moments") {
    const NormalStream s(2024);
    const std::size_t n = 200000;
    double sum = 0, sum2 = 0, sum3 = 0, sum4 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = s.normal(i, 0, 0);
        sum += z;
        sum2 += z * z;
        sum3 += z * z * z;
        sum4 += z * z * z * z;
    }
    const double inv = 1.0 / static_cast<double>(n);
    CHECK(std::fabs(sum * inv) < 0.01);
    CHECK(sum2 * inv == doctest::Approx(1.0).epsilon(0.02));
    CHECK(std::fabs(sum3 * inv) < 0.05);
    CHECK(sum4 * inv == doctest::Approx(3.0).epsilon(0.05));
    // draws along other axes look the same
    double sum2b = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = s.normal(17, static_cast<std::uint32_t>(i), 1);
        sum2b += z * z;
    }
    CHECK(sum2b * inv == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("adjacent addresses decorrelate") {
    const NormalStream s(5);
    const std::size_t n = 100000;
    double acc = 0;
    for (std::size_t i = 0; i < n; ++i)
        acc += s.normal(i, 0, 0) * s.normal(i, 1, 0);
    CHECK(std::fabs(acc / static_cast<double>(n)) < 0.01);
}

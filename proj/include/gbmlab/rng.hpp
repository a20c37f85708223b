#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace gbmlab {

// Philox4x32-10 counter-based generator. Stateless: output is a pure
// function of (counter, key), so any (path, step, component) address can be
// sampled independently and in any order.
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter ctr, Key key);
};

// Standard-normal draws addressed by (path, step, component). The key is the
// seed alone, so every scenario sweep sees the same underlying noise and
// scenario comparisons are common-random-number comparisons by construction.
// `salt` separates auxiliary streams (e.g. inner solver stages) from the
// primary one; it occupies the high counter word, which also carries the high
// half of the path index, so paths are expected to stay below 2^32 per salt.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed, std::uint32_t salt = 0);

    double normal(std::uint64_t path, std::uint32_t step, std::uint32_t component) const;

    // out[c] = normal(path, step, c) for c in [0, count)
    void fill_normals(std::uint64_t path, std::uint32_t step, double* out,
                      std::size_t count) const;

    std::uint64_t seed() const { return seed_; }
    std::uint32_t salt() const { return salt_; }

private:
    std::array<double, 2> pair(std::uint64_t path, std::uint32_t step,
                               std::uint32_t block) const;

    std::uint64_t seed_;
    Philox4x32::Key key_;
    std::uint32_t salt_;
};

}  // namespace gbmlab

#include "gbmlab/rng.hpp"

#include <cmath>

namespace gbmlab {

namespace {

constexpr std::uint32_t kPhiloxW32A = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW32B = 0xBB67AE85u;
constexpr std::uint32_t kPhiloxM4x32A = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM4x32B = 0xCD9E8D57u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

inline Philox4x32::Counter single_round(Philox4x32::Counter ctr, Philox4x32::Key key) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM4x32A, ctr[0], hi0, lo0);
    mulhilo(kPhiloxM4x32B, ctr[2], hi1, lo1);
    return {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

constexpr double kInv53 = 1.0 / 9007199254740992.0;  // 2^-53
constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kPhiloxW32A;
            key[1] += kPhiloxW32B;
        }
        ctr = single_round(ctr, key);
    }
    return ctr;
}

NormalStream::NormalStream(std::uint64_t seed, std::uint32_t salt)
    : seed_(seed),
      key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      salt_(salt) {}

std::array<double, 2> NormalStream::pair(std::uint64_t path, std::uint32_t step,
                                         std::uint32_t block) const {
    const Philox4x32::Counter ctr = {step, block, static_cast<std::uint32_t>(path),
                                     static_cast<std::uint32_t>(path >> 32) ^ salt_};
    const Philox4x32::Counter r = Philox4x32::generate(ctr, key_);
    const std::uint64_t a = r[0] | (static_cast<std::uint64_t>(r[1]) << 32);
    const std::uint64_t b = r[2] | (static_cast<std::uint64_t>(r[3]) << 32);
    const double u1 = static_cast<double>((a >> 11) + 1) * kInv53;  // (0, 1]
    const double u2 = static_cast<double>(b >> 11) * kInv53;        // [0, 1)
    const double radius = std::sqrt(-2.0 * std::log(u1));
    return {radius * std::cos(kTwoPi * u2), radius * std::sin(kTwoPi * u2)};
}

double NormalStream::normal(std::uint64_t path, std::uint32_t step,
                            std::uint32_t component) const {
    return pair(path, step, component / 2)[component % 2];
}

void NormalStream::fill_normals(std::uint64_t path, std::uint32_t step, double* out,
                                std::size_t count) const {
    std::size_t c = 0;
    while (c < count) {
        const auto z = pair(path, step, static_cast<std::uint32_t>(c / 2));
        out[c] = z[0];
        ++c;
        if (c < count) {
            out[c] = z[1];
            ++c;
        }
    }
}

}  // namespace gbmlab

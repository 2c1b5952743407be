#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace ofdma::rng {

/// murmur3 finalizer; bijective 64-bit mix.
constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z ^= z >> 33;
    z *= 0xff51afd7ed558ccdULL;
    z ^= z >> 33;
    z *= 0xc4ceb9fe1a85ec53ULL;
    z ^= z >> 33;
    return z;
}

/// Splittable stream rule: substream (a, b) of a master seed.
/// Experiments key channel draws as derive(master, trial) and each user
/// inside a realization as derive(trial_seed, user), so every
/// (trial, user) pair owns an independent stream.
constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) noexcept {
    std::uint64_t s = mix(seed + 0x9e3779b97f4a7c15ULL);
    s = mix(s ^ mix(a + 0xbf58476d1ce4e5b9ULL));
    s = mix(s ^ mix(b + 0x94d049bb133111ebULL));
    return s;
}

/// Counter-free splitmix64 generator. Deterministic across platforms;
/// all distributions are built from explicit 53-bit uniforms rather than
/// std::normal_distribution, whose sequence is implementation-defined.
class Stream {
public:
    explicit Stream(std::uint64_t seed) noexcept : state_(seed) {}
    Stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) noexcept
        : state_(derive(seed, a, b)) {}

    std::uint64_t next_u64() noexcept {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double next_unit() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Standard normal (Box-Muller, spare cached).
    double next_normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - next_unit();  // (0, 1]
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

    /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    std::complex<double> next_cnormal(double variance) noexcept {
        const double u1 = 1.0 - next_unit();
        const double u2 = next_unit();
        const double r = std::sqrt(-std::log(u1) * variance);
        const double t = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(t), r * std::sin(t)};
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace ofdma::rng

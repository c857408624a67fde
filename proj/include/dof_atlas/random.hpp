#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace dofatlas {

/// Seeded random stream. Gaussians come from an explicit Box-Muller
/// transform over the raw mt19937-64 output, so identical seeds give
/// bitwise-identical draws on any platform; each complex draw consumes
/// exactly two uniforms.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed),
                          static_cast<std::uint32_t>(seed >> 32)};
        gen_.seed(seq);
    }

    /// Counter-based substream: (seed, a, b) fully determine the stream, so
    /// e.g. (SNR index, trial index) pairs get independent reproducible
    /// streams regardless of evaluation order.
    static RandomStream derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
        RandomStream s(0);
        std::seed_seq seq{static_cast<std::uint32_t>(seed),
                          static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(a),
                          static_cast<std::uint32_t>(a >> 32),
                          static_cast<std::uint32_t>(b),
                          static_cast<std::uint32_t>(b >> 32)};
        s.gen_.seed(seq);
        return s;
    }

    /// Uniform on (0, 1].
    double uniform01() {
        return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
    }

    /// Circularly-symmetric complex Gaussian, mean 0, E|z|^2 = 1.
    std::complex<double> complex_gaussian() {
        const double radius = std::sqrt(-std::log(uniform01()));
        const double angle = 2.0 * kPi * uniform01();
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

private:
    static constexpr double kPi = 3.141592653589793238462643383279502884;
    std::mt19937_64 gen_;
};

}  // namespace dofatlas

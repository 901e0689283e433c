#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace snrml {

// splitmix64 finalizer. Used to decorrelate seeds derived from a common base
// so that neighboring (point, trial) pairs do not feed mt19937_64 with
// near-identical states.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) {
    return splitmix64(splitmix64(base ^ 0x6a09e667f3bcc908ULL) ^ splitmix64(stream * 0x9e3779b97f4a7c15ULL + index));
}

// Deterministic generator: mt19937_64 for the raw stream, hand-rolled
// Box-Muller for normals. std::normal_distribution is implementation-defined
// and would break bit-exact reruns across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on (0, 1]: 53-bit mantissa, never exactly zero, so it is safe
    // under a logarithm.
    double uniform_pos() {
        return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    }

    // Uniform on [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    int uniform_int(int n) {
        // n is small everywhere this is used (constellation orders, window
        // counts), so the floating-point route is exact enough and keeps the
        // consumption of the raw stream at one draw per call.
        return static_cast<int>(uniform() * static_cast<double>(n));
    }

    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform_pos();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    // Complex sample with independent real and imaginary parts, each of
    // standard deviation sigma (so E|z|^2 = 2 sigma^2).
    std::complex<double> cgaussian(double sigma) {
        double re = gaussian();
        double im = gaussian();
        return {sigma * re, sigma * im};
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace snrml

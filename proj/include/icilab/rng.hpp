#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace icilab {

// splitmix64 finalizer; used to hash (seed, stream) pairs into
// independent generator seeds.
inline std::uint64_t mix_u64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return mix_u64(mix_u64(seed) ^ (0x517cc1b727220a95ULL * (stream + 1)));
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t s1, std::uint64_t s2) {
    return derive_seed(derive_seed(seed, s1), s2);
}

// Deterministic RNG wrapper. All distribution transforms are written out
// explicitly so that streams are reproducible across standard libraries,
// not just across runs.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    static Rng from_stream(std::uint64_t seed, std::uint64_t stream) {
        return Rng(derive_seed(seed, stream));
    }

    std::uint64_t u64() { return gen_(); }

    // uniform in [0, 1), 53-bit resolution
    double u01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

    // uniform integer in [lo, hi] via rejection-free scaling (ranges here
    // are tiny, modulo bias is irrelevant at 64 bits)
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(u64() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    // standard normal, Box-Muller
    double gauss() {
        double u1 = 1.0 - u01();  // (0, 1], keeps log() finite
        double u2 = u01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    // circularly symmetric complex Gaussian with E|z|^2 = 1
    std::complex<double> cgauss() {
        constexpr double inv_sqrt2 = 0.70710678118654752440;
        return {gauss() * inv_sqrt2, gauss() * inv_sqrt2};
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace icilab

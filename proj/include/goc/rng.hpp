#pragma once

#include <cstdint>
#include <cmath>
#include <random>

namespace goc {

// Seedable generator with bit-reproducible output across platforms.
// mt19937_64 is fully specified by the standard; the uniform/normal
// draws below avoid std::*_distribution, whose output is
// implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Uniform in [0, 1) with 53 bits of randomness.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Standard normal via the polar (Marsaglia) method.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double mul = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * mul;
        has_spare_ = true;
        return u * mul;
    }

    // Integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // Rejection to avoid modulo bias.
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return x % n;
    }

    // Derives an independent stream seed from (master, stream id).
    // splitmix64 finalizer.
    static std::uint64_t derive(std::uint64_t master, std::uint64_t stream) {
        std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace goc

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace morph {

// Deterministic random stream. std::mt19937_64 output is fixed by the
// standard, and every distribution here is hand-rolled, so a given seed
// produces the same draw sequence on any platform. The std::* distribution
// adapters are implementation-defined and must not be used anywhere in the
// simulation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool uniform_bool() { return (next_u64() >> 63) != 0; }

    // Unbiased integer in [0, n) by Lemire's multiply-shift rejection; no
    // divisions on the common path. n must be > 0.
    std::uint64_t uniform_index(std::uint64_t n) {
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
        std::uint64_t lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (lo < threshold) {
                m = static_cast<unsigned __int128>(next_u64()) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // Uniformly distributed unit vector via disc rejection. Avoids
    // transcendental calls so the result is bit-identical across libm
    // implementations.
    void unit_vector(double& x, double& y) {
        for (;;) {
            const double a = 2.0 * uniform_double() - 1.0;
            const double b = 2.0 * uniform_double() - 1.0;
            const double r2 = a * a + b * b;
            if (r2 > 0.0 && r2 <= 1.0) {
                const double inv = 1.0 / std::sqrt(r2);
                x = a * inv;
                y = b * inv;
                return;
            }
        }
    }

    // Fisher-Yates; std::shuffle is implementation-defined.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(uniform_index(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace morph

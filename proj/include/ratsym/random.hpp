#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "ratsym/complex_linalg.hpp"

namespace ratsym {

/// splitmix64 stream; small, seedable, identical on every platform, which is
/// what the seeded verification suites need for reproducible reports.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// uniform in [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    long index(long n) { return static_cast<long>(next_u64() % static_cast<std::uint64_t>(n)); }

    /// complex point with modulus in [rmin, rmax), uniform angle
    cx annulus(double rmin, double rmax) {
        const double r = uniform(rmin, rmax);
        const double t = uniform(0.0, 6.283185307179586);
        return cx{r * std::cos(t), r * std::sin(t)};
    }

    /// complex point in the centered box [-s, s]^2
    cx box(double s) { return cx{uniform(-s, s), uniform(-s, s)}; }

private:
    std::uint64_t state_;
};

} // namespace ratsym

#ifndef RIM_RNG_HPP
#define RIM_RNG_HPP

#include <cmath>
#include <cstdint>

namespace rim {

// splitmix64 step; used both as a stream mixer and as the engine core.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic counter-style random stream. A stream is identified by its
/// seed; split(id) derives an independent child stream from the parent seed
/// and the id, regardless of how many draws the parent has made. All
/// variates are generated from explicit algorithms so a given seed yields
/// the same byte sequence everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), state_(mix(seed, 0)) {}

    /// Child stream keyed by (parent seed, stream id); independent of draw count.
    Rng split(std::uint64_t stream_id) const { return Rng(mix(seed_, stream_id + 1)); }

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return splitmix64(state_); }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (one value per call, no cached state).
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    /// Gamma(shape, 1) by Marsaglia-Tsang, with the shape<1 boost.
    double gamma(double shape) {
        if (shape < 1.0) {
            double u = uniform();
            while (u <= 0.0) u = uniform();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = normal();
            double v = 1.0 + c * x;
            if (v <= 0.0) continue;
            v = v * v * v;
            double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

private:
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t s = seed ^ (0x6a09e667f3bcc909ULL * (stream + 1));
        std::uint64_t a = splitmix64(s);
        std::uint64_t b = splitmix64(s);
        return a ^ (b << 1);
    }

    std::uint64_t seed_;
    std::uint64_t state_;
};

}  // namespace rim

#endif  // RIM_RNG_HPP

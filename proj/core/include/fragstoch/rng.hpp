#ifndef FRAGSTOCH_RNG_HPP
#define FRAGSTOCH_RNG_HPP

#include <cmath>
#include <cstdint>

namespace fragstoch {

/// Identifies one reproducible random stream.
///
/// The (master, stream) pair is hashed through splitmix64 into the
/// generator state, so distinct pairs give statistically independent
/// streams and equal pairs reproduce the same draws bit for bit.
struct Seed {
    std::uint64_t master = 0;
    std::uint64_t stream = 0;

    /// Derive a child stream. Used to hand disjoint streams to workers
    /// or to the independent components of a sampler.
    [[nodiscard]] Seed sub(std::uint64_t index) const noexcept {
        // golden-ratio increment keeps sub(0), sub(1), ... well separated
        return Seed{master, stream * 0x9e3779b97f4a7c15ULL + index + 1};
    }
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
} // namespace detail

/// xoshiro256++ with splitmix64 seeding. Small, fast and portable;
/// unlike std::normal_distribution the output sequence does not depend
/// on the standard library implementation.
class Rng {
public:
    explicit Rng(Seed seed) noexcept {
        std::uint64_t s = seed.master;
        s ^= detail::splitmix64(s) + seed.stream;
        for (auto& word : state_) word = detail::splitmix64(s);
        has_spare_ = false;
    }

    std::uint64_t next_u64() noexcept {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform on (0,1); never returns 0 or 1.
    double uniform() noexcept {
        // 53 random bits, shifted into (0,1)
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) noexcept {
        return lo + (hi - lo) * uniform();
    }

    /// Standard normal via the Marsaglia polar method.
    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double factor = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * factor;
        has_spare_ = true;
        return u * factor;
    }

    double exponential() noexcept { return -std::log(uniform()); }

    /// Gamma(shape, 1) by Marsaglia-Tsang, with the usual boost for shape < 1.
    double gamma(double shape) noexcept {
        if (shape < 1.0) {
            const double u = uniform();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    double beta(double a, double b) noexcept {
        const double x = gamma(a);
        const double y = gamma(b);
        return x / (x + y);
    }

    /// Poisson(mean) by inversion for small means, PTRS-like rejection
    /// is not needed at the rates used here.
    long poisson(double mean) noexcept {
        long k = 0;
        double t = exponential();
        while (t < mean) {
            ++k;
            t += exponential();
        }
        return k;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace fragstoch

#endif

#include "fragstoch/paths.hpp"

#include <cmath>
#include <stdexcept>

#include "fragstoch/stable_pd.hpp"

namespace fragstoch {

namespace {

// Brownian motion knots over [0, length]; W[0] = 0.
std::vector<double> brownian_knots(std::size_t n_steps, double length, Rng& rng) {
    std::vector<double> w(n_steps);
    const double sd = std::sqrt(length / static_cast<double>(n_steps - 1));
    w[0] = 0.0;
    for (std::size_t k = 1; k < n_steps; ++k) w[k] = w[k - 1] + sd * rng.normal();
    return w;
}

std::vector<double> bridge_knots(std::size_t n_steps, double length, Rng& rng) {
    auto w = brownian_knots(n_steps, length, rng);
    const double drift = w.back() / static_cast<double>(n_steps - 1);
    for (std::size_t k = 1; k + 1 < n_steps; ++k) w[k] -= drift * static_cast<double>(k);
    w.front() = 0.0;
    w.back() = 0.0;
    return w;
}

std::vector<double> vervaat(const std::vector<double>& bridge) {
    const std::size_t n = bridge.size();
    const std::size_t m = n - 1; // number of increments; bridge[m] == bridge[0]
    std::size_t imin = 0;
    for (std::size_t k = 1; k < n; ++k)
        if (bridge[k] < bridge[imin]) imin = k; // first index on ties
    std::vector<double> e(n);
    const double low = bridge[imin];
    for (std::size_t k = 0; k < n; ++k) e[k] = bridge[(imin + k) % m] - low;
    e.front() = 0.0;
    e.back() = 0.0;
    return e;
}

} // namespace

GridPath sample_brownian_bridge(std::size_t n_steps, double length, Seed seed) {
    if (n_steps < 2) throw std::invalid_argument("sample_brownian_bridge: n_steps >= 2");
    if (!(length > 0.0)) throw std::invalid_argument("sample_brownian_bridge: length > 0");
    Rng rng(seed);
    return GridPath(0.0, length / static_cast<double>(n_steps - 1),
                    bridge_knots(n_steps, length, rng));
}

GridPath sample_normalized_excursion(std::size_t n_steps, Seed seed) {
    if (n_steps < 3) throw std::invalid_argument("sample_normalized_excursion: n_steps >= 3");
    Rng rng(seed);
    auto b = bridge_knots(n_steps, 1.0, rng);
    return GridPath(0.0, 1.0 / static_cast<double>(n_steps - 1), vervaat(b));
}

GridPath sample_excursion_by_rejection(std::size_t n_steps, Seed seed) {
    if (n_steps < 3) throw std::invalid_argument("sample_excursion_by_rejection: n_steps >= 3");
    Rng rng(seed);
    for (;;) {
        auto b = bridge_knots(n_steps, 1.0, rng);
        bool positive = true;
        for (std::size_t k = 1; k + 1 < n_steps; ++k) {
            if (b[k] <= 0.0) {
                positive = false;
                break;
            }
        }
        if (positive) return GridPath(0.0, 1.0 / static_cast<double>(n_steps - 1), std::move(b));
    }
}

GridPath sample_bes3(std::size_t n_steps, double horizon, Seed seed) {
    if (n_steps < 2) throw std::invalid_argument("sample_bes3: n_steps >= 2");
    if (!(horizon > 0.0)) throw std::invalid_argument("sample_bes3: horizon > 0");
    Rng rng(seed);
    const double dt = horizon / static_cast<double>(n_steps - 1);
    const double sd = std::sqrt(dt);
    double x = 0.0, y = 0.0, z = 0.0;
    std::vector<double> r(n_steps);
    r[0] = 0.0;
    for (std::size_t k = 1; k < n_steps; ++k) {
        x += sd * rng.normal();
        y += sd * rng.normal();
        z += sd * rng.normal();
        r[k] = std::sqrt(x * x + y * y + z * z);
    }
    return GridPath(0.0, dt, std::move(r));
}

std::pair<GridPath, GridPath> sample_two_sided_bes3(std::size_t n_steps_per_side,
                                                    double horizon, Seed seed) {
    return {sample_bes3(n_steps_per_side, horizon, seed.sub(0)),
            sample_bes3(n_steps_per_side, horizon, seed.sub(1))};
}

double sample_half_stable_increment(double t, const StableParams& params, Seed seed) {
    if (!(t > 0.0)) throw std::invalid_argument("sample_half_stable_increment: t > 0");
    if (!params.is_brownian())
        throw std::invalid_argument(
            "sample_half_stable_increment: only beta=1/2, C=2*sqrt(2) supported");
    Rng rng(seed);
    double n;
    do {
        n = rng.normal();
    } while (n == 0.0);
    return 4.0 * t * t / (n * n);
}

double sample_bes3_hitting_time(double level, Rng& rng, int n_terms) {
    // T_1 = sum_k 2 E_k / (pi^2 k^2); tail beyond n_terms replaced by its mean.
    double sum = 0.0;
    for (int k = 1; k <= n_terms; ++k) {
        const double rate = M_PI * M_PI * k * k / 2.0;
        sum += rng.exponential() / rate;
    }
    // sum_{k>n} 2/(pi^2 k^2) ~ 2/(pi^2 n)
    sum += 2.0 / (M_PI * M_PI * n_terms);
    return level * level * sum;
}

double sample_bes3_hitting_time_by_path(double level, double dt, Rng& rng) {
    const double sd = std::sqrt(dt);
    double x = 0.0, y = 0.0, z = 0.0;
    double r_prev = 0.0;
    double t = 0.0;
    for (;;) {
        x += sd * rng.normal();
        y += sd * rng.normal();
        z += sd * rng.normal();
        const double r = std::sqrt(x * x + y * y + z * z);
        t += dt;
        if (r >= level) {
            // linear interpolation of the crossing inside the step
            const double frac = (level - r_prev) / (r - r_prev);
            return t - dt + frac * dt;
        }
        // bridge correction: chance the radius grazed the level inside the
        // step even though both endpoints are below it
        const double a = level - r_prev, b = level - r;
        const double p_cross = std::exp(-2.0 * a * b / dt);
        if (rng.uniform() < p_cross) return t - 0.5 * dt;
        r_prev = r;
    }
}

double sample_bes3_occupation_time(double level, Rng& rng, int n_terms) {
    double sum = 0.0;
    for (int k = 1; k <= n_terms; ++k) {
        const double h = M_PI * (k - 0.5);
        sum += 2.0 * rng.exponential() / (h * h);
    }
    sum += 2.0 / (M_PI * M_PI * (n_terms - 0.5));
    return level * level * sum;
}

double sample_bes3_occupation_time_by_path(double level, double dt, Rng& rng) {
    // Ciesielski-Taylor: occupation of (0, level) by BES(3) from 0 equals the
    // exit time of (-level, level) by a Brownian motion from 0.
    const double sd = std::sqrt(dt);
    double w = 0.0;
    double t = 0.0;
    for (;;) {
        const double w_next = w + sd * rng.normal();
        t += dt;
        if (w_next >= level || w_next <= -level) {
            const double barrier = w_next > 0.0 ? level : -level;
            const double frac = (barrier - w) / (w_next - w);
            return t - dt + frac * dt;
        }
        // one-sided bridge corrections toward each barrier
        const double up = std::exp(-2.0 * (level - w) * (level - w_next) / dt);
        const double down = std::exp(-2.0 * (level + w) * (level + w_next) / dt);
        if (rng.uniform() < up + down) return t - 0.5 * dt;
        w = w_next;
    }
}

} // namespace fragstoch

#ifndef FRAGSTOCH_GRID_PATH_HPP
#define FRAGSTOCH_GRID_PATH_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace fragstoch {

/// Real-valued path sampled on a uniform time grid; values are linearly
/// interpolated between knots for all level-crossing queries.
struct GridPath {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<double> values;

    GridPath() = default;
    GridPath(double start, double step, std::vector<double> vals)
        : t0(start), dt(step), values(std::move(vals)) {
        if (dt <= 0.0) throw std::invalid_argument("GridPath: dt must be > 0");
        if (values.empty()) throw std::invalid_argument("GridPath: empty values");
    }

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }

    /// Time of knot k, computed directly (never accumulated) so the
    /// duration (size()-1)*dt carries no float drift.
    [[nodiscard]] double time(std::size_t k) const noexcept {
        return t0 + static_cast<double>(k) * dt;
    }

    [[nodiscard]] double duration() const noexcept {
        return static_cast<double>(values.size() - 1) * dt;
    }

    [[nodiscard]] double value_at(double t) const {
        const double pos = (t - t0) / dt;
        if (pos <= 0.0) return values.front();
        const auto n = values.size() - 1;
        if (pos >= static_cast<double>(n)) return values.back();
        const auto k = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(k);
        return values[k] + frac * (values[k + 1] - values[k]);
    }

    [[nodiscard]] double max_value() const noexcept {
        double m = values.front();
        for (double v : values)
            if (v > m) m = v;
        return m;
    }

    /// First index attaining the maximum.
    [[nodiscard]] std::size_t argmax() const noexcept {
        std::size_t best = 0;
        for (std::size_t k = 1; k < values.size(); ++k)
            if (values[k] > values[best]) best = k;
        return best;
    }

    /// First index attaining the minimum.
    [[nodiscard]] std::size_t argmin() const noexcept {
        std::size_t best = 0;
        for (std::size_t k = 1; k < values.size(); ++k)
            if (values[k] < values[best]) best = k;
        return best;
    }
};

/// Piecewise-linear path on an arbitrary (sorted) breakpoint grid.
/// Used where uniform grids do not fit: paths with inserted off-grid
/// breakpoints and locally refined extinction windows.
struct PiecewisePath {
    std::vector<double> times;
    std::vector<double> values;

    PiecewisePath() = default;
    PiecewisePath(std::vector<double> t, std::vector<double> v)
        : times(std::move(t)), values(std::move(v)) {
        if (times.size() != values.size() || times.size() < 2)
            throw std::invalid_argument("PiecewisePath: need matching arrays, size >= 2");
    }

    static PiecewisePath from_grid(const GridPath& g) {
        std::vector<double> t(g.size());
        for (std::size_t k = 0; k < g.size(); ++k) t[k] = g.time(k);
        return PiecewisePath{std::move(t), g.values};
    }

    [[nodiscard]] std::size_t size() const noexcept { return times.size(); }

    [[nodiscard]] double value_at(double t) const {
        if (t <= times.front()) return values.front();
        if (t >= times.back()) return values.back();
        std::size_t lo = 0, hi = times.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (times[mid] <= t ? lo : hi) = mid;
        }
        const double span = times[hi] - times[lo];
        if (span <= 0.0) return values[hi];
        return values[lo] + (t - times[lo]) / span * (values[hi] - values[lo]);
    }
};

} // namespace fragstoch

#endif

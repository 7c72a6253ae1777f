#ifndef FRAGSTOCH_OPENSETS_HPP
#define FRAGSTOCH_OPENSETS_HPP

#include <optional>
#include <string>
#include <vector>

#include "fragstoch/grid_path.hpp"

namespace fragstoch {

struct Interval {
    double l = 0.0;
    double r = 0.0;
    [[nodiscard]] double length() const noexcept { return r - l; }
};

/// Nonincreasing positive sequence with sum <= 1 (+ numeric slack).
struct RankedMasses {
    std::vector<double> masses;

    [[nodiscard]] double sum() const noexcept {
        double s = 0.0;
        for (double m : masses) s += m;
        return s;
    }
    [[nodiscard]] bool valid(double eps = 1e-12) const noexcept;
};

/// Finite union of disjoint open intervals inside a domain interval,
/// or inside the whole line. Components are sorted and strictly disjoint.
struct OpenSet {
    double domain_l = 0.0;
    double domain_r = 1.0;
    bool on_line = false;
    std::vector<Interval> components;

    static OpenSet empty(double a, double b) { return OpenSet{a, b, false, {}}; }
    static OpenSet empty_line() { return OpenSet{0.0, 0.0, true, {}}; }

    [[nodiscard]] double total_length() const noexcept {
        double s = 0.0;
        for (const auto& c : components) s += c.length();
        return s;
    }

    /// Length of the smallest closed interval containing the set; 0 if empty.
    [[nodiscard]] double span() const noexcept {
        if (components.empty()) return 0.0;
        return components.back().r - components.front().l;
    }

    /// Validate ordering/disjointness invariants.
    [[nodiscard]] bool valid() const noexcept;

    /// Canonical JSON: {"domain": [a,b] | "line", "components": [[l,r],...]}.
    [[nodiscard]] std::string to_json() const;
    static OpenSet from_json(const std::string& text);
};

/// Open set where the linearly interpolated path strictly exceeds `level`.
/// Grid values exactly equal to the level count as not exceeding.
OpenSet level_set(const GridPath& path, double level);
OpenSet level_set(const PiecewisePath& path, double level);

/// Bertoin's metric on open subsets of a common bounded domain:
/// sup-norm distance between the distance-to-complement functions,
/// computed exactly on the union of breakpoints.
double hausdorff_distance(const OpenSet& a, const OpenSet& b);

/// Metric for open subsets of the line: weighted sum of window distances
/// over (n, n+1), n in [-n_max, n_max), with weight 2^{-|n|}/4.
/// The truncation error is at most the geometric tail
/// 2 * sum_{|n| >= n_max} 2^{-|n|}/4.
double line_distance(const OpenSet& a, const OpenSet& b, int n_max);

/// The unique component containing u, if any.
std::optional<Interval> component_containing(const OpenSet& v, double u);

/// Component lengths sorted nonincreasing. Bounded domains only.
RankedMasses ranked_lengths(const OpenSet& v);

/// Intersection with an open window; components shorter than 1e-15 after
/// clipping are dropped as float noise.
OpenSet restrict(const OpenSet& v, const Interval& window);

} // namespace fragstoch

#endif

#ifndef FRAGSTOCH_FRAGMENTATION_HPP
#define FRAGSTOCH_FRAGMENTATION_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "fragstoch/grid_path.hpp"
#include "fragstoch/opensets.hpp"
#include "fragstoch/rng.hpp"

namespace fragstoch {

/// Mass of the fragment containing the tagged point u, as a function of
/// the level. The mass is exactly the measure of {K > t} for the
/// two-sided running-minimum profile K toward u, so it is computed in
/// closed form from the profile, not by scanning level sets.
struct TaggedFragmentPath {
    struct Jump {
        double level;
        double size;
    };

    double start_mass = 1.0;
    double death_level = 0.0; // e(u); the mass is 0 strictly above it
    double u = 0.0;           // after any grid-collision shift
    std::vector<std::pair<double, double>> steps; // (level, mass), right-continuous
    std::vector<Jump> jumps;                      // sorted by level; sizes > 0
    /// Mass of the drops below the jump threshold, merged out of `jumps`.
    double unresolved_mass = 0.0;

    [[nodiscard]] double jump_sum() const noexcept;
    [[nodiscard]] std::string to_json() const;
};

/// Tagged fragment of the height fragmentation of e at the point u.
/// Levels in `steps` are the plateau heights of the minimum profile
/// (where every representable jump happens) plus a uniform refinement of
/// [0, death_level] with n_levels points. Drops smaller than
/// jump_threshold go to unresolved_mass; a negative threshold means the
/// default 2*dt (below grid resolution, drop sizes are noise).
/// If u collides with a grid node it is shifted by dt/2 toward the
/// interior (deterministic, measure-zero fix).
TaggedFragmentPath tagged_fragment(const GridPath& e, double u, std::size_t n_levels = 256,
                                   double jump_threshold = -1.0);

/// Jump sizes sorted nonincreasing and normalized by their own sum, so
/// the result is an exact element of the ranked-mass simplex. (On a grid
/// the jumps capture the mass up to the ladder-set slack of order
/// 1/sqrt(n), so normalizing by start_mass would not sum to 1.)
RankedMasses ranked_jumps(const TaggedFragmentPath& tf);

/// e minus its two-sided running minimum toward u. b is distributed as a
/// reflected Brownian bridge; its excursion intervals away from 0 are
/// exactly the plateaus of K, hence in bijection with the jumps of the
/// tagged fragment. Both paths carry u as an explicit breakpoint
/// (b(u) = 0 exactly), which is why they are piecewise paths and not
/// grid paths.
struct BPDecomposition {
    PiecewisePath b;
    PiecewisePath K;
    double u = 0.0;
    double zeta = 0.0; // e(u) = K(u)
};
BPDecomposition bertoin_pitman(const GridPath& e, double u);

/// Root change at the maximum: t -> max(e) - e((S+t) mod 1) with S the
/// argmax (first grid index on ties). Law-invariant for the normalized
/// excursion; zero at both ends, maximum max(e) attained where e was 0.
GridPath haas_transform(const GridPath& e);

/// State of the iterated ancestral-line cuts: the current coding
/// function and its positivity set.
struct ObliterationState {
    GridPath b;
    OpenSet V; // = level_set(b, 0)
    int n = 0; // cuts applied

    static ObliterationState from_excursion(const GridPath& e);
};

/// One cut at u: subtract the two-sided running minimum of b toward u
/// inside the component of u (zero outside). Throws if u lies outside
/// the domain or outside V.
ObliterationState obliterate(const ObliterationState& state, double u);

/// One cut at a uniform point of (0,1), redrawn until it lands in V.
ObliterationState obliterate_uniform(const ObliterationState& state, Rng& rng);

/// Poisson-clock version: applies one uniform cut per arrival of a
/// unit-rate Poisson process up to `horizon`.
ObliterationState poisson_obliteration(const GridPath& e, double horizon, Seed seed);

/// Density of the largest fragment under the binary Brownian
/// dislocation measure: 2/sqrt(2 pi x^3 (1-x)^3) on [1/2, 1), else 0.
double eval_binary_dislocation_density(double x);

} // namespace fragstoch

#endif

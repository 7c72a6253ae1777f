#ifndef FRAGSTOCH_PATHS_HPP
#define FRAGSTOCH_PATHS_HPP

#include <cstddef>
#include <utility>

#include "fragstoch/grid_path.hpp"
#include "fragstoch/rng.hpp"

namespace fragstoch {

struct StableParams;

/// Brownian bridge from 0 to 0 over [0, length] on n_steps grid points.
/// Marginal at time s is Gaussian with variance s(length-s)/length;
/// the endpoints are pinned to 0 exactly.
GridPath sample_brownian_bridge(std::size_t n_steps, double length, Seed seed);

/// Normalized Brownian excursion on [0,1]: a unit bridge cyclically
/// shifted at its argmin (Vervaat transform). Zero at both ends and
/// strictly positive at interior grid points.
GridPath sample_normalized_excursion(std::size_t n_steps, Seed seed);

/// Test oracle: normalized excursion obtained by rejection, keeping
/// bridges whose interior grid values are all positive. On a fixed grid
/// this has exactly the law of the Vervaat construction (the cycle
/// lemma: one cyclic shift of a continuous-increment bridge is positive),
/// but through an independent code path. Acceptance rate is 1/(n_steps-1),
/// so keep n_steps small.
GridPath sample_excursion_by_rejection(std::size_t n_steps, Seed seed);

/// Three-dimensional Bessel process from 0: the norm of a standard 3d
/// Brownian motion, exact at grid points.
GridPath sample_bes3(std::size_t n_steps, double horizon, Seed seed);

/// Two independent BES(3) paths glued at the origin; independence comes
/// from disjoint sub-streams of the seed.
std::pair<GridPath, GridPath> sample_two_sided_bes3(std::size_t n_steps_per_side,
                                                    double horizon, Seed seed);

/// One increment of the 1/2-stable subordinator with Laplace exponent
/// q -> 2 sqrt(2q): the first-passage construction 4 t^2 / N^2.
/// Only the canonical parameters (beta = 1/2, C = 2 sqrt 2) are
/// supported here; general-beta sampling lives with the stable
/// analytics.
double sample_half_stable_increment(double t, const StableParams& params, Seed seed);

/// Hitting time of `level` by a BES(3) process from 0, sampled exactly
/// via the series sum_k 2 E_k / (pi^2 k^2) of independent exponentials
/// (Laplace transform sqrt(2q)/sinh sqrt(2q) at level 1), scaled by level^2.
double sample_bes3_hitting_time(double level, Rng& rng, int n_terms = 2000);

/// Hitting time of `level` by simulating the BES(3) path with step dt and
/// a Brownian-bridge crossing correction. Independent of the series route.
double sample_bes3_hitting_time_by_path(double level, double dt, Rng& rng);

/// Total occupation time of (0, level) by a BES(3) process from 0,
/// sampled exactly via sum_k 2 E_k / (pi^2 (k-1/2)^2), scaled by level^2
/// (Laplace transform 1/cosh sqrt(2q) at level 1).
double sample_bes3_occupation_time(double level, Rng& rng, int n_terms = 2000);

/// Same occupation time through the Ciesielski-Taylor identity: first
/// exit time of (-level, level) by a Brownian motion from 0, simulated
/// with step dt and bridge crossing corrections.
double sample_bes3_occupation_time_by_path(double level, double dt, Rng& rng);

} // namespace fragstoch

#endif

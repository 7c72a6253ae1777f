#ifndef FRAGSTOCH_ASYMPTOTICS_HPP
#define FRAGSTOCH_ASYMPTOTICS_HPP

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fragstoch/grid_path.hpp"
#include "fragstoch/opensets.hpp"
#include "fragstoch/rng.hpp"
#include "fragstoch/stats.hpp"

namespace fragstoch {

/// Grid layout for the locally refined excursion: a coarse uniform grid
/// plus exact Brownian-bridge infill of the cells around the argmax.
/// The t^{-2} rescaling near extinction magnifies by ~10^4, so the
/// refinement, not the global grid, sets the usable resolution there.
struct RefineOptions {
    std::size_t coarse_steps = 4097;    // 2^12 cells
    std::size_t half_window_cells = 16; // refined cells each side of the argmax
    std::size_t refine_factor = 512;    // sub-steps per refined cell
    /// Extra zoom passes pinning down the maximum itself: each pass
    /// re-refines the cells around the current argmax by zoom_factor.
    /// Without them the grid max sits ~0.6*sqrt(dt) below the true max,
    /// which shifts every near-extinction level by a visible fraction
    /// of t.
    std::size_t zoom_stages = 3;
    std::size_t zoom_half_cells = 8;
    std::size_t zoom_factor = 64;
};

/// Normalized excursion with conditional infill: interior points of each
/// refined cell are Brownian bridges between the coarse knots, which is
/// the exact conditional law of the underlying bridge given its knots.
/// The composite argmax a.s. lies inside the refined window.
PiecewisePath refined_excursion(Seed seed, const RefineOptions& opt = {});

/// Exact maximum of a path with Brownian-bridge infill between its
/// knots. Every cell whose conditional maximum could beat the running
/// best (bridge-max tail exp(-2(m-a)(m-b)/h) above miss_prob) gets an
/// exact closed-form draw of its maximum, so M carries none of the
/// ~0.58 sqrt(dt) knot-monitoring bias. S is the winning cell's
/// midpoint; `knot` the best knot, the natural anchor for walks.
struct PathMax {
    double M = 0.0;
    double S = 0.0;
    std::size_t knot = 0;
};
PathMax sample_path_max(const PiecewisePath& e, Rng& rng, double miss_prob = 1e-9);

/// First passage of the interpolated path below `level`, walking away
/// from the anchor knot (dir > 0: right, dir < 0: left). Knot-only
/// monitoring misses sub-cell dips, which biases every crossing by
/// ~0.58 sqrt(dt) in level terms; here each cell is tested for a dip
/// with the exact bridge-minimum law exp(-2(a-L)(b-L)/h) and split with
/// a conditional midpoint only where a dip is non-negligible, so the
/// returned time is exact in law up to resolution dt_min and a per-cell
/// miss probability miss_prob. The anchor knot must be above the level;
/// if the path never crosses, the domain endpoint is returned.
double first_passage_below(const PiecewisePath& e, std::size_t anchor, double level,
                           int dir, Rng& rng, double dt_min = 1e-12,
                           double miss_prob = 1e-9);

/// Rescaled near-extinction snapshots: for each ratio r, the open set
/// (F_below(r t) - S)/t^2 restricted to the window (-window_n, window_n),
/// where F_below(h) = {s: e_s > M - h}, M = max e, S = argmax.
struct ExtinctionFrame {
    double M = 0.0;
    double S = 0.0;
    bool rejected = false; // the event window_n * t^2 < S < 1 - window_n * t^2 failed
    std::vector<std::pair<double, OpenSet>> snapshots; // (r, on-line set), r ascending
};
ExtinctionFrame extinction_frame(const PiecewisePath& e, double t,
                                 std::span<const double> r_grid, int window_n);

/// The limit object: {s in R: Z_s < r} for a two-sided BES(3) path Z,
/// restricted to (-window_n, window_n). z_left is Z on (-inf, 0] with
/// time running away from 0.
struct LimitFrame {
    std::vector<std::pair<double, OpenSet>> snapshots;
};
LimitFrame limit_frame(const GridPath& z_left, const GridPath& z_right,
                       std::span<const double> r_grid, int window_n);

/// Per-snapshot summary: H = length of the component containing 0,
/// M_leb = total length, L_span = smallest enclosing interval. Always
/// H <= M_leb <= L_span.
struct HmlStat {
    double r = 0.0;
    double H = 0.0;
    double M_leb = 0.0;
    double L_span = 0.0;
};
std::vector<HmlStat> statistics_HML(const std::vector<std::pair<double, OpenSet>>& snapshots);

/// CSV with one row per (frame, r): frame_index,r,H,M_leb,L_span.
std::string hml_csv(const std::vector<std::vector<HmlStat>>& frames);

/// Fixed-time check of the long-excursion limit: under the length-v
/// excursion law the rescaled path sqrt(v) * e_{s/v} has, for s << v,
/// the BES(3) marginal chi(3) * sqrt(s). The exact finite-v marginal is
/// chi(3) * sqrt(s (1 - s/v)), so the comparison must pass for v >> s
/// and fail for v = s (the negative control).
struct JeulinReport {
    std::size_t v = 0;
    std::size_t n_paths = 0;
    std::vector<std::pair<double, KsResult>> marginal_ks; // per s, vs chi(3)*sqrt(s)
    // per s, vs the exact finite-v law chi(3)*sqrt(s(1-s/v))
    std::vector<std::pair<double, KsResult>> marginal_ks_exact;
    // per s, analytic sup-distance between the finite-v and limit CDFs;
    // small iff the limit comparison is meaningful at this (v, s)
    std::vector<std::pair<double, double>> limit_sup_dist;
    double front_back_correlation = 0.0; // between X_{s_max} and the reversed X_{s_max}
};
JeulinReport jeulin_fixed_time_check(std::size_t v, std::span<const double> s_grid,
                                     std::size_t n_paths, Seed seed,
                                     std::size_t steps_per_unit = 64);

/// Iterated-logarithm diagnostic: running minima over t of
/// g(t) * {H_t, M_t, L_t} with g(t) = log log(1/t) / (2 t^2), one row of
/// minima per path over the (descending) level grid. The true liminf is
/// 1 but log log convergence is far outside desk scale, so this is a
/// calibrated diagnostic, not a sharp test.
struct LilCurves {
    std::vector<double> levels; // descending, e.g. 2^{-3} .. 2^{-9}
    std::vector<std::vector<double>> run_min_H; // [path][level index]
    std::vector<std::vector<double>> run_min_M;
    std::vector<std::vector<double>> run_min_L;
};
LilCurves lil_diagnostic(std::size_t n_paths, std::span<const double> levels, Seed seed,
                         const RefineOptions& opt = {});

/// Cross-path quantile of the running minima at the finest level.
double lil_median_at_finest(const std::vector<std::vector<double>>& run_min);

/// JSON summary (medians and quartiles per level) and a gnuplot script
/// for the curves; renderer-agnostic text.
std::string lil_summary_json(const LilCurves& curves);
std::string lil_plot_script(const std::string& csv_name);
std::string lil_csv(const LilCurves& curves);

} // namespace fragstoch

#endif

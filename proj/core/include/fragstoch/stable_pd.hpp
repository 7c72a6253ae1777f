#ifndef FRAGSTOCH_STABLE_PD_HPP
#define FRAGSTOCH_STABLE_PD_HPP

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fragstoch/opensets.hpp"
#include "fragstoch/quadrature.hpp"
#include "fragstoch/rng.hpp"

namespace fragstoch {

/// Parameters of a stable subordinator with Laplace exponent q -> C q^beta.
struct StableParams {
    double beta;
    double C;

    /// beta = 1/2, C = 2*sqrt(2): the subordinator behind the Brownian
    /// height fragmentation.
    static StableParams brownian();

    /// beta = 1 - 1/alpha, C = Gamma(1-beta)/Gamma(2-beta): the stable-tree
    /// normalization for alpha in (1,2).
    static StableParams stable_tree(double alpha);

    [[nodiscard]] bool is_brownian() const noexcept;
};

/// Density f_t(x) of the subordinator at time t. Closed form at beta=1/2;
/// general beta through the alternating power series for f_1 (switching to
/// Zolotarev's integral representation where the series cancels badly),
/// rescaled by the self-similarity of f.
double stable_density(double t, double x, const StableParams& params);

/// Potential density h(x) = 1 / (C Gamma(beta) x^{1-beta}); equals
/// the integral of t -> f_t(x) over (0, infinity).
double potential_h(double x, const StableParams& params);

/// Density in a of the death time of the conditioned subordinator started
/// at x: f_a(x) / h(x). At beta=1/2, x=1 this is 4 a exp(-2 a^2).
double death_time_density(double a, double x, const StableParams& params);

/// h-transformed transition density p_s(x, y) = f_s(x-y) h(y) / h(x) for
/// 0 < y < x; zero for y >= x (the paths are strictly decreasing).
double transition_density(double s, double x, double y, const StableParams& params);

/// Decreasing path from `start` to 0, absorbed at death_time; the path
/// value at t is start minus the jumps at times <= t.
struct ConditionedSubPath {
    struct Jump {
        double time;
        double size;
    };

    double start = 1.0;
    double death_time = 0.0;
    std::vector<Jump> jumps; // times strictly increasing, sizes > 0
    /// Mass carried by increments below the sampler's resolution; those
    /// increments are kept in `jumps` but flagged by this total.
    double below_resolution_mass = 0.0;

    [[nodiscard]] double value_at(double t) const noexcept;
    [[nodiscard]] double jump_sum() const noexcept;
    /// Jump sizes over start, sorted nonincreasing; sums to 1 up to the
    /// sampler's resolution.
    [[nodiscard]] RankedMasses ranked_jumps() const;
    [[nodiscard]] std::string to_json() const;
};

/// Route one: draw the death time from its exact density, then fill in a
/// subordinator bridge from `start` to 0 by recursive dyadic midpoint
/// sampling. At beta=1/2 the midpoint law reduces to a closed form (a
/// Gaussian in the variable (1-2w)/sqrt(w(1-w))); for other beta the
/// midpoint is drawn by inverse CDF on an adaptive grid of the
/// conditional density.
ConditionedSubPath sample_conditioned_bridge_method(double start, const StableParams& params,
                                                    Seed seed, int depth = 14);

struct LampertiOptions {
    /// Small-jump truncation for the Lamperti subordinator; chosen so the
    /// expected truncated mass contribution stays below ~1e-4.
    double epsilon = 4e-9;
    /// Stop once the underlying subordinator exceeds this level; the
    /// residual clock mass is exp(-beta*cutoff)/phi(beta) in expectation.
    double xi_cutoff = 30.0;
};

/// Route two (the independent construction of the same law): simulate the
/// Lamperti subordinator xi with Levy density beta*C/Gamma(1-beta) *
/// e^x/(e^x-1)^{1+beta} as a compound Poisson process above `epsilon`
/// (the tail function inverts in closed form), then time-change
/// t -> exp(-xi) with clock exp(-beta*xi).
ConditionedSubPath sample_conditioned_lamperti_method(const StableParams& params, Seed seed,
                                                      const LampertiOptions& opts = {});

/// Levy density of the Lamperti subordinator xi.
double lamperti_levy_density(double x, const StableParams& params);

/// Laplace exponent of the death-time clock subordinator (xi rescaled by
/// beta^2, so that the death time is the exponential functional with
/// delta = -1/beta, i.e. -2 in the Brownian case), by adaptive quadrature
/// of its Levy density. At beta=1/2: phi(2) = sqrt(8/pi).
double death_clock_exponent(double q, const StableParams& params);

/// delta of the death-time exponential functional: -1/beta.
double death_clock_delta(const StableParams& params);

/// k-th moment of the death time: k! / prod_{i=1..k} phi(-delta*i),
/// with phi evaluated by quadrature.
double moments_of_death_time(int k, const StableParams& params);

/// Two-parameter Poisson-Dirichlet parameters; stick k has law
/// Beta(1-beta, theta + k*beta).
struct PDParams {
    double beta;
    double theta;
};

/// Ranked PD(beta, theta) masses from stick breaking; the residual mass
/// after n_sticks sticks is appended as a final stick so the sum is 1.
RankedMasses sample_pd(const PDParams& pd, std::size_t n_sticks, Seed seed);

/// Size-biased permutation: sequential picks with probability
/// proportional to remaining mass.
std::vector<double> size_biased_permutation(const RankedMasses& masses, Seed seed);

/// Stick-breaking residual ratios Y_k from a size-biased sequence:
/// Y_1 = v_1, Y_k = v_k / (1 - v_1 - ... - v_{k-1}).
std::vector<double> stick_ratios(std::span<const double> size_biased, std::size_t count);

/// Joint density of the first n size-biased relative jumps and the death
/// time a of the conditioned subordinator started at 1:
///   a^n Theta(y1) Theta(yb1*y2) ... f_a(yb1*...*ybn) / h(1),
/// with Theta(x) = x * rho(x), rho the Levy density of sigma and
/// yb = 1 - y.
double eval_ppy_joint_density(std::span<const double> y, double a, const StableParams& params);

/// Importance-weighted draw from the stable-tree dislocation measure
/// (beta = 1 - 1/alpha with alpha in (1,2), so beta in (0,1/2)): the
/// n_jumps largest jumps of a (1-beta)-stable subordinator over [0,1],
/// normalized by their sum so they add to 1 exactly, with weight T_1
/// (including the mean of the truncated small jumps).
std::pair<RankedMasses, double> sample_nu_minus(const StableParams& params,
                                                std::size_t n_jumps, Seed seed);

} // namespace fragstoch

#endif

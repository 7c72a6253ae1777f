#include "fragstoch/stable_pd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace fragstoch {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

// Density of the standard beta-stable subordinator at time 1, Laplace
// transform exp(-q^beta).
double standard_stable_density(double x, double beta) {
    if (!(x > 0.0)) return 0.0;
    if (beta == 0.5) return std::pow(x, -1.5) * std::exp(-0.25 / x) / (2.0 * kSqrtPi);

    // Alternating power series in x^{-beta}; well conditioned for x not
    // too small.
    double sum = 0.0;
    double max_term = 0.0;
    double prev = HUGE_VAL;
    bool converged = false;
    for (int k = 1; k <= 400; ++k) {
        const double kb = k * beta;
        const double mag =
            std::exp(std::lgamma(kb + 1.0) - std::lgamma(k + 1.0) - (kb + 1.0) * std::log(x));
        const double term = (k % 2 == 1 ? mag : -mag) * std::sin(M_PI * kb);
        sum += term;
        max_term = std::max(max_term, mag);
        if (k > 2 && mag < prev && mag <= 1e-16 * std::fabs(sum) + 1e-300) {
            converged = true;
            break;
        }
        prev = mag;
    }
    // cancellation check: roundoff amplified by max_term / sum
    if (converged && sum > 0.0 && max_term * 1e-15 < 1e-10 * sum) return sum / M_PI;

    // Zolotarev's integral representation; exact and stable for small x,
    // where the series loses all its digits.
    const double r = beta / (1.0 - beta);
    const double lambda = std::pow(x, -r);
    auto U = [&](double phi) {
        const double s = std::sin(phi);
        if (s <= 0.0) return HUGE_VAL;
        return std::pow(std::sin(beta * phi), r) * std::sin((1.0 - beta) * phi) /
               std::pow(s, r + 1.0);
    };
    auto integrand = [&](double phi) {
        if (phi <= 0.0) {
            const double u0 = std::pow(beta, r) * (1.0 - beta);
            return u0 * std::exp(-lambda * u0);
        }
        const double u = U(phi);
        const double e = lambda * u;
        if (e > 700.0) return 0.0;
        return u * std::exp(-e);
    };
    // stop where the exponential has killed the integrand (U blows up at pi)
    const double a_edge = std::pow(std::sin(beta * M_PI), r) * std::sin((1.0 - beta) * M_PI);
    double delta = std::pow(lambda * a_edge / 46.0, 1.0 - beta);
    delta = std::min(delta, 0.5 * M_PI);
    const double integral = integrate(integrand, 0.0, M_PI - delta, 1e-12, 40);
    return r * std::pow(x, -1.0 - r) * integral / M_PI;
}

void check_params(const StableParams& p) {
    if (!(p.beta > 0.0 && p.beta < 1.0 && p.C > 0.0))
        throw std::invalid_argument("StableParams: need beta in (0,1), C > 0");
}

} // namespace

StableParams StableParams::brownian() { return {0.5, 2.0 * std::sqrt(2.0)}; }

StableParams StableParams::stable_tree(double alpha) {
    if (!(alpha > 1.0 && alpha < 2.0))
        throw std::invalid_argument("StableParams::stable_tree: alpha in (1,2)");
    const double beta = 1.0 - 1.0 / alpha;
    return {beta, std::tgamma(1.0 - beta) / std::tgamma(2.0 - beta)};
}

bool StableParams::is_brownian() const noexcept {
    return beta == 0.5 && std::fabs(C - 2.0 * std::sqrt(2.0)) < 1e-12;
}

double stable_density(double t, double x, const StableParams& params) {
    check_params(params);
    if (!(t > 0.0)) throw std::invalid_argument("stable_density: t > 0");
    if (!(x > 0.0)) throw std::invalid_argument("stable_density: x > 0");
    // sigma_t = (C t)^{1/beta} * S with S standard
    const double scale = std::pow(params.C * t, 1.0 / params.beta);
    return standard_stable_density(x / scale, params.beta) / scale;
}

double potential_h(double x, const StableParams& params) {
    check_params(params);
    if (!(x > 0.0)) throw std::invalid_argument("potential_h: x > 0");
    return 1.0 / (params.C * std::tgamma(params.beta) * std::pow(x, 1.0 - params.beta));
}

double death_time_density(double a, double x, const StableParams& params) {
    if (!(a > 0.0)) throw std::invalid_argument("death_time_density: a > 0");
    return stable_density(a, x, params) / potential_h(x, params);
}

double transition_density(double s, double x, double y, const StableParams& params) {
    if (!(s > 0.0) || !(x > 0.0))
        throw std::invalid_argument("transition_density: s > 0, x > 0");
    if (y >= x || y <= 0.0) return 0.0;
    return stable_density(s, x - y, params) * potential_h(y, params) / potential_h(x, params);
}

double ConditionedSubPath::value_at(double t) const noexcept {
    // absorbed exactly at 0: the surviving mass past the last jump is
    // floating-point dust, not a state
    if (t >= death_time) return 0.0;
    double v = start;
    for (const auto& j : jumps) {
        if (j.time > t) break;
        v -= j.size;
    }
    return v;
}

double ConditionedSubPath::jump_sum() const noexcept {
    double s = 0.0;
    for (const auto& j : jumps) s += j.size;
    return s;
}

RankedMasses ConditionedSubPath::ranked_jumps() const {
    RankedMasses out;
    out.masses.reserve(jumps.size());
    for (const auto& j : jumps) out.masses.push_back(j.size / start);
    std::sort(out.masses.begin(), out.masses.end(), std::greater<>());
    return out;
}

std::string ConditionedSubPath::to_json() const {
    nlohmann::json j;
    j["start"] = start;
    j["death_time"] = death_time;
    j["below_resolution_mass"] = below_resolution_mass;
    auto arr = nlohmann::json::array();
    for (const auto& jp : jumps) arr.push_back({jp.time, jp.size});
    j["jumps"] = std::move(arr);
    return j.dump();
}

namespace {

// Death time of the conditioned path started at x: density a -> f_a(x)/h(x).
double sample_death_time(double x, const StableParams& p, Rng& rng) {
    if (p.beta == 0.5) {
        // density proportional to a*exp(-C^2 a^2/(4x)): a^2 is exponential
        return 2.0 * std::sqrt(x * rng.exponential()) / p.C;
    }
    // generic inverse CDF by bisection on the quadrature of the density
    auto cdf = [&](double a) {
        return integrate([&](double s) { return s > 0.0 ? death_time_density(s, x, p) : 0.0; },
                         0.0, a, 1e-9, 40);
    };
    double hi = std::pow(x, p.beta) / p.C; // self-similar time scale
    while (cdf(hi) < 1.0 - 1e-12) hi *= 2.0;
    const double u = rng.uniform();
    double lo = 0.0;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (cdf(mid) < u ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// First-half increment of a subordinator bridge with drop D over total
// length 2s, as a fraction w of D.
double sample_midpoint_fraction(double D, double s, const StableParams& p, Rng& rng) {
    if (p.beta == 0.5) {
        // The density of u = wD given the sum is f_s(u) f_s(D-u)/f_{2s}(D);
        // in the variable v = (1-2w)/sqrt(w(1-w)) this is exactly Gaussian
        // with variance 2D/(C^2 s^2).
        const double v = rng.normal() * std::sqrt(2.0 * D) / (p.C * s);
        return 0.5 * (1.0 - v / std::sqrt(v * v + 4.0));
    }
    // generic: tabulated inverse CDF of w -> f_s(Dw) f_s(D(1-w))
    constexpr int m = 256;
    double pdf[m];
    double cum[m + 1];
    cum[0] = 0.0;
    for (int i = 0; i < m; ++i) {
        const double w = (i + 0.5) / m;
        pdf[i] = stable_density(s, D * w, p) * stable_density(s, D * (1.0 - w), p);
        cum[i + 1] = cum[i] + pdf[i];
    }
    if (!(cum[m] > 0.0))
        throw numeric_error("sample_midpoint_fraction: degenerate midpoint density");
    const double target = rng.uniform() * cum[m];
    const auto* it = std::upper_bound(cum, cum + m + 1, target);
    const int i = static_cast<int>(std::max<std::ptrdiff_t>(1, it - cum)) - 1;
    const double frac = (target - cum[i]) / (cum[i + 1] - cum[i]);
    return (i + frac) / m;
}

} // namespace

ConditionedSubPath sample_conditioned_bridge_method(double start, const StableParams& params,
                                                    Seed seed, int depth) {
    check_params(params);
    if (!(start > 0.0))
        throw std::invalid_argument("sample_conditioned_bridge_method: start > 0");
    if (depth < 1 || depth > 26)
        throw std::invalid_argument("sample_conditioned_bridge_method: depth in [1,26]");

    Rng rng(seed);
    ConditionedSubPath out;
    out.start = start;
    out.death_time = sample_death_time(start, params, rng);

    // dyadic refinement of the bridge start -> 0 over [0, death_time]
    std::vector<double> drops{start};
    double half = 0.5 * out.death_time;
    for (int level = 0; level < depth; ++level, half *= 0.5) {
        std::vector<double> next;
        next.reserve(drops.size() * 2);
        for (double D : drops) {
            const double w = D > 0.0 ? sample_midpoint_fraction(D, half, params, rng) : 0.5;
            next.push_back(w * D);
            next.push_back((1.0 - w) * D); // sums to D exactly
        }
        drops.swap(next);
    }

    const double dt = out.death_time / static_cast<double>(drops.size());
    // increments below the leaf's self-similar mass scale are grid dust,
    // not resolved jumps
    const double resolution = std::pow(params.C * dt, 1.0 / params.beta);
    out.jumps.reserve(drops.size());
    for (std::size_t k = 0; k < drops.size(); ++k) {
        if (drops[k] <= 0.0) continue;
        out.jumps.push_back({(static_cast<double>(k) + 0.5) * dt, drops[k]});
        if (drops[k] < resolution) out.below_resolution_mass += drops[k];
    }
    return out;
}

double lamperti_levy_density(double x, const StableParams& params) {
    check_params(params);
    if (!(x > 0.0)) return 0.0;
    const double b = params.beta;
    return b * params.C / std::tgamma(1.0 - b) * std::exp(x) *
           std::pow(std::expm1(x), -1.0 - b);
}

ConditionedSubPath sample_conditioned_lamperti_method(const StableParams& params, Seed seed,
                                                      const LampertiOptions& opts) {
    check_params(params);
    if (!(opts.epsilon > 0.0 && opts.epsilon < 1e-2))
        throw std::invalid_argument("lamperti: epsilon in (0, 1e-2)");
    const double b = params.beta;
    const double g1b = std::tgamma(1.0 - b);
    const double base = std::expm1(opts.epsilon);
    const double rate = params.C / g1b * std::pow(base, -b); // jumps/unit xi-time
    // expected relative mass lost to the truncated small jumps, per unit
    // xi-time; recorded as a resolution figure, not corrected for
    const double dust_rate = b * params.C / g1b * std::pow(opts.epsilon, 1.0 - b) / (1.0 - b);
    if (dust_rate > 1e-3)
        throw numeric_error("lamperti: truncation epsilon too coarse for 1e-3 mass resolution");

    Rng rng(seed);
    ConditionedSubPath out;
    out.start = 1.0;
    double xi = 0.0;
    double clock = 0.0;
    double xi_time = 0.0;
    while (xi < opts.xi_cutoff) {
        const double wait = rng.exponential() / rate;
        clock += std::exp(-b * xi) * wait;
        xi_time += wait;
        // inverse of the truncated Levy tail: closed form
        const double u = rng.uniform();
        const double z = std::log1p(base * std::pow(u, -1.0 / b));
        const double mass_before = std::exp(-xi);
        xi += z;
        const double size = mass_before - std::exp(-xi);
        out.jumps.push_back({clock, size});
    }
    // mean of the remaining clock from level xi: exp(-beta*xi)/phi_xi(beta),
    // phi_xi(q) = C Gamma(q+beta)/Gamma(q)
    const double phi_beta = params.C * std::tgamma(2.0 * b) / std::tgamma(b);
    out.death_time = clock + std::exp(-b * xi) / phi_beta;
    out.below_resolution_mass = dust_rate * xi_time;
    return out;
}

double death_clock_exponent(double q, const StableParams& params) {
    check_params(params);
    if (!(q >= 0.0)) throw std::invalid_argument("death_clock_exponent: q >= 0");
    if (q == 0.0) return 0.0;
    const double b = params.beta;
    const double b2 = b * b;
    // Levy density of the clock subordinator: xi rescaled by beta^2
    auto rho = [&](double x) { return lamperti_levy_density(x / b2, params) / b2; };
    // substitution x = s^{1/(1-beta)} removes the x^{-beta} edge singularity
    const double p = 1.0 / (1.0 - b);
    auto f = [&](double s) {
        if (s <= 1e-300)
            return q * std::pow(b, 2.0 * b + 1.0) * params.C / (std::tgamma(1.0 - b) * (1.0 - b));
        const double x = std::pow(s, p);
        return -std::expm1(-q * x) * rho(x) * p * std::pow(s, p - 1.0);
    };
    const double X = 64.0 * b; // tail of rho is exponentially small past here
    const double body = integrate(f, 0.0, std::pow(X, 1.0 - b), 1e-11, 44);
    const double tail = params.C / std::tgamma(1.0 - b) * std::pow(std::expm1(X / b2), -b);
    return body + tail;
}

double death_clock_delta(const StableParams& params) {
    check_params(params);
    return -1.0 / params.beta;
}

double moments_of_death_time(int k, const StableParams& params) {
    if (k < 1) throw std::invalid_argument("moments_of_death_time: k >= 1");
    double denom = 1.0;
    const double step = -death_clock_delta(params); // 1/beta
    for (int i = 1; i <= k; ++i) denom *= death_clock_exponent(step * i, params);
    return std::tgamma(static_cast<double>(k) + 1.0) / denom;
}

RankedMasses sample_pd(const PDParams& pd, std::size_t n_sticks, Seed seed) {
    if (!(pd.beta > 0.0 && pd.beta < 1.0 && pd.theta > -pd.beta))
        throw std::invalid_argument("sample_pd: beta in (0,1), theta > -beta");
    if (n_sticks < 1) throw std::invalid_argument("sample_pd: n_sticks >= 1");
    Rng rng(seed);
    RankedMasses out;
    out.masses.reserve(n_sticks + 1);
    double rest = 1.0;
    for (std::size_t k = 1; k <= n_sticks; ++k) {
        const double y = rng.beta(1.0 - pd.beta, pd.theta + static_cast<double>(k) * pd.beta);
        out.masses.push_back(y * rest);
        rest *= 1.0 - y;
    }
    if (rest > 0.0) out.masses.push_back(rest); // residual kept so the sum is 1
    std::sort(out.masses.begin(), out.masses.end(), std::greater<>());
    return out;
}

std::vector<double> size_biased_permutation(const RankedMasses& masses, Seed seed) {
    if (!(masses.sum() > 0.0)) throw std::invalid_argument("size_biased_permutation: sum > 0");
    Rng rng(seed);
    // sequential mass-proportional picks == sorting by exponential clocks E_i/m_i
    std::vector<std::pair<double, double>> keyed;
    keyed.reserve(masses.masses.size());
    for (double m : masses.masses) keyed.emplace_back(rng.exponential() / m, m);
    std::sort(keyed.begin(), keyed.end());
    std::vector<double> out;
    out.reserve(keyed.size());
    for (const auto& [key, m] : keyed) out.push_back(m);
    return out;
}

std::vector<double> stick_ratios(std::span<const double> size_biased, std::size_t count) {
    std::vector<double> out;
    out.reserve(std::min(count, size_biased.size()));
    double rest = 1.0;
    for (std::size_t k = 0; k < size_biased.size() && k < count; ++k) {
        out.push_back(size_biased[k] / rest);
        rest -= size_biased[k];
        if (!(rest > 0.0)) break;
    }
    return out;
}

double eval_ppy_joint_density(std::span<const double> y, double a, const StableParams& params) {
    check_params(params);
    if (!(a > 0.0)) throw std::invalid_argument("eval_ppy_joint_density: a > 0");
    const double b = params.beta;
    const double theta_c = b * params.C / std::tgamma(1.0 - b); // Theta(x) = theta_c * x^{-beta}
    double val = std::pow(a, static_cast<double>(y.size()));
    double prefix = 1.0;
    for (double yi : y) {
        if (!(yi > 0.0 && yi < 1.0))
            throw std::invalid_argument("eval_ppy_joint_density: y_i in (0,1)");
        val *= theta_c * std::pow(prefix * yi, -b);
        prefix *= 1.0 - yi;
    }
    return val * stable_density(a, prefix, params) / potential_h(1.0, params);
}

std::pair<RankedMasses, double> sample_nu_minus(const StableParams& params,
                                                std::size_t n_jumps, Seed seed) {
    check_params(params);
    if (!(params.beta < 0.5))
        throw std::invalid_argument("sample_nu_minus: beta in (0,1/2), i.e. alpha in (1,2)");
    if (n_jumps < 2) throw std::invalid_argument("sample_nu_minus: n_jumps >= 2");
    // T is a (1-beta)-stable subordinator (index 1/alpha); its ordered
    // jumps over [0,1] are J_k = (Gamma(1-g) * G_k)^{-1/g} for the arrival
    // times G_k of a unit Poisson process
    const double g = 1.0 - params.beta;
    const double cg = std::tgamma(1.0 - g);
    Rng rng(seed);
    std::vector<double> jumps(n_jumps);
    double arrival = 0.0;
    double sum = 0.0;
    for (std::size_t k = 0; k < n_jumps; ++k) {
        arrival += rng.exponential();
        jumps[k] = std::pow(cg * arrival, -1.0 / g);
        sum += jumps[k];
    }
    // mean of the discarded small jumps, for the weight only
    const double tail_mean = g / (cg * (1.0 - g)) * std::pow(jumps.back(), 1.0 - g);
    RankedMasses out;
    out.masses.reserve(n_jumps);
    for (double j : jumps) out.masses.push_back(j / sum);
    return {std::move(out), sum + tail_mean};
}

} // namespace fragstoch

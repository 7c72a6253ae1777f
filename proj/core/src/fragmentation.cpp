#include "fragstoch/fragmentation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace fragstoch {

namespace {

// Two-sided running-minimum profile of e toward u, on the grid nodes
// with u inserted as an explicit breakpoint.
struct MinProfile {
    std::vector<double> times;
    std::vector<double> e_vals;
    std::vector<double> k_vals;
    std::size_t u_index = 0;
};

double shift_off_nodes(const GridPath& e, double u) {
    const double lo = e.time(0), hi = e.time(e.size() - 1);
    if (!(u > lo && u < hi))
        throw std::invalid_argument("tagged point u must be interior to the domain");
    const double pos = (u - e.t0) / e.dt;
    const double nearest = std::round(pos);
    if (pos == nearest) // exact node collision: deterministic interior shift
        u += (u < 0.5 * (lo + hi) ? 0.5 : -0.5) * e.dt;
    return u;
}

MinProfile min_profile(const GridPath& e, double u) {
    const std::size_t n = e.size();
    const auto jc = static_cast<std::size_t>((u - e.t0) / e.dt); // cell of u

    // knot-level pass: e with u inserted, then the two-sided running min
    std::vector<double> times, ev;
    times.reserve(n + 1);
    ev.reserve(n + 1);
    for (std::size_t k = 0; k <= jc; ++k) {
        times.push_back(e.time(k));
        ev.push_back(e.values[k]);
    }
    const std::size_t ui = times.size();
    times.push_back(u);
    ev.push_back(e.value_at(u));
    for (std::size_t k = jc + 1; k < n; ++k) {
        times.push_back(e.time(k));
        ev.push_back(e.values[k]);
    }
    std::vector<double> kv(times.size());
    kv[ui] = ev[ui];
    for (std::size_t k = ui; k-- > 0;) kv[k] = std::min(ev[k], kv[k + 1]);
    for (std::size_t k = ui + 1; k < kv.size(); ++k) kv[k] = std::min(ev[k], kv[k - 1]);

    // The running min of the *interpolated* path follows e up to the point
    // where e crosses the incoming plateau height, then goes flat. Insert
    // those crossings so plateaus start exactly where e - K starts being
    // positive; without them every plateau boundary is off by up to one
    // cell and the jump <-> excursion-interval bijection breaks.
    MinProfile p;
    p.times.reserve(2 * times.size());
    p.e_vals.reserve(2 * times.size());
    p.k_vals.reserve(2 * times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (k > 0) {
            const bool left = k <= ui;
            const double level = left ? kv[k] : kv[k - 1]; // plateau being entered/left
            const double lo = left ? kv[k - 1] : kv[k];
            if (lo < level) {
                const double ea = ev[k - 1], eb = ev[k];
                // e crosses `level` inside the cell unless it touches at a knot
                const double edge = left ? ea : eb;
                if (edge != level) {
                    const double frac = (level - ea) / (eb - ea);
                    const double s = times[k - 1] + frac * (times[k] - times[k - 1]);
                    if (s > p.times.back() && s < times[k]) {
                        p.times.push_back(s);
                        p.e_vals.push_back(level);
                        p.k_vals.push_back(level);
                    }
                }
            }
        }
        if (k == ui) p.u_index = p.times.size();
        p.times.push_back(times[k]);
        p.e_vals.push_back(ev[k]);
        p.k_vals.push_back(kv[k]);
    }
    return p;
}

// Plateaus of K are the flat runs of exactly equal values; each one is
// an excursion interval of e - K and carries one jump of the mass.
struct Plateau {
    double level;
    double length;
};

std::vector<Plateau> plateaus(const MinProfile& p) {
    std::vector<Plateau> out;
    const std::size_t m = p.k_vals.size();
    std::size_t k = 0;
    while (k + 1 < m) {
        if (p.k_vals[k + 1] == p.k_vals[k]) {
            std::size_t end = k + 1;
            while (end + 1 < m && p.k_vals[end + 1] == p.k_vals[end]) ++end;
            out.push_back({p.k_vals[k], p.times[end] - p.times[k]});
            k = end;
        } else {
            ++k;
        }
    }
    return out;
}

// Boundary of {K > t} on the nondecreasing side [0, u_index]; K[0] <= t
// is required (true for t >= 0 on an excursion).
double left_boundary(const MinProfile& p, double t) {
    std::size_t lo = 0, hi = p.u_index;
    // last index with K <= t
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        (p.k_vals[mid] <= t ? lo : hi) = mid;
    }
    if (p.k_vals[hi] <= t) return p.times[hi]; // t above the whole side
    const double dv = p.k_vals[hi] - p.k_vals[lo];
    return p.times[lo] + (p.times[hi] - p.times[lo]) * (t - p.k_vals[lo]) / dv;
}

double right_boundary(const MinProfile& p, double t) {
    std::size_t lo = p.u_index, hi = p.k_vals.size() - 1;
    // first index with K <= t
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        (p.k_vals[mid] <= t ? hi : lo) = mid;
    }
    if (p.k_vals[lo] <= t) return p.times[lo];
    const double dv = p.k_vals[hi] - p.k_vals[lo];
    return p.times[lo] + (p.times[hi] - p.times[lo]) * (t - p.k_vals[lo]) / dv;
}

double mass_at(const MinProfile& p, double t) {
    if (p.k_vals[p.u_index] <= t) return 0.0; // at/above the death level
    return right_boundary(p, t) - left_boundary(p, t);
}

} // namespace

double TaggedFragmentPath::jump_sum() const noexcept {
    double s = 0.0;
    for (const auto& j : jumps) s += j.size;
    return s;
}

std::string TaggedFragmentPath::to_json() const {
    nlohmann::json j;
    j["start_mass"] = start_mass;
    j["death_level"] = death_level;
    j["u"] = u;
    j["unresolved_mass"] = unresolved_mass;
    auto st = nlohmann::json::array();
    for (const auto& [lvl, mass] : steps) st.push_back({lvl, mass});
    j["steps"] = std::move(st);
    auto jm = nlohmann::json::array();
    for (const auto& jp : jumps) jm.push_back({jp.level, jp.size});
    j["jumps"] = std::move(jm);
    return j.dump();
}

TaggedFragmentPath tagged_fragment(const GridPath& e, double u, std::size_t n_levels,
                                   double jump_threshold) {
    u = shift_off_nodes(e, u);
    const MinProfile p = min_profile(e, u);
    if (jump_threshold < 0.0) jump_threshold = 2.0 * e.dt;

    TaggedFragmentPath tf;
    tf.u = u;
    tf.start_mass = e.duration();
    tf.death_level = p.k_vals[p.u_index]; // e(u)

    auto flats = plateaus(p);
    std::sort(flats.begin(), flats.end(),
              [](const Plateau& a, const Plateau& b) { return a.level < b.level; });
    std::vector<double> levels;
    levels.reserve(flats.size() + n_levels + 1);
    for (const auto& f : flats) {
        if (f.length >= jump_threshold)
            tf.jumps.push_back({f.level, f.length});
        else
            tf.unresolved_mass += f.length;
        levels.push_back(f.level);
    }
    for (std::size_t k = 0; k <= n_levels; ++k)
        levels.push_back(tf.death_level * static_cast<double>(k) /
                         static_cast<double>(n_levels == 0 ? 1 : n_levels));
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    tf.steps.reserve(levels.size());
    for (double lvl : levels) tf.steps.emplace_back(lvl, mass_at(p, lvl));
    return tf;
}

RankedMasses ranked_jumps(const TaggedFragmentPath& tf) {
    if (tf.jumps.empty()) throw std::logic_error("ranked_jumps: no jumps recorded");
    RankedMasses out;
    out.masses.reserve(tf.jumps.size());
    const double total = tf.jump_sum();
    for (const auto& j : tf.jumps) out.masses.push_back(j.size / total);
    std::sort(out.masses.begin(), out.masses.end(), std::greater<>());
    return out;
}

BPDecomposition bertoin_pitman(const GridPath& e, double u) {
    u = shift_off_nodes(e, u);
    MinProfile p = min_profile(e, u);
    BPDecomposition out;
    out.u = u;
    out.zeta = p.k_vals[p.u_index];
    std::vector<double> b(p.times.size());
    for (std::size_t k = 0; k < b.size(); ++k) b[k] = p.e_vals[k] - p.k_vals[k];
    out.b = PiecewisePath(p.times, std::move(b));
    out.K = PiecewisePath(std::move(p.times), std::move(p.k_vals));
    return out;
}

GridPath haas_transform(const GridPath& e) {
    const std::size_t n = e.size();
    if (n < 3) throw std::invalid_argument("haas_transform: need at least 3 knots");
    const std::size_t m = n - 1; // increments; e.values[m] == e.values[0] == 0
    const std::size_t S = e.argmax();
    const double M = e.values[S];
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = M - e.values[(S + k) % m];
    out[n - 1] = 0.0; // (S + n - 1) mod m == S: closes at zero exactly
    return GridPath(e.t0, e.dt, std::move(out));
}

ObliterationState ObliterationState::from_excursion(const GridPath& e) {
    ObliterationState s;
    s.b = e;
    s.V = level_set(e, 0.0);
    s.n = 0;
    return s;
}

ObliterationState obliterate(const ObliterationState& state, double u) {
    const auto comp = component_containing(state.V, u); // throws outside domain
    if (!comp) throw std::invalid_argument("obliterate: u not inside the positivity set");

    ObliterationState next = state;
    const GridPath& b = state.b;
    const double bu = b.value_at(u);
    // node range strictly inside the component
    const auto first = static_cast<std::size_t>(std::ceil((comp->l - b.t0) / b.dt - 1e-12));
    const auto last = static_cast<std::size_t>(std::floor((comp->r - b.t0) / b.dt + 1e-12));
    const auto uc = static_cast<std::size_t>((u - b.t0) / b.dt); // u in [uc, uc+1)

    // two-sided running minimum toward u, node-wise, seeded with b(u)
    double running = bu;
    for (std::size_t k = std::min(uc, last) + 1; k-- > first;) {
        running = std::min(running, b.values[k]);
        next.b.values[k] = b.values[k] - running;
        if (k == 0) break;
    }
    running = bu;
    for (std::size_t k = uc + 1; k <= last && k < b.size(); ++k) {
        running = std::min(running, b.values[k]);
        next.b.values[k] = b.values[k] - running;
    }
    next.V = level_set(next.b, 0.0);
    next.n = state.n + 1;
    return next;
}

ObliterationState obliterate_uniform(const ObliterationState& state, Rng& rng) {
    const double lo = state.b.time(0), hi = state.b.time(state.b.size() - 1);
    for (;;) {
        const double u = rng.uniform(lo, hi);
        if (component_containing(state.V, u)) return obliterate(state, u);
    }
}

ObliterationState poisson_obliteration(const GridPath& e, double horizon, Seed seed) {
    if (!(horizon >= 0.0)) throw std::invalid_argument("poisson_obliteration: horizon >= 0");
    Rng rng(seed);
    ObliterationState s = ObliterationState::from_excursion(e);
    for (double t = rng.exponential(); t <= horizon; t += rng.exponential())
        s = obliterate_uniform(s, rng);
    return s;
}

double eval_binary_dislocation_density(double x) {
    if (!(x >= 0.5 && x < 1.0)) return 0.0;
    return 2.0 / std::sqrt(2.0 * M_PI * x * x * x * (1.0 - x) * (1.0 - x) * (1.0 - x));
}

} // namespace fragstoch

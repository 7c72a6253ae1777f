#include "fragstoch/opensets.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace fragstoch {

namespace {
constexpr double kMinComponent = 1e-15;

OpenSet level_set_impl(const double* times, const double* values, std::size_t n,
                       double level) {
    OpenSet out;
    out.domain_l = times[0];
    out.domain_r = times[n - 1];
    bool open = false;
    double start = 0.0;
    auto cross = [&](std::size_t k, double target) {
        // crossing position of the linear segment [k, k+1] at `target`
        return times[k] + (times[k + 1] - times[k]) * (target - values[k]) /
                              (values[k + 1] - values[k]);
    };
    if (values[0] > level) {
        open = true;
        start = times[0];
    }
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const bool above_next = values[k + 1] > level;
        if (!open && above_next) {
            start = values[k] < level ? cross(k, level) : times[k];
            open = true;
        } else if (open && !above_next) {
            const double end = values[k] > level && values[k + 1] < level
                                   ? cross(k, level)
                                   : times[k + 1];
            if (end - start > kMinComponent) out.components.push_back({start, end});
            open = false;
        }
    }
    if (open) {
        const double end = times[n - 1];
        if (end - start > kMinComponent) out.components.push_back({start, end});
    }
    return out;
}
} // namespace

bool RankedMasses::valid(double eps) const noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < masses.size(); ++i) {
        if (!(masses[i] > 0.0)) return false;
        if (i > 0 && masses[i] > masses[i - 1]) return false;
        s += masses[i];
    }
    return s <= 1.0 + eps;
}

bool OpenSet::valid() const noexcept {
    double prev = on_line ? -HUGE_VAL : domain_l;
    for (const auto& c : components) {
        if (!(c.r > c.l)) return false;
        if (c.l < prev) return false;
        prev = c.r;
    }
    if (!on_line && !components.empty() && components.back().r > domain_r) return false;
    return true;
}

std::string OpenSet::to_json() const {
    nlohmann::json j;
    if (on_line)
        j["domain"] = "line";
    else
        j["domain"] = {domain_l, domain_r};
    auto comps = nlohmann::json::array();
    for (const auto& c : components) comps.push_back({c.l, c.r});
    j["components"] = std::move(comps);
    return j.dump();
}

OpenSet OpenSet::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    OpenSet v;
    if (j.at("domain").is_string()) {
        v.on_line = true;
    } else {
        v.domain_l = j.at("domain").at(0).get<double>();
        v.domain_r = j.at("domain").at(1).get<double>();
    }
    for (const auto& c : j.at("components"))
        v.components.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
    if (!v.valid()) throw std::invalid_argument("OpenSet::from_json: invalid set");
    return v;
}

OpenSet level_set(const GridPath& path, double level) {
    std::vector<double> times(path.size());
    for (std::size_t k = 0; k < path.size(); ++k) times[k] = path.time(k);
    return level_set_impl(times.data(), path.values.data(), path.size(), level);
}

OpenSet level_set(const PiecewisePath& path, double level) {
    return level_set_impl(path.times.data(), path.values.data(), path.size(), level);
}

namespace {

// distance from x to the complement of v (relative to its bounded domain)
double dist_to_complement(const OpenSet& v, double x) {
    for (const auto& c : v.components)
        if (x > c.l && x < c.r) return std::min(x - c.l, c.r - x);
    return 0.0;
}

} // namespace

double hausdorff_distance(const OpenSet& a, const OpenSet& b) {
    if (a.on_line || b.on_line)
        throw std::invalid_argument("hausdorff_distance: bounded domains only");
    if (a.domain_l != b.domain_l || a.domain_r != b.domain_r)
        throw std::invalid_argument("hausdorff_distance: domain mismatch");
    // |chi_a - chi_b| is piecewise linear between the merged breakpoints,
    // so the sup is attained at a breakpoint
    std::vector<double> pts{a.domain_l, a.domain_r};
    for (const auto* v : {&a, &b}) {
        for (const auto& c : v->components) {
            pts.push_back(c.l);
            pts.push_back(c.r);
            pts.push_back(0.5 * (c.l + c.r));
        }
    }
    double best = 0.0;
    for (double x : pts)
        best = std::max(best, std::fabs(dist_to_complement(a, x) - dist_to_complement(b, x)));
    return best;
}

double line_distance(const OpenSet& a, const OpenSet& b, int n_max) {
    if (n_max < 1) throw std::invalid_argument("line_distance: n_max >= 1");
    double sum = 0.0;
    for (int n = -n_max; n < n_max; ++n) {
        const Interval window{static_cast<double>(n), static_cast<double>(n + 1)};
        OpenSet wa = restrict(a, window);
        OpenSet wb = restrict(b, window);
        wa.on_line = wb.on_line = false;
        wa.domain_l = wb.domain_l = window.l;
        wa.domain_r = wb.domain_r = window.r;
        const double weight = std::pow(2.0, -std::abs(n)) / 4.0;
        sum += weight * hausdorff_distance(wa, wb);
    }
    return sum;
}

std::optional<Interval> component_containing(const OpenSet& v, double u) {
    if (!v.on_line && (u < v.domain_l || u > v.domain_r))
        throw std::invalid_argument("component_containing: u outside domain");
    auto it = std::upper_bound(v.components.begin(), v.components.end(), u,
                               [](double x, const Interval& c) { return x < c.r; });
    if (it != v.components.end() && u > it->l && u < it->r) return *it;
    return std::nullopt;
}

RankedMasses ranked_lengths(const OpenSet& v) {
    if (v.on_line) throw std::invalid_argument("ranked_lengths: bounded domains only");
    RankedMasses out;
    out.masses.reserve(v.components.size());
    for (const auto& c : v.components) out.masses.push_back(c.length());
    std::sort(out.masses.begin(), out.masses.end(), std::greater<>());
    return out;
}

OpenSet restrict(const OpenSet& v, const Interval& window) {
    OpenSet out;
    out.on_line = false;
    out.domain_l = window.l;
    out.domain_r = window.r;
    for (const auto& c : v.components) {
        if (c.r <= window.l) continue;
        if (c.l >= window.r) break;
        const double l = std::max(c.l, window.l);
        const double r = std::min(c.r, window.r);
        if (r - l > kMinComponent) out.components.push_back({l, r});
    }
    return out;
}

} // namespace fragstoch

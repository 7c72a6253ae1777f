#include "fragstoch/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "fragstoch/paths.hpp"
#include "fragstoch/special.hpp"

namespace fragstoch {

PiecewisePath refined_excursion(Seed seed, const RefineOptions& opt) {
    if (opt.coarse_steps < 3 || opt.refine_factor < 2 || opt.half_window_cells < 1)
        throw std::invalid_argument("refined_excursion: degenerate options");
    const GridPath coarse = sample_normalized_excursion(opt.coarse_steps, seed.sub(0));
    const std::size_t cells = opt.coarse_steps - 1;
    const std::size_t S = coarse.argmax();
    const std::size_t lo = S > opt.half_window_cells ? S - opt.half_window_cells : 0;
    const std::size_t hi = std::min(cells, S + opt.half_window_cells);

    Rng rng(seed.sub(1));
    const double dt = coarse.dt;
    const double dtf = dt / static_cast<double>(opt.refine_factor);
    // any coarse cell this close to the discrete max can hide the true
    // max between its knots; refine those competitor cells too
    const double near_max = coarse.values[S] - 3.2 * std::sqrt(dt);
    std::vector<double> times, values;
    times.reserve(opt.coarse_steps + (hi - lo + 8) * opt.refine_factor);
    values.reserve(times.capacity());
    for (std::size_t k = 0; k < cells; ++k) {
        times.push_back(coarse.time(k));
        values.push_back(coarse.values[k]);
        if ((k < lo || k >= hi) &&
            std::max(coarse.values[k], coarse.values[k + 1]) < near_max)
            continue;
        // exact conditional infill: a Brownian bridge between the knots
        double x = coarse.values[k];
        const double b = coarse.values[k + 1];
        for (std::size_t j = 1; j < opt.refine_factor; ++j) {
            const double remain = dt - static_cast<double>(j - 1) * dtf;
            const double mean = x + (b - x) * dtf / remain;
            const double var = dtf * (remain - dtf) / remain;
            x = mean + rng.normal() * std::sqrt(var);
            times.push_back(coarse.time(k) + static_cast<double>(j) * dtf);
            values.push_back(x);
        }
    }
    times.push_back(coarse.time(cells));
    values.push_back(coarse.values[cells]);

    // zoom passes: conditionally refine the cells around the running
    // argmax to pin down the maximum itself
    for (std::size_t stage = 0; stage < opt.zoom_stages; ++stage) {
        std::size_t arg = 0;
        for (std::size_t k = 1; k < values.size(); ++k)
            if (values[k] > values[arg]) arg = k;
        const std::size_t a = arg > opt.zoom_half_cells ? arg - opt.zoom_half_cells : 0;
        const std::size_t b = std::min(values.size() - 1, arg + opt.zoom_half_cells);
        std::vector<double> nt, nv;
        nt.reserve(times.size() + (b - a) * opt.zoom_factor);
        nv.reserve(nt.capacity());
        for (std::size_t k = 0; k < times.size(); ++k) {
            nt.push_back(times[k]);
            nv.push_back(values[k]);
            if (k < a || k >= b) continue;
            const double span = times[k + 1] - times[k];
            const double sub = span / static_cast<double>(opt.zoom_factor);
            double x = values[k];
            for (std::size_t j = 1; j < opt.zoom_factor; ++j) {
                const double remain = span - static_cast<double>(j - 1) * sub;
                const double mean = x + (values[k + 1] - x) * sub / remain;
                const double var = sub * (remain - sub) / remain;
                x = mean + rng.normal() * std::sqrt(var);
                nt.push_back(times[k] + static_cast<double>(j) * sub);
                nv.push_back(x);
            }
        }
        times.swap(nt);
        values.swap(nv);
    }
    return PiecewisePath(std::move(times), std::move(values));
}

PathMax sample_path_max(const PiecewisePath& e, Rng& rng, double miss_prob) {
    if (e.size() < 2 || !(miss_prob > 0.0 && miss_prob < 1.0))
        throw std::invalid_argument("sample_path_max: bad arguments");
    const double log_miss = std::log(miss_prob);
    PathMax best;
    best.knot = 0;
    for (std::size_t k = 1; k < e.size(); ++k)
        if (e.values[k] > e.values[best.knot]) best.knot = k;
    best.M = e.values[best.knot];
    best.S = e.times[best.knot];
    for (std::size_t k = 0; k + 1 < e.size(); ++k) {
        const double a = e.values[k], b = e.values[k + 1];
        const double h = e.times[k + 1] - e.times[k];
        if (!(h > 0.0)) continue;
        // P(cell max > current best); knots never exceed the running best
        if (-2.0 * (best.M - a) * (best.M - b) / h < log_miss) continue;
        const double d = a - b;
        const double lu = std::log(std::max(rng.uniform(), 1e-300));
        const double m = 0.5 * (a + b + std::sqrt(d * d - 2.0 * h * lu));
        if (m > best.M) {
            best.M = m;
            best.S = 0.5 * (e.times[k] + e.times[k + 1]);
            best.knot = a > b ? k : k + 1;
        }
    }
    return best;
}

namespace {

// One cell of the first-passage walk, `a` endpoint nearer the anchor
// (va > level on entry). Sets `found`; returns the passage time if found.
double fp_walk(double ta, double va, double tb, double vb, double level, Rng& rng,
               double dt_min, double log_miss, bool& found) {
    const double span = std::fabs(tb - ta);
    if (vb > level) {
        // exact probability that the bridge between the knots dips below
        const double expo = -2.0 * (va - level) * (vb - level) / span;
        if (expo < log_miss) {
            found = false;
            return 0.0;
        }
        if (span <= dt_min) {
            found = std::log(std::max(rng.uniform(), 1e-300)) < expo;
            return found ? 0.5 * (ta + tb) : 0.0;
        }
    } else if (span <= dt_min) {
        found = true;
        return ta + (tb - ta) * (va - level) / (va - vb);
    }
    const double tm = 0.5 * (ta + tb);
    const double vm = 0.5 * (va + vb) + rng.normal() * std::sqrt(0.25 * span);
    if (vm > level) {
        const double near = fp_walk(ta, va, tm, vm, level, rng, dt_min, log_miss, found);
        if (found) return near;
    }
    // vm <= level: the near half surely crosses; recurse into it instead
    return vm > level ? fp_walk(tm, vm, tb, vb, level, rng, dt_min, log_miss, found)
                      : fp_walk(ta, va, tm, vm, level, rng, dt_min, log_miss, found);
}

} // namespace

double first_passage_below(const PiecewisePath& e, std::size_t anchor, double level,
                           int dir, Rng& rng, double dt_min, double miss_prob) {
    if (anchor >= e.size() || dir == 0 || !(dt_min > 0.0) ||
        !(miss_prob > 0.0 && miss_prob < 1.0))
        throw std::invalid_argument("first_passage_below: bad arguments");
    if (!(e.values[anchor] > level))
        throw std::invalid_argument("first_passage_below: anchor not above the level");
    const double log_miss = std::log(miss_prob);
    bool found = false;
    if (dir > 0) {
        for (std::size_t k = anchor; k + 1 < e.size(); ++k) {
            const double tau = fp_walk(e.times[k], e.values[k], e.times[k + 1],
                                       e.values[k + 1], level, rng, dt_min, log_miss, found);
            if (found) return tau;
        }
        return e.times.back();
    }
    for (std::size_t k = anchor; k-- > 0;) {
        const double tau = fp_walk(e.times[k + 1], e.values[k + 1], e.times[k], e.values[k],
                                   level, rng, dt_min, log_miss, found);
        if (found) return tau;
    }
    return e.times.front();
}

ExtinctionFrame extinction_frame(const PiecewisePath& e, double t,
                                 std::span<const double> r_grid, int window_n) {
    if (!(t > 0.0) || window_n < 1)
        throw std::invalid_argument("extinction_frame: t > 0, window_n >= 1");
    ExtinctionFrame frame;
    std::size_t arg = 0;
    for (std::size_t k = 1; k < e.size(); ++k)
        if (e.values[k] > e.values[arg]) arg = k;
    frame.M = e.values[arg];
    frame.S = e.times[arg];
    const double margin = static_cast<double>(window_n) * t * t;
    if (!(margin < frame.S && frame.S < 1.0 - margin)) {
        frame.rejected = true;
        return frame;
    }
    const double scale = 1.0 / (t * t);
    const Interval window{-static_cast<double>(window_n), static_cast<double>(window_n)};
    for (double r : r_grid) {
        OpenSet raw = level_set(e, frame.M - r * t);
        OpenSet shifted = OpenSet::empty_line();
        for (const auto& c : raw.components)
            shifted.components.push_back({(c.l - frame.S) * scale, (c.r - frame.S) * scale});
        frame.snapshots.emplace_back(r, restrict(shifted, window));
    }
    return frame;
}

LimitFrame limit_frame(const GridPath& z_left, const GridPath& z_right,
                       std::span<const double> r_grid, int window_n) {
    if (window_n < 1) throw std::invalid_argument("limit_frame: window_n >= 1");
    // level sets {Z < r} come from the negated paths
    GridPath neg_l = z_left, neg_r = z_right;
    for (auto& v : neg_l.values) v = -v;
    for (auto& v : neg_r.values) v = -v;
    const Interval window{-static_cast<double>(window_n), static_cast<double>(window_n)};
    LimitFrame frame;
    for (double r : r_grid) {
        const OpenSet right = level_set(neg_r, -r);
        const OpenSet left = level_set(neg_l, -r);
        OpenSet merged = OpenSet::empty_line();
        // left side mirrored to negative time, order reversed
        for (auto it = left.components.rbegin(); it != left.components.rend(); ++it)
            merged.components.push_back({-it->r, -it->l});
        std::size_t start = 0;
        if (!merged.components.empty() && !right.components.empty() &&
            merged.components.back().r == 0.0 && right.components.front().l == 0.0) {
            merged.components.back().r = right.components.front().r; // Z_0 = 0 < r: glue
            start = 1;
        }
        for (std::size_t k = start; k < right.components.size(); ++k)
            merged.components.push_back(right.components[k]);
        frame.snapshots.emplace_back(r, restrict(merged, window));
    }
    return frame;
}

std::vector<HmlStat> statistics_HML(const std::vector<std::pair<double, OpenSet>>& snapshots) {
    std::vector<HmlStat> out;
    out.reserve(snapshots.size());
    for (const auto& [r, set] : snapshots) {
        HmlStat s;
        s.r = r;
        const auto comp = component_containing(set, 0.0);
        s.H = comp ? comp->length() : 0.0;
        s.M_leb = set.total_length();
        s.L_span = set.span();
        out.push_back(s);
    }
    return out;
}

std::string hml_csv(const std::vector<std::vector<HmlStat>>& frames) {
    std::ostringstream os;
    os << "frame,r,H,M_leb,L_span\n";
    os.precision(12);
    for (std::size_t f = 0; f < frames.size(); ++f)
        for (const auto& s : frames[f])
            os << f << ',' << s.r << ',' << s.H << ',' << s.M_leb << ',' << s.L_span << '\n';
    return os.str();
}

JeulinReport jeulin_fixed_time_check(std::size_t v, std::span<const double> s_grid,
                                     std::size_t n_paths, Seed seed,
                                     std::size_t steps_per_unit) {
    if (v < 1 || s_grid.empty() || steps_per_unit < 2)
        throw std::invalid_argument("jeulin_fixed_time_check: bad arguments");
    const std::size_t n_steps = v * steps_per_unit + 1;
    const double root_v = std::sqrt(static_cast<double>(v));
    std::vector<std::size_t> idx(s_grid.size());
    double s_max = s_grid[0];
    for (std::size_t j = 0; j < s_grid.size(); ++j) {
        if (!(s_grid[j] > 0.0 && s_grid[j] < static_cast<double>(v)))
            throw std::invalid_argument("jeulin_fixed_time_check: need 0 < s < v");
        idx[j] = static_cast<std::size_t>(
            std::llround(s_grid[j] * static_cast<double>(steps_per_unit)));
        s_max = std::max(s_max, s_grid[j]);
    }
    const auto idx_max =
        static_cast<std::size_t>(std::llround(s_max * static_cast<double>(steps_per_unit)));

    std::vector<std::vector<double>> marg(s_grid.size(), std::vector<double>(n_paths));
    std::vector<double> front(n_paths), back(n_paths);
    for (std::size_t i = 0; i < n_paths; ++i) {
        const GridPath e = sample_normalized_excursion(n_steps, seed.sub(i));
        for (std::size_t j = 0; j < s_grid.size(); ++j)
            marg[j][i] = root_v * e.values[idx[j]];
        front[i] = root_v * e.values[idx_max];
        back[i] = root_v * e.values[n_steps - 1 - idx_max];
    }

    JeulinReport report;
    report.v = v;
    report.n_paths = n_paths;
    for (std::size_t j = 0; j < s_grid.size(); ++j) {
        const double scale = std::sqrt(s_grid[j]);
        const double exact =
            std::sqrt(s_grid[j] * (1.0 - s_grid[j] / static_cast<double>(v)));
        report.marginal_ks.emplace_back(
            s_grid[j],
            ks_one_sample(marg[j], [scale](double x) { return chi3_cdf(x / scale); }));
        report.marginal_ks_exact.emplace_back(
            s_grid[j],
            ks_one_sample(marg[j], [exact](double x) { return chi3_cdf(x / exact); }));
        double sup = 0.0;
        for (int k = 1; k < 400; ++k) {
            const double x = 0.02 * static_cast<double>(k) * scale;
            sup = std::max(sup, std::fabs(chi3_cdf(x / scale) - chi3_cdf(x / exact)));
        }
        report.limit_sup_dist.emplace_back(s_grid[j], sup);
    }
    const auto [mf, sf] = mean_with_se(front);
    const auto [mb, sb] = mean_with_se(back);
    double cov = 0.0, vf = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < n_paths; ++i) {
        cov += (front[i] - mf) * (back[i] - mb);
        vf += (front[i] - mf) * (front[i] - mf);
        vb += (back[i] - mb) * (back[i] - mb);
    }
    report.front_back_correlation = cov / std::sqrt(vf * vb);
    return report;
}

namespace {

double lil_g(double t) { return std::log(std::log(1.0 / t)) / (2.0 * t * t); }

std::vector<double> quantiles_at(const std::vector<std::vector<double>>& rows,
                                 std::size_t col, std::initializer_list<double> qs) {
    std::vector<double> vals;
    vals.reserve(rows.size());
    for (const auto& row : rows) vals.push_back(row[col]);
    std::sort(vals.begin(), vals.end());
    std::vector<double> out;
    for (double q : qs) {
        const double pos = q * static_cast<double>(vals.size() - 1);
        const auto k = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(k);
        out.push_back(k + 1 < vals.size() ? vals[k] + frac * (vals[k + 1] - vals[k])
                                          : vals.back());
    }
    return out;
}

} // namespace

LilCurves lil_diagnostic(std::size_t n_paths, std::span<const double> levels, Seed seed,
                         const RefineOptions& opt) {
    if (n_paths < 1 || levels.empty())
        throw std::invalid_argument("lil_diagnostic: need paths and levels");
    for (std::size_t k = 0; k < levels.size(); ++k) {
        if (!(levels[k] > 0.0 && levels[k] < 1.0 / M_E))
            throw std::invalid_argument("lil_diagnostic: levels must be in (0, 1/e)");
        if (k > 0 && !(levels[k] < levels[k - 1]))
            throw std::invalid_argument("lil_diagnostic: levels must be descending");
    }
    LilCurves curves;
    curves.levels.assign(levels.begin(), levels.end());
    curves.run_min_H.resize(n_paths);
    curves.run_min_M.resize(n_paths);
    curves.run_min_L.resize(n_paths);
    for (std::size_t i = 0; i < n_paths; ++i) {
        const PiecewisePath e = refined_excursion(seed.sub(i), opt);
        std::size_t arg = 0;
        for (std::size_t k = 1; k < e.size(); ++k)
            if (e.values[k] > e.values[arg]) arg = k;
        const double M = e.values[arg], S = e.times[arg];
        double mn_h = HUGE_VAL, mn_m = HUGE_VAL, mn_l = HUGE_VAL;
        for (double t : levels) {
            const OpenSet set = level_set(e, M - t);
            const auto comp = component_containing(set, S);
            const double g = lil_g(t);
            mn_h = std::min(mn_h, g * (comp ? comp->length() : 0.0));
            mn_m = std::min(mn_m, g * set.total_length());
            mn_l = std::min(mn_l, g * set.span());
            curves.run_min_H[i].push_back(mn_h);
            curves.run_min_M[i].push_back(mn_m);
            curves.run_min_L[i].push_back(mn_l);
        }
    }
    return curves;
}

double lil_median_at_finest(const std::vector<std::vector<double>>& run_min) {
    if (run_min.empty() || run_min.front().empty())
        throw std::invalid_argument("lil_median_at_finest: empty curves");
    return quantiles_at(run_min, run_min.front().size() - 1, {0.5})[0];
}

std::string lil_summary_json(const LilCurves& curves) {
    nlohmann::json j;
    j["levels"] = curves.levels;
    auto summarize = [&](const std::vector<std::vector<double>>& rows) {
        nlohmann::json arr = nlohmann::json::array();
        for (std::size_t col = 0; col < curves.levels.size(); ++col) {
            const auto q = quantiles_at(rows, col, {0.25, 0.5, 0.75});
            arr.push_back({{"q25", q[0]}, {"median", q[1]}, {"q75", q[2]}});
        }
        return arr;
    };
    j["H"] = summarize(curves.run_min_H);
    j["M"] = summarize(curves.run_min_M);
    j["L"] = summarize(curves.run_min_L);
    return j.dump(2);
}

std::string lil_csv(const LilCurves& curves) {
    std::ostringstream os;
    os << "level,H_q25,H_median,H_q75,M_q25,M_median,M_q75,L_q25,L_median,L_q75\n";
    os.precision(12);
    for (std::size_t col = 0; col < curves.levels.size(); ++col) {
        os << curves.levels[col];
        for (const auto* rows : {&curves.run_min_H, &curves.run_min_M, &curves.run_min_L}) {
            const auto q = quantiles_at(*rows, col, {0.25, 0.5, 0.75});
            os << ',' << q[0] << ',' << q[1] << ',' << q[2];
        }
        os << '\n';
    }
    return os.str();
}

std::string lil_plot_script(const std::string& csv_name) {
    std::ostringstream os;
    os << "set datafile separator ','\n"
       << "set logscale x 2\n"
       << "set xlabel 'level t'\n"
       << "set ylabel 'running min of g(t) * statistic'\n"
       << "plot '" << csv_name << "' using 1:3 with linespoints title 'H median', \\\n"
       << "     '' using 1:6 with linespoints title 'M median', \\\n"
       << "     '' using 1:9 with linespoints title 'L median', \\\n"
       << "     1 with lines dashtype 2 title 'liminf = 1'\n";
    return os.str();
}

} // namespace fragstoch

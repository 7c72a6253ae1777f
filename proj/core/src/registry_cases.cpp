#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "fragstoch/asymptotics.hpp"
#include "fragstoch/fragmentation.hpp"
#include "fragstoch/paths.hpp"
#include "fragstoch/registry.hpp"
#include "fragstoch/special.hpp"
#include "fragstoch/stable_pd.hpp"
#include "fragstoch/stats.hpp"

namespace fragstoch {

namespace {

double first_size_biased(const RankedMasses& m, Rng& rng) {
    // first pick only: exponential-clock race, min of E_i / m_i
    double best = HUGE_VAL, pick = 0.0;
    for (double mass : m.masses) {
        const double key = rng.exponential() / mass;
        if (key < best) {
            best = key;
            pick = mass;
        }
    }
    return pick;
}

void record_ks(CaseResult& r, const std::string& name, const KsResult& ks) {
    r.stats.emplace_back(name + ".D", ks.statistic);
    r.stats.emplace_back(name + ".p", ks.p_value);
}

// ---- Theorem 1: tagged-fragment jumps are PD(1/2, 1/2) --------------------

CaseResult thm1_case(const CaseContext& ctx) {
    const std::size_t n = ctx.cfg_size("thm1.n", 10000);
    const std::size_t grid = ctx.cfg_size("thm1.grid", (1u << 16) + 1);
    const double alpha = ctx.cfg("thm1.alpha", 1e-3) / 2.0; // two tests in the suite

    auto picks = parallel_map(n, ctx.seed.sub(1), ctx.workers, [&](Seed s, std::size_t) {
        const GridPath e = sample_normalized_excursion(grid, s.sub(0));
        Rng rng(s.sub(1));
        const double u = rng.uniform();
        const auto tf = tagged_fragment(e, u, 0);
        return first_size_biased(ranked_jumps(tf), rng);
    });
    const std::size_t sticks = ctx.cfg_size("thm1.pd_sticks", 1024);
    auto pd_picks = parallel_map(n, ctx.seed.sub(2), ctx.workers, [&](Seed s, std::size_t) {
        const RankedMasses m = sample_pd({0.5, 0.5}, sticks, s.sub(0));
        Rng rng(s.sub(1));
        return first_size_biased(m, rng);
    });

    CaseResult r;
    const auto ks1 = ks_one_sample(picks, [](double x) {
        return x <= 0.0 ? 0.0 : (x >= 1.0 ? 1.0 : std::sqrt(x));
    });
    const auto ks2 = ks_two_sample(picks, pd_picks);
    record_ks(r, "first_pick_vs_beta_half_one", ks1);
    record_ks(r, "first_pick_vs_pd_sampler", ks2);
    r.passed = ks1.p_value > alpha && ks2.p_value > alpha;
    return r;
}

// ---- Proposition 2: bridge-method vs Lamperti-method ----------------------

CaseResult prop2_case(const CaseContext& ctx) {
    const std::size_t n = ctx.cfg_size("prop2.n", 10000);
    const double t0 = ctx.cfg("prop2.marginal_time", 0.2);
    const double alpha = ctx.cfg("prop2.alpha", 1e-3) / 3.0;
    const StableParams p = StableParams::brownian();
    const int depth = static_cast<int>(ctx.cfg_size("prop2.depth", 14));

    std::vector<double> b_death(n), b_marg(n);
    parallel_map(n, ctx.seed.sub(1), ctx.workers, [&](Seed s, std::size_t i) {
        const auto path = sample_conditioned_bridge_method(1.0, p, s, depth);
        b_death[i] = path.death_time;
        b_marg[i] = path.value_at(t0);
        return 0.0;
    });
    std::vector<double> l_death(n), l_marg(n);
    parallel_map(n, ctx.seed.sub(2), ctx.workers, [&](Seed s, std::size_t i) {
        const auto path = sample_conditioned_lamperti_method(p, s);
        l_death[i] = path.death_time;
        l_marg[i] = path.value_at(t0);
        return 0.0;
    });

    CaseResult r;
    // death density 4a exp(-2a^2) integrates to the CDF 1 - exp(-2a^2)
    const auto ks_death = ks_one_sample(
        b_death, [](double a) { return a <= 0.0 ? 0.0 : -std::expm1(-2.0 * a * a); });
    const auto ks_two_death = ks_two_sample(b_death, l_death);
    const auto ks_two_marg = ks_two_sample(b_marg, l_marg);
    record_ks(r, "bridge_death_vs_closed_form", ks_death);
    record_ks(r, "death_bridge_vs_lamperti", ks_two_death);
    record_ks(r, "marginal_bridge_vs_lamperti", ks_two_marg);
    r.passed = ks_death.p_value > alpha && ks_two_death.p_value > alpha &&
               ks_two_marg.p_value > alpha;
    return r;
}

// ---- Lemma 7: death-time moments through the clock exponent ---------------

CaseResult lemma7_case(const CaseContext& ctx) {
    const StableParams p = StableParams::brownian();
    const double phi2 = death_clock_exponent(2.0, p);
    const double phi4 = death_clock_exponent(4.0, p);
    const double target2 = std::sqrt(8.0 / M_PI);
    const std::size_t n = ctx.cfg_size("lemma7.n", 100000);

    // exact death-time draws at beta=1/2: a = sqrt(E/2)
    Rng rng(ctx.seed.sub(1));
    double sum2 = 0.0, sum4 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a2 = 0.5 * rng.exponential(); // zeta^2
        sum2 += a2;
        sum4 += a2 * a2;
    }
    const double m2 = sum2 / static_cast<double>(n);
    const double se2 = std::sqrt((sum4 / static_cast<double>(n) - m2 * m2) /
                                 static_cast<double>(n));
    const double predicted = 2.0 / (phi2 * phi4);
    const double m1 = moments_of_death_time(1, p);

    CaseResult r;
    r.stats = {{"phi2", phi2},
               {"phi2_target", target2},
               {"phi4", phi4},
               {"zeta2_mc", m2},
               {"zeta2_mc_se", se2},
               {"zeta2_predicted", predicted},
               {"mean_from_moments", m1}};
    r.passed = std::fabs(phi2 - target2) < 1e-4 &&
               std::fabs(m2 - predicted) < 3.0 * se2 &&
               std::fabs(m1 - std::sqrt(M_PI / 8.0)) < 1e-5;
    return r;
}

// ---- Structural bijection: jumps of chi <-> excursions of b ---------------

CaseResult bijection_case(const CaseContext& ctx) {
    const std::size_t paths = ctx.cfg_size("bijection.paths", 100);
    const std::size_t grid = ctx.cfg_size("bijection.grid", 4097);
    std::size_t checked = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < paths; ++i) {
        const Seed s = ctx.seed.sub(1).sub(i);
        const GridPath e = sample_normalized_excursion(grid, s.sub(0));
        Rng rng(s.sub(1));
        const double u = rng.uniform();
        const auto tf = tagged_fragment(e, u, 0, 0.0); // keep every jump
        const auto bp = bertoin_pitman(e, u);
        const OpenSet exc = level_set(bp.b, 0.0);
        if (exc.components.size() != tf.jumps.size()) {
            CaseResult r;
            r.stats = {{"path", static_cast<double>(i)},
                       {"excursions", static_cast<double>(exc.components.size())},
                       {"jumps", static_cast<double>(tf.jumps.size())}};
            r.note = "excursion/jump count mismatch";
            return r;
        }
        std::vector<double> a, b;
        for (const auto& c : exc.components) a.push_back(c.length());
        for (const auto& j : tf.jumps) b.push_back(j.size);
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        for (std::size_t k = 0; k < a.size(); ++k)
            worst = std::max(worst, std::fabs(a[k] - b[k]));
        checked += a.size();
    }
    CaseResult r;
    r.stats = {{"paths", static_cast<double>(paths)},
               {"intervals_checked", static_cast<double>(checked)},
               {"worst_abs_diff", worst}};
    r.passed = worst <= 1e-12;
    return r;
}

// ---- Proposition 6: invariance under the root change ----------------------

CaseResult prop6_case(const CaseContext& ctx) {
    const std::size_t n = ctx.cfg_size("prop6.n", 100000);
    const std::size_t grid = ctx.cfg_size("prop6.grid", 1025);
    const std::vector<double> s_points{0.25, 0.5, 0.75};
    const double alpha = ctx.cfg("prop6.alpha", 1e-3) / static_cast<double>(s_points.size());

    std::vector<std::vector<double>> plain(s_points.size(), std::vector<double>(n));
    parallel_map(n, ctx.seed.sub(1), ctx.workers, [&](Seed s, std::size_t i) {
        const GridPath e = sample_normalized_excursion(grid, s);
        for (std::size_t j = 0; j < s_points.size(); ++j)
            plain[j][i] = e.value_at(s_points[j]);
        return 0.0;
    });
    std::vector<std::vector<double>> rooted(s_points.size(), std::vector<double>(n));
    parallel_map(n, ctx.seed.sub(2), ctx.workers, [&](Seed s, std::size_t i) {
        const GridPath h = haas_transform(sample_normalized_excursion(grid, s));
        for (std::size_t j = 0; j < s_points.size(); ++j)
            rooted[j][i] = h.value_at(s_points[j]);
        return 0.0;
    });

    CaseResult r;
    r.passed = true;
    for (std::size_t j = 0; j < s_points.size(); ++j) {
        const auto ks = ks_two_sample(plain[j], rooted[j]);
        record_ks(r, "marginal_s" + std::to_string(j), ks);
        r.passed = r.passed && ks.p_value > alpha;
    }
    return r;
}

// ---- Proposition 3: range gaps vs reflected-bridge excursions -------------

CaseResult prop3_case(const CaseContext& ctx) {
    const std::size_t n = ctx.cfg_size("prop3.n", 10000);
    const std::size_t grid = ctx.cfg_size("prop3.grid", (1u << 14) + 1);
    const double alpha = ctx.cfg("prop3.alpha", 1e-3);
    const StableParams p = StableParams::brownian();

    auto gaps = parallel_map(n, ctx.seed.sub(1), ctx.workers, [&](Seed s, std::size_t) {
        // gaps of the closure of the path's range are exactly its jumps
        return sample_conditioned_bridge_method(1.0, p, s).ranked_jumps().masses.front();
    });
    auto zero_gaps = parallel_map(n, ctx.seed.sub(2), ctx.workers, [&](Seed s, std::size_t) {
        const GridPath b = sample_brownian_bridge(grid, 1.0, s);
        // excursion intervals of |b| away from 0 = {b > 0} plus {b < 0};
        // reflecting first would hide the interpolated zero crossings
        GridPath nb = b;
        for (auto& v : nb.values) v = -v;
        OpenSet away = level_set(b, 0.0);
        const OpenSet below = level_set(nb, 0.0);
        away.components.insert(away.components.end(), below.components.begin(),
                               below.components.end());
        RankedMasses m = ranked_lengths(away);
        return m.masses.front() / m.sum();
    });

    CaseResult r;
    const auto ks = ks_two_sample(gaps, zero_gaps);
    record_ks(r, "largest_gap", ks);
    r.passed = ks.p_value > alpha;
    return r;
}

// ---- Theorem 4: rescaled extinction frames vs the BES(3) limit ------------

CaseResult thm4_case(const CaseContext& ctx) {
    const std::size_t n = ctx.cfg_size("thm4.n", 10000);
    const double t = ctx.cfg("thm4.t", 1e-2);
    const int window = static_cast<int>(ctx.cfg_size("thm4.window", 4));
    const std::vector<double> r_grid{0.5, 1.0, 2.0};
    const double alpha = ctx.cfg("thm4.alpha", 1e-3) / static_cast<double>(r_grid.size());
    const int terms = static_cast<int>(ctx.cfg_size("thm4.series_terms", 200));

    std::vector<std::vector<double>> finite(r_grid.size(), std::vector<double>(n));
    std::atomic<std::size_t> rejected{0};
    parallel_map(n, ctx.seed.sub(1), ctx.workers, [&](Seed s, std::size_t i) {
        for (std::uint64_t attempt = 0;; ++attempt) {
            const PiecewisePath e = refined_excursion(s.sub(attempt));
            Rng rng(s.sub(attempt).sub(2));
            // exact max draw and adaptive first-passage walks: both the
            // max and the crossings otherwise keep ~0.58 sqrt(dt)
            // knot-monitoring biases, visible fractions of rt here
            const PathMax mx = sample_path_max(e, rng);
            const double margin = static_cast<double>(window) * t * t;
            // also rejects the ~1e-8 event that the max sits in a cell
            // whose knots are already below the smallest level
            if (!(margin < mx.S && mx.S < 1.0 - margin) ||
                !(e.values[mx.knot] > mx.M - r_grid.front() * t)) {
                rejected.fetch_add(1, std::memory_order_relaxed);
                continue;
            }
            for (std::size_t j = 0; j < r_grid.size(); ++j) {
                const double level = mx.M - r_grid[j] * t;
                const double right = first_passage_below(e, mx.knot, level, +1, rng);
                const double left = first_passage_below(e, mx.knot, level, -1, rng);
                finite[j][i] = (std::min(right - mx.S, margin) +
                                std::min(mx.S - left, margin)) / (t * t);
            }
            return 0.0;
        }
    });
    std::vector<std::vector<double>> limit(r_grid.size(), std::vector<double>(n));
    parallel_map(n, ctx.seed.sub(2), ctx.workers, [&](Seed s, std::size_t i) {
        Rng rng(s);
        for (std::size_t j = 0; j < r_grid.size(); ++j) {
            const double r2 = r_grid[j] * r_grid[j];
            // clip each side like the window clips the finite-t component
            limit[j][i] =
                std::min(r2 * sample_bes3_hitting_time(1.0, rng, terms),
                         static_cast<double>(window)) +
                std::min(r2 * sample_bes3_hitting_time(1.0, rng, terms),
                         static_cast<double>(window));
        }
        return 0.0;
    });

    CaseResult r;
    r.passed = true;
    for (std::size_t j = 0; j < r_grid.size(); ++j) {
        const auto ks = ks_two_sample(finite[j], limit[j]);
        record_ks(r, "H_r" + std::to_string(j), ks);
        r.passed = r.passed && ks.p_value > alpha;
    }
    r.stats.emplace_back("rejected_frames", static_cast<double>(rejected.load()));
    return r;
}

// ---- Corollary 5: Laplace transforms of the limit H and M -----------------

CaseResult cor5_case(const CaseContext& ctx) {
    const std::size_t n = ctx.cfg_size("cor5.n", 100000);
    const int terms = static_cast<int>(ctx.cfg_size("cor5.series_terms", 200));
    std::vector<double> H(n), M(n);
    parallel_map(n, ctx.seed.sub(1), ctx.workers, [&](Seed s, std::size_t i) {
        Rng rng(s);
        H[i] = sample_bes3_hitting_time(1.0, rng, terms) +
               sample_bes3_hitting_time(1.0, rng, terms);
        M[i] = sample_bes3_occupation_time(1.0, rng, terms) +
               sample_bes3_occupation_time(1.0, rng, terms);
        return 0.0;
    });

    CaseResult r;
    r.passed = true;
    for (double q : {0.5, 1.0, 2.0}) {
        const double root = std::sqrt(2.0 * q);
        const double h_target = std::pow(root / std::sinh(root), 2.0);
        const double m_target = std::pow(1.0 / std::cosh(root), 2.0);
        const auto [he, hse] = empirical_laplace(H, q);
        const auto [me, mse] = empirical_laplace(M, q);
        r.stats.emplace_back("H.q" + std::to_string(q) + ".z", (he - h_target) / hse);
        r.stats.emplace_back("M.q" + std::to_string(q) + ".z", (me - m_target) / mse);
        r.passed = r.passed && std::fabs(he - h_target) < 3.0 * hse &&
                   std::fabs(me - m_target) < 3.0 * mse;
    }
    return r;
}

// ---- Obliteration masses: PD(1/2, n - 1/2) --------------------------------

CaseResult obliteration_case(const CaseContext& ctx) {
    const std::size_t n = ctx.cfg_size("obliteration.n", 10000);
    // the repeated knot-level min profiles lose ~0.5 sqrt(dt) per cut;
    // 2^15 cells keeps the accumulated first-pick bias well under the
    // critical KS distance at n = 10^4
    const std::size_t grid = ctx.cfg_size("obliteration.grid", (1u << 15) + 1);
    constexpr int max_cuts = 3;
    const double alpha = ctx.cfg("obliteration.alpha", 1e-3) / max_cuts;

    std::vector<std::vector<double>> picks(max_cuts, std::vector<double>(n));
    parallel_map(n, ctx.seed.sub(1), ctx.workers, [&](Seed s, std::size_t i) {
        ObliterationState state =
            ObliterationState::from_excursion(sample_normalized_excursion(grid, s.sub(0)));
        Rng rng(s.sub(1));
        for (int cut = 0; cut < max_cuts; ++cut) {
            state = obliterate_uniform(state, rng);
            RankedMasses m = ranked_lengths(state.V);
            const double total = m.sum();
            for (auto& v : m.masses) v /= total;
            picks[cut][i] = first_size_biased(m, rng);
        }
        return 0.0;
    });

    CaseResult r;
    r.passed = true;
    for (int cut = 0; cut < max_cuts; ++cut) {
        const double shape_b = static_cast<double>(cut + 1);
        const auto ks = ks_one_sample(picks[cut], [shape_b](double x) {
            return incomplete_beta(0.5, shape_b, x);
        });
        record_ks(r, "first_pick_n" + std::to_string(cut + 1), ks);
        r.passed = r.passed && ks.p_value > alpha;
    }
    return r;
}

// ---- Theorem 6: iterated-logarithm diagnostic -----------------------------

CaseResult thm6_case(const CaseContext& ctx) {
    const std::size_t paths = ctx.cfg_size("thm6.paths", 200);
    std::vector<double> levels;
    for (int k = 3; k <= 9; ++k) levels.push_back(std::pow(2.0, -k));
    const auto curves = lil_diagnostic(paths, levels, ctx.seed.sub(1));
    const double med_l = lil_median_at_finest(curves.run_min_L);
    const double med_h = lil_median_at_finest(curves.run_min_H);
    const double med_m = lil_median_at_finest(curves.run_min_M);
    const double lo = ctx.cfg("thm6.band_lo", 0.5), hi = ctx.cfg("thm6.band_hi", 2.0);

    if (!ctx.artifact_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(ctx.artifact_dir);
        std::ofstream(fs::path(ctx.artifact_dir) / "lil_curves.csv") << lil_csv(curves);
        std::ofstream(fs::path(ctx.artifact_dir) / "lil_curves.gp")
            << lil_plot_script("lil_curves.csv");
        std::ofstream(fs::path(ctx.artifact_dir) / "lil_summary.json")
            << lil_summary_json(curves);
    }

    CaseResult r;
    r.stats = {{"median_gL_finest", med_l},
               {"median_gH_finest", med_h},
               {"median_gM_finest", med_m},
               {"band_lo", lo},
               {"band_hi", hi}};
    // only the L statistic gates: H and M cannot reach the log log regime
    // at desk scale
    r.passed = med_l >= lo && med_l <= hi;
    r.note = "H and M medians are reported, not gated";
    return r;
}

// ---- General beta: density self-consistency and PD stick law --------------

CaseResult general_beta_case(const CaseContext& ctx) {
    const std::size_t n = ctx.cfg_size("genbeta.n", 10000);
    const std::size_t sticks = ctx.cfg_size("genbeta.pd_sticks", 1024);
    const double alpha = ctx.cfg("genbeta.alpha", 1e-3) / 2.0;

    CaseResult r;
    r.passed = true;
    for (double beta : {0.3, 0.4}) {
        const StableParams p{beta, 1.0};
        // head on the natural scale plus the tail under u = x^{-beta},
        // which turns the x^{-1-beta} tail into a bounded integrand with
        // limit C/Gamma(1-beta) at u = 0
        const double head = integrate(
            [&](double x) { return x > 0.0 ? stable_density(1.0, x, p) : 0.0; }, 0.0, 1.0,
            1e-11);
        const double mass =
            head + integrate(
                       [&](double u) {
                           if (u <= 0.0) return p.C / std::tgamma(1.0 - beta);
                           const double x = std::pow(u, -1.0 / beta);
                           return stable_density(1.0, x, p) * x / (beta * u);
                       },
                       0.0, 1.0, 1e-11);
        r.stats.emplace_back("norm_err_b" + std::to_string(beta), std::fabs(mass - 1.0));
        r.passed = r.passed && std::fabs(mass - 1.0) < 1e-8;

        // scaling identity f_t(y) = y^{-1} f_{t y^{-beta}}(1)
        Rng rng(ctx.seed.sub(beta == 0.3 ? 2 : 3));
        double worst = 0.0;
        for (int k = 0; k < 20; ++k) {
            const double t = rng.uniform(0.5, 2.0), y = rng.uniform(0.5, 3.0);
            const double lhs = stable_density(t, y, p);
            const double rhs = stable_density(t * std::pow(y, -beta), 1.0, p) / y;
            worst = std::max(worst, std::fabs(lhs - rhs) / rhs);
        }
        r.stats.emplace_back("scaling_err_b" + std::to_string(beta), worst);
        r.passed = r.passed && worst < 1e-10;

        auto picks =
            parallel_map(n, ctx.seed.sub(beta == 0.3 ? 4 : 5), ctx.workers,
                         [&](Seed s, std::size_t) {
                             const RankedMasses m = sample_pd({beta, beta}, sticks, s.sub(0));
                             Rng prng(s.sub(1));
                             return first_size_biased(m, prng);
                         });
        const auto ks = ks_one_sample(picks, [beta](double x) {
            return incomplete_beta(1.0 - beta, 2.0 * beta, x);
        });
        record_ks(r, "pd_first_pick_b" + std::to_string(beta), ks);
        r.passed = r.passed && ks.p_value > alpha;
    }
    return r;
}

// ---- Jeulin fixed-time marginals (with negative control) ------------------

CaseResult jeulin_case(const CaseContext& ctx) {
    // the discrete-Vervaat construction biases fixed-time marginals down
    // by ~0.5/sqrt(steps_per_unit) in X units, so the statistical gate
    // compares against the exact finite-v law at a resolution where that
    // bias is far below the critical KS distance; the limit statement
    // itself is gated analytically through the finite-v-to-limit CDF
    // distance, which must be small here and large for the control
    const std::size_t v = ctx.cfg_size("jeulin.v", 400);
    const std::size_t n = ctx.cfg_size("jeulin.n", 2000);
    const std::size_t spu = ctx.cfg_size("jeulin.steps_per_unit", 1024);
    const std::vector<double> s_grid{2.0, 4.0, 8.0};
    const double alpha = ctx.cfg("jeulin.alpha", 1e-3) / static_cast<double>(s_grid.size());

    const auto report = jeulin_fixed_time_check(v, s_grid, n, ctx.seed.sub(1), spu);
    CaseResult r;
    r.passed = true;
    for (std::size_t j = 0; j < report.marginal_ks_exact.size(); ++j) {
        record_ks(r, "marginal_s" + std::to_string(s_grid[j]),
                  report.marginal_ks_exact[j].second);
        r.stats.emplace_back("limit_sup_dist_s" + std::to_string(s_grid[j]),
                             report.limit_sup_dist[j].second);
        r.passed = r.passed && report.marginal_ks_exact[j].second.p_value > alpha &&
                   report.limit_sup_dist[j].second < 0.02;
    }
    r.stats.emplace_back("front_back_corr", report.front_back_correlation);
    r.passed = r.passed && std::fabs(report.front_back_correlation) <
                               3.0 / std::sqrt(static_cast<double>(n));

    // negative control: no separation between s and v must break the limit
    const std::vector<double> bad_s{3.5};
    const auto control = jeulin_fixed_time_check(4, bad_s, 2000, ctx.seed.sub(2));
    r.stats.emplace_back("negative_control_p", control.marginal_ks[0].second.p_value);
    r.stats.emplace_back("negative_control_sup_dist", control.limit_sup_dist[0].second);
    r.passed = r.passed && control.marginal_ks[0].second.p_value < 1e-3 &&
               control.limit_sup_dist[0].second > 0.1;
    return r;
}

// ---- Harness self-calibration ---------------------------------------------

CaseResult ks_calibration_case(const CaseContext& ctx) {
    const std::size_t reps = 200, n = 500;
    std::size_t low_one = 0, low_two = 0;
    for (std::size_t rep = 0; rep < reps; ++rep) {
        Rng rng(ctx.seed.sub(1).sub(rep));
        std::vector<double> a(n), b(n);
        for (auto& v : a) v = rng.uniform();
        for (auto& v : b) v = rng.uniform();
        if (ks_one_sample(a, [](double x) { return std::clamp(x, 0.0, 1.0); }).p_value < 0.05)
            ++low_one;
        if (ks_two_sample(a, b).p_value < 0.05) ++low_two;
    }
    const double f1 = static_cast<double>(low_one) / static_cast<double>(reps);
    const double f2 = static_cast<double>(low_two) / static_cast<double>(reps);
    CaseResult r;
    r.stats = {{"one_sample_frac_below_05", f1}, {"two_sample_frac_below_05", f2}};
    r.passed = f1 >= 0.02 && f1 <= 0.09 && f2 >= 0.02 && f2 <= 0.09;
    return r;
}

} // namespace

std::vector<VerificationCase> builtin_registry() {
    return {
        {"thm1-pd-jumps", "thm1", "tagged-fragment jumps are PD(1/2,1/2)", true, thm1_case},
        {"prop2-sampler-equivalence", "prop2",
         "bridge and Lamperti constructions agree in law", true, prop2_case},
        {"lemma7-moments", "lemma7", "death-time moments from the clock exponent", true,
         lemma7_case},
        {"bp-bijection", "bijection",
         "jumps of the tagged mass equal the excursion intervals of e - K", true,
         bijection_case},
        {"prop6-root-change", "prop6", "root-change invariance of the excursion", true,
         prop6_case},
        {"prop3-range-gaps", "prop3",
         "range gaps of the conditioned path match reflected-bridge excursions", true,
         prop3_case},
        {"thm4-extinction-frames", "thm4",
         "rescaled near-extinction sets converge to the two-sided BES(3) picture", true,
         thm4_case},
        {"cor5-laplace", "cor5", "Laplace transforms of the limit H and M", true, cor5_case},
        {"obliteration-masses", "obliteration", "iterated cut masses are PD(1/2, n-1/2)",
         true, obliteration_case},
        {"thm6-lil", "thm6", "iterated-logarithm diagnostic band", true, thm6_case},
        {"general-beta", "genbeta", "general-beta density and stick-law checks", true,
         general_beta_case},
        {"jeulin-fixed-time", "jeulin", "long-excursion fixed-time marginals", true,
         jeulin_case},
        {"ks-calibration", "harness", "KS p-value calibration", true, ks_calibration_case},
    };
}

} // namespace fragstoch

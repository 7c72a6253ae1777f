#include <cmath>
#include <vector>

#include <doctest.h>

#include "fragstoch/asymptotics.hpp"
#include "fragstoch/paths.hpp"
#include "fragstoch/special.hpp"

using namespace fragstoch;

TEST_CASE("refined excursion: valid piecewise path covering [0,1]") {
    const PiecewisePath e = refined_excursion(Seed{81, 0});
    CHECK(e.times.front() == doctest::Approx(0.0));
    CHECK(e.times.back() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::fabs(e.values.front()) < 1e-12);
    CHECK(std::fabs(e.values.back()) < 1e-12);
    for (std::size_t k = 1; k < e.times.size(); ++k) CHECK(e.times[k] > e.times[k - 1]);
    // the zoom stages extend the same base path, so they can only raise
    // the observed maximum
    RefineOptions no_zoom;
    no_zoom.zoom_stages = 0;
    const PiecewisePath c = refined_excursion(Seed{81, 0}, no_zoom);
    double m_fine = 0.0, m_coarse = 0.0;
    for (double v : e.values) m_fine = std::max(m_fine, v);
    for (double v : c.values) m_coarse = std::max(m_coarse, v);
    CHECK(m_fine >= m_coarse - 1e-12);
}

TEST_CASE("extinction frame: ordering and window bounds") {
    const std::vector<double> r_grid{0.5, 1.0, 2.0};
    const double t = 1e-2;
    int accepted = 0;
    for (std::size_t i = 0; i < 5; ++i) {
        const auto frame = extinction_frame(refined_excursion(Seed{82, i}), t, r_grid, 4);
        if (frame.rejected) continue;
        ++accepted;
        CHECK(frame.M > 0.0);
        CHECK(frame.S > 0.0);
        CHECK(frame.S < 1.0);
        REQUIRE(frame.snapshots.size() == r_grid.size());
        const auto hml = statistics_HML(frame.snapshots);
        double prev_len = 0.0;
        for (std::size_t j = 0; j < hml.size(); ++j) {
            CHECK(hml[j].r == doctest::Approx(r_grid[j]));
            CHECK(hml[j].H <= hml[j].M_leb + 1e-12);
            CHECK(hml[j].M_leb <= hml[j].L_span + 1e-12);
            CHECK(hml[j].L_span <= 8.0 + 1e-12);
            CHECK(hml[j].M_leb >= prev_len - 1e-12); // level sets grow with r
            prev_len = hml[j].M_leb;
        }
    }
    CHECK(accepted == 5); // rejection should be essentially absent at t=1e-2
}

TEST_CASE("limit frame from deterministic BES-like paths") {
    // z(t) = t on both sides: {|t| < r} -> component (-r, r), glued at 0
    std::vector<double> v(101);
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = static_cast<double>(k) * 0.05;
    const GridPath z(0.0, 0.05, v);
    const std::vector<double> r_grid{0.5, 1.0, 2.0};
    const auto lim = limit_frame(z, z, r_grid, 4);
    REQUIRE(lim.snapshots.size() == 3);
    const auto hml = statistics_HML(lim.snapshots);
    for (std::size_t j = 0; j < hml.size(); ++j) {
        CHECK(hml[j].H == doctest::Approx(2.0 * r_grid[j]).epsilon(1e-9));
        CHECK(hml[j].M_leb == doctest::Approx(2.0 * r_grid[j]).epsilon(1e-9));
    }
}

TEST_CASE("hml csv shape") {
    std::vector<std::vector<HmlStat>> frames{{{0.5, 1.0, 1.5, 2.0}}, {{0.5, 0.7, 0.9, 1.1}}};
    const std::string csv = hml_csv(frames);
    CHECK(csv.find("frame,r,H,M_leb,L_span") == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("long-excursion fixed-time marginal passes far from the endpoint") {
    // fine time step: the discrete-positivity bias of the grid excursion
    // decays like 1/sqrt(s * steps_per_unit) and must sit well under the
    // KS resolution at this sample size
    const std::vector<double> s_grid{2.0};
    const auto rep = jeulin_fixed_time_check(64, s_grid, 600, Seed{83, 0}, 256);
    REQUIRE(rep.marginal_ks.size() == 1);
    CHECK(rep.marginal_ks[0].first == doctest::Approx(2.0));
    CHECK(rep.marginal_ks[0].second.p_value > 1e-4);
    CHECK(std::fabs(rep.front_back_correlation) < 0.2);
}

TEST_CASE("long-excursion marginal fails without scale separation") {
    // at s comparable to v the finite-v factor sqrt(1 - s/v) is visible
    const std::vector<double> s_grid{3.5};
    const auto rep = jeulin_fixed_time_check(4, s_grid, 1500, Seed{84, 0}, 64);
    CHECK(rep.marginal_ks[0].second.p_value < 1e-3);
}

TEST_CASE("iterated-logarithm diagnostic structures") {
    std::vector<double> levels;
    for (int k = 3; k <= 6; ++k) levels.push_back(std::pow(2.0, -k));
    const auto curves = lil_diagnostic(8, levels, Seed{85, 0});
    REQUIRE(curves.levels.size() == levels.size());
    REQUIRE(curves.run_min_H.size() == 8);
    for (const auto& row : curves.run_min_L) {
        REQUIRE(row.size() == levels.size());
        double prev = 1e300;
        for (double v : row) {
            CHECK(v > 0.0);
            CHECK(v <= prev + 1e-12); // running minima are nonincreasing
            prev = v;
        }
    }
    // H <= M <= L pointwise transfers to the running minima
    for (std::size_t p = 0; p < 8; ++p)
        for (std::size_t j = 0; j < levels.size(); ++j) {
            CHECK(curves.run_min_H[p][j] <= curves.run_min_M[p][j] + 1e-12);
            CHECK(curves.run_min_M[p][j] <= curves.run_min_L[p][j] + 1e-12);
        }
    const double med = lil_median_at_finest(curves.run_min_L);
    CHECK(med > 0.0);
    CHECK(!lil_csv(curves).empty());
    CHECK(lil_summary_json(curves).find("levels") != std::string::npos);
    CHECK(lil_plot_script("x.csv").find("x.csv") != std::string::npos);
}

TEST_CASE("sample_path_max: bridge maximum law on a single cell") {
    // two knots at 0: the infilled max is the Brownian bridge maximum,
    // P(max <= m) = 1 - exp(-2 m^2)
    const PiecewisePath flat({0.0, 1.0}, {0.0, 0.0});
    Rng rng(Seed{301, 0});
    std::vector<double> maxima(4000);
    for (auto& m : maxima) {
        const auto mx = sample_path_max(flat, rng);
        CHECK(mx.M >= 0.0);
        CHECK(mx.S == 0.5);
        m = mx.M;
    }
    const auto ks = ks_one_sample(
        maxima, [](double m) { return m <= 0.0 ? 0.0 : -std::expm1(-2.0 * m * m); });
    CHECK(ks.p_value > 1e-4);
}

TEST_CASE("sample_path_max dominates the knot maximum and is deterministic") {
    const PiecewisePath e = refined_excursion(Seed{302, 0});
    double knot_max = 0.0;
    for (double v : e.values) knot_max = std::max(knot_max, v);
    Rng r1(Seed{303, 0}), r2(Seed{303, 0});
    const auto a = sample_path_max(e, r1);
    const auto b = sample_path_max(e, r2);
    CHECK(a.M >= knot_max);
    CHECK(a.M == b.M);
    CHECK(a.S == b.S);
    CHECK(a.M < knot_max + 0.1);
}

TEST_CASE("first_passage_below: sub-cell dip probability of a level bridge") {
    // bridge from 1 to 1 over span 8: P(min < 0) = exp(-2/8)
    const PiecewisePath seg({0.0, 8.0}, {1.0, 1.0});
    Rng rng(Seed{304, 0});
    std::size_t dips = 0;
    const std::size_t n = 4000;
    std::vector<double> taus;
    for (std::size_t i = 0; i < n; ++i) {
        const double tau = first_passage_below(seg, 0, 0.0, +1, rng);
        if (tau < 8.0) {
            ++dips;
            taus.push_back(tau);
            CHECK(tau > 0.0);
        }
    }
    const double p_dip = std::exp(-0.25);
    const double se = std::sqrt(p_dip * (1.0 - p_dip) / static_cast<double>(n));
    CHECK(std::fabs(static_cast<double>(dips) / static_cast<double>(n) - p_dip) < 4.0 * se);
}

TEST_CASE("first_passage_below walks in both directions and respects knots") {
    // V shape: the interpolated path crosses 0.5 at t = 0.75 and 1.25
    const PiecewisePath v({0.0, 1.0, 2.0}, {2.0, 0.0, 2.0});
    Rng rng(Seed{305, 0});
    // dt_min above the cell span turns off the sub-cell infill, so the
    // crossing is the deterministic interpolation
    const double right = first_passage_below(v, 0, 0.5, +1, rng, 10.0);
    CHECK(right == doctest::Approx(0.75).epsilon(1e-9));
    const double left = first_passage_below(v, 2, 0.5, -1, rng, 10.0);
    CHECK(left == doctest::Approx(1.25).epsilon(1e-9));
    CHECK_THROWS_AS(first_passage_below(v, 1, 0.5, +1, rng), std::invalid_argument);
}

#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "fragstoch/fragmentation.hpp"
#include "fragstoch/opensets.hpp"
#include "fragstoch/paths.hpp"

using namespace fragstoch;

TEST_CASE("tagged fragment: monotone mass, full mass at zero, death at e(u)") {
    const GridPath e = sample_normalized_excursion(513, Seed{71, 0});
    const auto tf = tagged_fragment(e, 0.37, 64);
    CHECK(tf.start_mass == doctest::Approx(1.0));
    CHECK(tf.death_level == doctest::Approx(e.value_at(tf.u)).epsilon(1e-12));
    REQUIRE(!tf.steps.empty());
    CHECK(tf.steps.front().first == doctest::Approx(0.0));
    CHECK(tf.steps.front().second == doctest::Approx(1.0).epsilon(1e-12));
    double prev_mass = 2.0;
    for (const auto& [lvl, mass] : tf.steps) {
        CHECK(mass <= prev_mass + 1e-14);
        CHECK(mass >= 0.0);
        prev_mass = mass;
    }
    CHECK(tf.steps.back().second == doctest::Approx(0.0));
    // every jump sits strictly below the death level
    for (const auto& j : tf.jumps) {
        CHECK(j.level < tf.death_level);
        CHECK(j.size > 0.0);
    }
}

TEST_CASE("jump sizes account for the mass up to the grid ladder slack") {
    // On a grid the running-min profile loses mass continuously on its
    // strictly monotone cells; that slack is O(n^{-1/2}) and vanishes
    // under refinement, while the jumps capture the rest exactly.
    double slack_coarse = 0.0, slack_fine = 0.0;
    for (std::size_t rep = 0; rep < 5; ++rep) {
        const GridPath c = sample_normalized_excursion(257, Seed{72, rep});
        const GridPath f = sample_normalized_excursion(16385, Seed{172, rep});
        slack_coarse += 1.0 - tagged_fragment(c, 0.61, 0, 0.0).jump_sum();
        slack_fine += 1.0 - tagged_fragment(f, 0.61, 0, 0.0).jump_sum();
    }
    CHECK(slack_coarse > 0.0);
    CHECK(slack_fine > 0.0);
    CHECK(slack_fine < slack_coarse);
    CHECK(slack_fine / 5.0 < 0.05);

    const GridPath e = sample_normalized_excursion(2049, Seed{72, 7});
    const auto tf = tagged_fragment(e, 0.61, 0, 0.0); // keep every drop
    CHECK(tf.unresolved_mass == 0.0);
    const RankedMasses m = ranked_jumps(tf);
    CHECK(m.valid());
    CHECK(m.sum() == doctest::Approx(1.0).epsilon(1e-12)); // normalized exactly
}

TEST_CASE("exact bijection between jumps and excursion intervals of e - K") {
    for (std::size_t rep = 0; rep < 10; ++rep) {
        const GridPath e = sample_normalized_excursion(257, Seed{73, rep});
        const double u = 0.05 + 0.09 * static_cast<double>(rep);
        const auto tf = tagged_fragment(e, u, 0, 0.0);
        const auto bp = bertoin_pitman(e, u);
        const OpenSet exc = level_set(bp.b, 0.0);
        REQUIRE(exc.components.size() == tf.jumps.size());
        std::vector<double> a, b;
        for (const auto& c : exc.components) a.push_back(c.length());
        for (const auto& j : tf.jumps) b.push_back(j.size);
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        for (std::size_t k = 0; k < a.size(); ++k)
            CHECK(std::fabs(a[k] - b[k]) <= 1e-12);
    }
}

TEST_CASE("decomposition invariants: b >= 0, b(u) = 0, K unimodal at u") {
    const GridPath e = sample_normalized_excursion(513, Seed{74, 0});
    const auto bp = bertoin_pitman(e, 0.42);
    CHECK(bp.zeta == doctest::Approx(e.value_at(bp.u)).epsilon(1e-12));
    for (double v : bp.b.values) CHECK(v >= -1e-15);
    CHECK(bp.b.value_at(bp.u) == doctest::Approx(0.0).epsilon(1e-13));
    // K is nondecreasing before u, nonincreasing after
    for (std::size_t k = 1; k < bp.K.size(); ++k) {
        if (bp.K.times[k] <= bp.u)
            CHECK(bp.K.values[k] >= bp.K.values[k - 1] - 1e-15);
        else
            CHECK(bp.K.values[k] <= bp.K.values[k - 1] + 1e-15);
    }
}

TEST_CASE("root change at the maximum: structural identities") {
    const GridPath e = sample_normalized_excursion(1025, Seed{75, 0});
    const GridPath h = haas_transform(e);
    CHECK(h.values.front() == 0.0);
    CHECK(h.values.back() == 0.0);
    CHECK(h.size() == e.size());
    CHECK(h.max_value() == doctest::Approx(e.max_value()).epsilon(1e-12));
    // values are a cyclic relabeling of M - e: same multiset off the seam
    std::vector<double> a(e.values.begin(), e.values.end() - 1);
    std::vector<double> b(h.values.begin(), h.values.end() - 1);
    const double M = e.max_value();
    for (auto& v : a) v = M - v;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    for (std::size_t k = 0; k < a.size(); ++k)
        CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-12));
}

TEST_CASE("obliteration: cuts split the positivity set and shrink it") {
    const GridPath e = sample_normalized_excursion(2049, Seed{76, 0});
    ObliterationState s = ObliterationState::from_excursion(e);
    CHECK(s.n == 0);
    CHECK(s.V.components.size() == 1);
    Rng rng(Seed{76, 1});
    const double initial = s.V.total_length();
    for (int cut = 1; cut <= 4; ++cut) {
        const double before = s.V.total_length();
        const auto before_comps = s.V.components.size();
        s = obliterate_uniform(s, rng);
        CHECK(s.n == cut);
        // a cut near a component edge can remove arbitrarily little
        CHECK(s.V.total_length() <= before + 1e-15);
        CHECK(s.V.components.size() >= before_comps); // a cut never merges pieces
        for (double v : s.b.values) CHECK(v >= -1e-15);
    }
    CHECK(s.V.total_length() < initial);
}

TEST_CASE("obliteration at a chosen point zeroes the path there") {
    const GridPath e = sample_normalized_excursion(1025, Seed{77, 0});
    const auto s = obliterate(ObliterationState::from_excursion(e), 0.5);
    CHECK(s.b.value_at(0.5) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_FALSE(component_containing(s.V, 0.5).has_value());
    CHECK_THROWS(obliterate(s, 0.5)); // now outside the positivity set
}

TEST_CASE("poisson obliteration with zero horizon is the identity") {
    const GridPath e = sample_normalized_excursion(257, Seed{78, 0});
    const auto s = poisson_obliteration(e, 0.0, Seed{78, 1});
    CHECK(s.n == 0);
    CHECK(s.V.total_length() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("binary dislocation density values") {
    CHECK(eval_binary_dislocation_density(0.25) == 0.0);
    CHECK(eval_binary_dislocation_density(1.0) == 0.0);
    const double x = 0.75;
    const double expect =
        2.0 / std::sqrt(2.0 * M_PI * std::pow(x, 3.0) * std::pow(1.0 - x, 3.0));
    CHECK(eval_binary_dislocation_density(x) == doctest::Approx(expect).epsilon(1e-13));
    CHECK(expect == doctest::Approx(9.8274).epsilon(1e-4));
    // blows up near 1 (infinite total mass is expected)
    CHECK(eval_binary_dislocation_density(0.999) > 1e3);
}

TEST_CASE("tagged point colliding with a grid node is shifted, not rejected") {
    const GridPath e = sample_normalized_excursion(65, Seed{79, 0});
    const auto tf = tagged_fragment(e, 0.5, 16); // exact node of the 65-point grid
    CHECK(tf.u != 0.5);
    CHECK(std::fabs(tf.u - 0.5) <= e.dt);
}

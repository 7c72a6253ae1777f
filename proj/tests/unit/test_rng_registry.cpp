#include <cmath>
#include <string>
#include <vector>

#include <doctest.h>

#include "fragstoch/registry.hpp"
#include "fragstoch/rng.hpp"

using namespace fragstoch;

TEST_CASE("identical seeds reproduce, distinct streams differ") {
    Rng a(Seed{42, 7}), b(Seed{42, 7}), c(Seed{42, 8});
    bool all_equal = true, any_equal = false;
    for (int k = 0; k < 64; ++k) {
        const auto x = a.next_u64(), y = b.next_u64(), z = c.next_u64();
        all_equal = all_equal && (x == y);
        any_equal = any_equal || (x == z);
    }
    CHECK(all_equal);
    CHECK_FALSE(any_equal);
}

TEST_CASE("sub-streams are distinct") {
    const Seed s{1, 1};
    CHECK(s.sub(0).stream != s.sub(1).stream);
    CHECK(s.sub(0).stream != s.stream);
    CHECK(s.sub(2).sub(0).stream != s.sub(0).sub(2).stream);
}

TEST_CASE("normal, gamma and beta sampling moments") {
    Rng rng(Seed{99, 0});
    const int n = 200000;
    double s1 = 0, s2 = 0, g1 = 0, b1 = 0;
    for (int k = 0; k < n; ++k) {
        const double x = rng.normal();
        s1 += x;
        s2 += x * x;
        g1 += rng.gamma(2.5);
        b1 += rng.beta(2.0, 3.0);
    }
    CHECK(std::fabs(s1 / n) < 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.02));
    CHECK(g1 / n == doctest::Approx(2.5).epsilon(0.02));
    CHECK(b1 / n == doctest::Approx(0.4).epsilon(0.02));
}

TEST_CASE("parallel_map result is independent of the worker count") {
    auto f = [](Seed s, std::size_t i) {
        Rng rng(s);
        return rng.normal() + static_cast<double>(i) * 1e-9;
    };
    const auto serial = parallel_map(1000, Seed{5, 5}, 1, f);
    const auto threaded = parallel_map(1000, Seed{5, 5}, 4, f);
    CHECK(serial == threaded);
}

TEST_CASE("parallel_map propagates exceptions") {
    auto f = [](Seed, std::size_t i) -> double {
        if (i == 700) throw std::runtime_error("boom");
        return 0.0;
    };
    CHECK_THROWS_WITH(static_cast<void>(parallel_map(1000, Seed{6, 6}, 3, f)), "boom");
}

TEST_CASE("config parsing") {
    const auto cfg = Config::from_lines("a = 1.5\n# comment\n b=2 # trailing\n\nname.x = 4\n");
    CHECK(cfg.get("a", 0.0) == doctest::Approx(1.5));
    CHECK(cfg.get("b", 0.0) == doctest::Approx(2.0));
    CHECK(cfg.get_size("name.x", 0) == 4);
    CHECK(cfg.get("missing", 7.0) == doctest::Approx(7.0));
    CHECK_THROWS(Config::from_lines("oops\n"));
    CHECK_THROWS(Config::from_lines("key =\n"));
}

namespace {

std::vector<VerificationCase> fake_registry() {
    return {
        {"alpha-one", "alpha", "records its seed", true,
         [](const CaseContext& ctx) {
             CaseResult r;
             r.passed = true;
             Rng rng(ctx.seed);
             r.stats.emplace_back("draw", rng.uniform());
             return r;
         }},
        {"beta-two", "beta", "always fails", true,
         [](const CaseContext&) {
             CaseResult r;
             r.passed = false;
             return r;
         }},
        {"gamma-three", "gamma", "throws", true,
         [](const CaseContext&) -> CaseResult { throw std::runtime_error("numerical"); }},
    };
}

double stat_of(const RegistryReport& rep, const std::string& id) {
    for (const auto& r : rep.reports)
        if (r.id == id) return r.result.stats.at(0).second;
    FAIL("case not found");
    return 0.0;
}

} // namespace

TEST_CASE("registry: filtering, determinism, exception capture") {
    const auto cases = fake_registry();
    const Config cfg;
    const auto all = run_registry(cases, "", 77, 1, cfg);
    REQUIRE(all.reports.size() == 3);
    CHECK_FALSE(all.all_hard_passed());
    CHECK(all.reports[2].result.note.find("exception") == 0);

    const auto filtered = run_registry(cases, "alpha", 77, 1, cfg);
    REQUIRE(filtered.reports.size() == 1);
    CHECK(filtered.reports[0].id == "alpha-one");
    CHECK(filtered.all_hard_passed());

    // case draws depend only on (master seed, id): filtering does not move them
    CHECK(stat_of(all, "alpha-one") == stat_of(filtered, "alpha-one"));
    const auto rerun = run_registry(cases, "", 77, 4, cfg);
    CHECK(stat_of(all, "alpha-one") == stat_of(rerun, "alpha-one"));
    const auto other_seed = run_registry(cases, "", 78, 1, cfg);
    CHECK(stat_of(all, "alpha-one") != stat_of(other_seed, "alpha-one"));
}

TEST_CASE("registry report JSON carries the schema tag") {
    const auto rep = run_registry(fake_registry(), "alpha", 3, 1, Config{});
    const auto j = rep.to_json();
    CHECK(j.find("fragstoch-report/1") != std::string::npos);
    CHECK(j.find("alpha-one") != std::string::npos);
}

TEST_CASE("config overrides reach the cases") {
    Config cfg = Config::from_lines("knob = 13\n");
    CaseContext ctx;
    ctx.config = &cfg;
    CHECK(ctx.cfg("knob", 1.0) == doctest::Approx(13.0));
    CHECK(ctx.cfg_size("other", 5) == 5);
}

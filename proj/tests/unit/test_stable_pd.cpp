#include <cmath>
#include <vector>

#include <doctest.h>

#include "fragstoch/quadrature.hpp"
#include "fragstoch/special.hpp"
#include "fragstoch/stable_pd.hpp"
#include "fragstoch/stats.hpp"

using namespace fragstoch;

namespace {
const StableParams kB = StableParams::brownian();
}

TEST_CASE("canonical parameters") {
    CHECK(kB.beta == doctest::Approx(0.5));
    CHECK(kB.C == doctest::Approx(2.0 * std::sqrt(2.0)));
    CHECK(kB.is_brownian());
    const StableParams tree = StableParams::stable_tree(1.5);
    CHECK(tree.beta == doctest::Approx(1.0 / 3.0));
    CHECK(tree.C ==
          doctest::Approx(std::tgamma(2.0 / 3.0) / std::tgamma(5.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("density, potential and death density reference values") {
    // f_1(1) = sqrt(2/pi) e^{-2}
    CHECK(stable_density(1.0, 1.0, kB) ==
          doctest::Approx(std::sqrt(2.0 / M_PI) * std::exp(-2.0)).epsilon(1e-12));
    // h(1) = 1/(2 sqrt(2 pi))
    CHECK(potential_h(1.0, kB) ==
          doctest::Approx(1.0 / (2.0 * std::sqrt(2.0 * M_PI))).epsilon(1e-12));
    // death density at a=1/2, x=1: 2 e^{-1/2}
    CHECK(death_time_density(0.5, 1.0, kB) ==
          doctest::Approx(2.0 * std::exp(-0.5)).epsilon(1e-12));
}

TEST_CASE("potential is the time integral of the density") {
    for (double x : {0.5, 1.0, 2.0}) {
        const double num = integrate_to_inf(
            [&](double t) { return t > 0.0 ? stable_density(t, x, kB) : 0.0; }, 0.0, 1e-12);
        CHECK(num == doctest::Approx(potential_h(x, kB)).epsilon(1e-8));
    }
}

TEST_CASE("general-beta density matches the closed form at beta = 1/2") {
    // force the generic series/integral route with a C that breaks the
    // is_brownian() fast path only in the comparison values
    const StableParams generic{0.5 + 1e-14, 2.0 * std::sqrt(2.0)};
    for (double x : {0.2, 0.7, 1.5, 6.0, 30.0}) {
        const double closed = stable_density(1.0, x, kB);
        CHECK(stable_density(1.0, x, generic) == doctest::Approx(closed).epsilon(1e-8));
    }
}

TEST_CASE("general-beta density normalizes and obeys Chapman-Kolmogorov") {
    // The x^{-1-beta} tail makes a naive x = u/(1-u) substitution
    // endpoint-singular; substitute u = x^{-beta} instead, under which the
    // tail integrand tends to the finite Levy-tail constant t C/Gamma(1-beta).
    for (double beta : {0.3, 0.5, 0.7}) {
        const StableParams p{beta, 1.3};
        const double X = std::pow(p.C, 1.0 / beta);
        const double head = integrate(
            [&](double x) { return x > 0.0 ? stable_density(1.0, x, p) : 0.0; }, 0.0, X,
            1e-11);
        const double tail = integrate(
            [&](double u) {
                if (u <= 0.0) return p.C / std::tgamma(1.0 - beta);
                const double x = std::pow(u, -1.0 / beta);
                return stable_density(1.0, x, p) * x / (beta * u);
            },
            0.0, std::pow(X, -beta), 1e-11);
        CHECK(head + tail == doctest::Approx(1.0).epsilon(1e-8));
    }
    // f_{t+s}(x) = int f_t(y) f_s(x-y) dy at beta = 1/2
    const double t = 0.3, s = 0.4, x = 1.0;
    const double conv = integrate(
        [&](double y) {
            return y <= 0.0 || y >= x ? 0.0
                                      : stable_density(t, y, kB) * stable_density(s, x - y, kB);
        },
        0.0, x, 1e-12);
    CHECK(conv == doctest::Approx(stable_density(t + s, x, kB)).epsilon(1e-5));
}

TEST_CASE("C enters only through the time scale") {
    const StableParams p1{0.4, 1.0}, p2{0.4, 2.5};
    for (double x : {0.4, 1.0, 3.0})
        CHECK(stable_density(1.0, x, p2) ==
              doctest::Approx(stable_density(2.5, x, p1)).epsilon(1e-10));
}

TEST_CASE("transition density integrates to the survival probability") {
    // int_0^x p_s(x,y) dy = P(zeta > s) = e^{-2 s^2} at beta=1/2, x=1
    const double s = 0.3;
    // substitute y = w^2 to tame the h(y) ~ y^{-1/2} endpoint singularity;
    // start just above 0 because the substituted integrand has a finite
    // nonzero limit there
    const double surv = integrate(
        [&](double w) { return 2.0 * w * transition_density(s, 1.0, w * w, kB); }, 1e-30,
        1.0, 1e-10);
    CHECK(surv == doctest::Approx(std::exp(-2.0 * s * s)).epsilon(1e-6));
    CHECK(transition_density(s, 1.0, 1.2, kB) == 0.0);
}

TEST_CASE("death-time density normalizes for general beta") {
    const StableParams p{0.4, 1.0};
    // tolerance is bounded below by the ~1e-10 noise of the generic
    // density evaluator
    const double mass = integrate_to_inf(
        [&](double a) { return a > 0.0 ? death_time_density(a, 1.0, p) : 0.0; }, 0.0, 1e-9);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("clock exponent: closed form against quadrature") {
    // the clock is the beta^2-rescaled Lamperti subordinator, so
    // phi(q) = C Gamma(q beta^2 + beta) / Gamma(q beta^2);
    // at beta = 1/2: phi(2) = sqrt(8/pi), phi(4) = sqrt(2 pi)
    CHECK(death_clock_exponent(2.0, kB) ==
          doctest::Approx(std::sqrt(8.0 / M_PI)).epsilon(1e-7));
    CHECK(death_clock_exponent(4.0, kB) ==
          doctest::Approx(std::sqrt(2.0 * M_PI)).epsilon(1e-7));
    for (double beta : {0.3, 0.6}) {
        const StableParams p{beta, 1.7};
        for (double q : {1.0, 2.5}) {
            const double qb = q * beta * beta;
            const double closed = p.C * std::tgamma(qb + beta) / std::tgamma(qb);
            CHECK(death_clock_exponent(q, p) == doctest::Approx(closed).epsilon(1e-6));
        }
    }
    CHECK(death_clock_delta(kB) == doctest::Approx(-2.0));
}

TEST_CASE("death-time moments") {
    CHECK(moments_of_death_time(1, kB) == doctest::Approx(std::sqrt(M_PI / 8.0)).epsilon(1e-7));
    CHECK(moments_of_death_time(2, kB) == doctest::Approx(0.5).epsilon(1e-7));
    // moments must be positive and defined for general beta too
    const StableParams p{0.35, 1.0};
    for (int k = 1; k <= 5; ++k) CHECK(moments_of_death_time(k, p) > 0.0);
}

TEST_CASE("bridge-method sampler: structure and death law") {
    const std::size_t n = 1000;
    std::vector<double> deaths(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto path = sample_conditioned_bridge_method(1.0, kB, Seed{61, i}, 8);
        deaths[i] = path.death_time;
        CHECK(path.death_time > 0.0);
        CHECK(path.jump_sum() == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(path.value_at(0.0) == doctest::Approx(1.0));
        CHECK(path.value_at(path.death_time * 2.0) == doctest::Approx(0.0));
        // monotone decreasing
        double prev = 1.0 + 1e-15;
        double t_prev = -1.0;
        for (const auto& j : path.jumps) {
            CHECK(j.size > 0.0);
            CHECK(j.time > t_prev);
            t_prev = j.time;
            prev -= j.size;
        }
        CHECK(prev == doctest::Approx(0.0).epsilon(1e-9));
        const RankedMasses m = path.ranked_jumps();
        CHECK(m.sum() == doctest::Approx(1.0).epsilon(1e-9));
    }
    const auto ks = ks_one_sample(
        deaths, [](double a) { return a <= 0.0 ? 0.0 : -std::expm1(-2.0 * a * a); });
    CHECK(ks.p_value > 1e-4);
}

TEST_CASE("Lamperti sampler: structure and death law") {
    const std::size_t n = 300;
    std::vector<double> deaths(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto path = sample_conditioned_lamperti_method(kB, Seed{62, i});
        deaths[i] = path.death_time;
        CHECK(path.death_time > 0.0);
        CHECK(path.jump_sum() == doctest::Approx(1.0).epsilon(1e-3));
        CHECK(path.below_resolution_mass < 1e-2);
    }
    const auto ks = ks_one_sample(
        deaths, [](double a) { return a <= 0.0 ? 0.0 : -std::expm1(-2.0 * a * a); });
    CHECK(ks.p_value > 1e-4);
}

TEST_CASE("Lamperti Levy density value") {
    // rho(x) = beta C / Gamma(1-beta) e^x / (e^x - 1)^{1+beta}
    const double x = 0.8;
    const double expect = 0.5 * kB.C / std::tgamma(0.5) * std::exp(x) /
                          std::pow(std::expm1(x), 1.5);
    CHECK(lamperti_levy_density(x, kB) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("PD stick breaking: validity and first size-biased pick") {
    const std::size_t n = 3000;
    std::vector<double> first(n);
    for (std::size_t i = 0; i < n; ++i) {
        const RankedMasses m = sample_pd({0.5, 0.5}, 512, Seed{63, i});
        CHECK(m.valid());
        CHECK(m.sum() == doctest::Approx(1.0).epsilon(1e-9));
        first[i] = size_biased_permutation(m, Seed{64, i}).front();
    }
    // first pick of PD(1/2,1/2) is Beta(1/2,1): CDF sqrt(x)
    const auto ks = ks_one_sample(first, [](double x) {
        return x <= 0.0 ? 0.0 : (x >= 1.0 ? 1.0 : std::sqrt(x));
    });
    CHECK(ks.p_value > 1e-4);
}

TEST_CASE("stick ratios invert the stick-breaking construction") {
    const std::vector<double> sb{0.4, 0.3, 0.15};
    const auto y = stick_ratios(sb, 3);
    REQUIRE(y.size() == 3);
    CHECK(y[0] == doctest::Approx(0.4));
    CHECK(y[1] == doctest::Approx(0.5));
    CHECK(y[2] == doctest::Approx(0.5));
}

TEST_CASE("PPY joint density: a-integration recovers the first-pick law") {
    // int_0^inf p(y, a) da = density of the first size-biased pick,
    // which at beta=1/2 is Beta(1/2,1): y^{-1/2}/2
    for (double y : {0.25, 0.5, 0.81}) {
        const double num = integrate_to_inf(
            [&](double a) {
                if (a <= 0.0) return 0.0;
                const double v[] = {y};
                return eval_ppy_joint_density(v, a, kB);
            },
            0.0, 1e-10);
        CHECK(num == doctest::Approx(0.5 / std::sqrt(y)).epsilon(1e-6));
    }
}

TEST_CASE("dislocation-measure draw: exact simplex point with positive weight") {
    const StableParams tree = StableParams::stable_tree(1.6); // beta = 0.375
    for (std::size_t i = 0; i < 50; ++i) {
        const auto [m, w] = sample_nu_minus(tree, 64, Seed{65, i});
        CHECK(m.valid());
        CHECK(m.sum() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(w > 0.0);
    }
    CHECK_THROWS(sample_nu_minus(kB, 16, Seed{66, 0})); // beta must be < 1/2
}

TEST_CASE("general-beta bridge sampler keeps the subordinator structure") {
    const StableParams p{0.4, 1.0};
    for (std::size_t i = 0; i < 20; ++i) {
        const auto path = sample_conditioned_bridge_method(1.0, p, Seed{67, i}, 6);
        CHECK(path.death_time > 0.0);
        CHECK(path.jump_sum() == doctest::Approx(1.0).epsilon(1e-9));
        double t_prev = -1.0;
        for (const auto& j : path.jumps) {
            CHECK(j.size > 0.0);
            CHECK(j.time > t_prev);
            t_prev = j.time;
            CHECK(j.time < path.death_time);
        }
    }
}

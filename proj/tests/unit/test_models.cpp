#include <doctest.h>

#include <cmath>
#include <random>

#include "duffing/errors.hpp"
#include "duffing/models.hpp"
#include "duffing/types.hpp"

using namespace duffing;

TEST_CASE("linear field") {
    const auto g = make_linear();
    CHECK(g.eval(1.0) == 1.0);
    CHECK(g.antideriv(2.0) == 2.0);
    CHECK(g.deriv(-7.3) == 1.0);
    CHECK(g.K == 1.0);
    CHECK(g.A0 == 1.0);
    CHECK(g.M0 == 0.0);
}

TEST_CASE("semilinear field bounds and smoothness") {
    const auto g = make_semilinear(1.0, 3.0);
    CHECK(g.K == 9.0);
    CHECK(g.A0 == 1.0);
    CHECK(g.M0 == 1.0);
    CHECK(g.eval(0.0) == 0.0);
    CHECK(g.antideriv(0.0) == 0.0);

    // dense-grid scan: g' within [1, 9], g(x)/x >= 1
    for (int i = 0; i <= 40000; ++i) {
        const double x = -2000.0 + 4000.0 * i / 40000.0;
        const double d = g.deriv(x);
        CHECK(d >= 1.0 - 1e-12);
        CHECK(d <= 9.0 + 1e-12);
        if (std::abs(x) > 1e-9) CHECK(g.eval(x) / x >= 1.0 - 1e-12);
    }

    // derivative is continuous through a blend zone (corner at x = 4)
    double prev = g.deriv(3.7);
    for (int i = 1; i <= 400; ++i) {
        const double x = 3.7 + 0.6 * i / 400.0;
        const double d = g.deriv(x);
        CHECK(std::abs(d - prev) < 0.1);
        prev = d;
    }
}

TEST_CASE("semilinear oddness property") {
    const auto g = make_semilinear(1.0, 3.0);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 500.0);
    for (int i = 0; i < 200; ++i) {
        const double x = u(rng);
        CHECK(g.eval(-x) == -g.eval(x));
        CHECK(g.antideriv(-x) == g.antideriv(x));
    }
}

TEST_CASE("semilinear random parameters stay certified") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> lo(0.3, 1.5), span(1.2, 4.0), gr(1.6, 8.0);
    for (int i = 0; i < 10; ++i) {
        const double l = lo(rng), h = l * span(rng), growth = gr(rng);
        const double s = 0.4 * (growth - 1.0) / (growth + 1.0);
        const auto g = make_semilinear(l, h, growth, s);  // certify_field runs inside
        CHECK(g.K == h * h);
    }
}

TEST_CASE("semilinear parameter validation") {
    CHECK_THROWS_AS(make_semilinear(3.0, 1.0), ConfigError);
    CHECK_THROWS_AS(make_semilinear(1.0, 1.0), ConfigError);
    CHECK_THROWS_AS(make_semilinear(1.0, 3.0, 1.0, 0.05), ConfigError);
    // smoothing wide enough to merge adjacent corners: s >= (growth-1)/(growth+1)
    CHECK_THROWS_AS(make_semilinear(1.0, 3.0, 1.5, 0.25), ConfigError);
}

TEST_CASE("forcing evaluation") {
    Forcing cos_t;
    cos_t.cos_coeffs = {1.0};
    CHECK(eval_forcing(cos_t, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(eval_forcing(cos_t, kPi) == doctest::Approx(-1.0).epsilon(1e-14));

    Forcing f;
    f.constant = 0.5;
    f.sin_coeffs = {0.0, 1.0};  // sin(2t)
    CHECK(eval_forcing(f, kPi / 4.0) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(f.bound() == doctest::Approx(1.5));
}

TEST_CASE("forcing periodicity at random times") {
    Forcing f;
    f.constant = 0.25;
    f.cos_coeffs = {0.7, -0.2, 0.05};
    f.sin_coeffs = {0.1, 0.4};
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    for (int i = 0; i < 100; ++i) {
        const double t = u(rng);
        CHECK(std::abs(eval_forcing(f, t) - eval_forcing(f, t + kTwoPi)) <
              1e-13 * (1.0 + f.bound()));
    }
}

TEST_CASE("impulse schedule enumerates one time per period") {
    ImpulseSchedule sched;
    sched.t1 = 0.5 * kPi;
    const auto times = sched.times_in(0.0, 3.0 * kTwoPi);
    REQUIRE(times.size() == 3);
    for (std::size_t j = 0; j < times.size(); ++j)
        CHECK(times[j] == doctest::Approx(0.5 * kPi + kTwoPi * j).epsilon(1e-15));

    // half-open window: an impulse at t_end belongs to the next span
    CHECK(sched.times_in(0.0, 0.5 * kPi).empty());
    CHECK(sched.times_in(0.5 * kPi, kTwoPi).size() == 1);

    ImpulseSchedule off;
    off.t1 = 0.5 * kPi;
    off.enabled = false;
    CHECK(off.times_in(0.0, 10.0 * kTwoPi).empty());
}

TEST_CASE("certify rejects fields violating the stated constants") {
    GField bad;
    bad.eval = [](double x) { return x; };
    bad.deriv = [](double) { return 1.0; };
    bad.antideriv = [](double x) { return 0.5 * x * x; };
    bad.K = 0.5;  // |g'| = 1 > K
    bad.A0 = 1.0;
    bad.M0 = 0.0;
    CHECK_THROWS_AS(certify_field(bad), ConfigError);

    GField shifted;
    shifted.eval = [](double x) { return x; };
    shifted.deriv = [](double) { return 1.0; };
    shifted.antideriv = [](double x) { return 0.5 * x * x + 1.0; };  // G(0) != 0
    shifted.K = 1.0;
    shifted.A0 = 1.0;
    shifted.M0 = 0.0;
    CHECK_THROWS_AS(certify_field(shifted), ConfigError);
}

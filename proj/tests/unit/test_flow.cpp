#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "duffing/energy.hpp"
#include "duffing/errors.hpp"
#include "duffing/flow.hpp"
#include "duffing/models.hpp"

using namespace duffing;

namespace {

ImpulsiveSystem linear_system(double t1 = 0.5 * kPi) {
    ImpulsiveSystem sys;
    sys.g = make_linear();
    sys.impulse.t1 = t1;
    return sys;
}

}  // namespace

TEST_CASE("flow_segment follows the harmonic rotation with a lifted angle") {
    auto sys = linear_system();
    {
        const auto s = flow_segment(sys, make_lifted(0.0, 1.0, 0.0), 0.5 * kPi, {});
        CHECK(std::abs(s.x) < 1e-9);
        CHECK(s.y == doctest::Approx(-1.0).epsilon(1e-9));
        CHECK(s.phi == doctest::Approx(-0.5 * kPi).epsilon(1e-9));
    }
    {
        sys.impulse.enabled = false;  // plain rotation across the half period
        const auto s = flow_segment(sys, make_lifted(0.0, 1.0, 0.0), kPi, {});
        CHECK(s.x == doctest::Approx(-1.0).epsilon(1e-9));
        CHECK(s.phi == doctest::Approx(-kPi).epsilon(1e-9));
    }
}

TEST_CASE("flow_segment rejects an interior impulse time") {
    const auto sys = linear_system();
    CHECK_THROWS_AS(flow_segment(sys, make_lifted(0.0, 1.0, 0.0), kPi + 0.1, {}), ConfigError);
}

TEST_CASE("backward spans are rejected") {
    const auto sys = linear_system();
    CHECK_THROWS_AS(evolve(sys, make_lifted(1.0, 1.0, 0.0), 0.5, {}), ConfigError);
    CHECK_THROWS_AS(flow_segment(sys, make_lifted(1.0, 1.0, 0.0), 0.5, {}), ConfigError);
}

TEST_CASE("impulse jump rule") {
    {
        LiftedState s{0.5 * kPi, 0.0, -1.0, 1.0, -0.5 * kPi};
        const auto out = apply_impulse(s);
        CHECK(out.x == 0.0);
        CHECK(out.y == 1.0);
        CHECK(out.rho == 1.0);
        CHECK(out.phi == doctest::Approx(-1.5 * kPi).epsilon(1e-15));
        CHECK(impulse_angle_jump(s.phi, s.y) == doctest::Approx(-kPi).epsilon(1e-15));
    }
    {
        // axis point: the impulse exists in name only
        LiftedState s{0.5 * kPi, 1.0, 0.0, 1.0, 0.0};
        const auto out = apply_impulse(s);
        CHECK(out.x == 1.0);
        CHECK(impulse_angle_jump(s.phi, s.y) == 0.0);
        CHECK(out.phi == 0.0);
    }
    {
        // second impulse of the linear trajectory over [0, 4*pi]
        LiftedState s{2.5 * kPi, 0.0, 1.0, 1.0, -3.5 * kPi};
        const auto out = apply_impulse(s);
        CHECK(out.y == -1.0);
        CHECK(out.phi == doctest::Approx(-4.5 * kPi).epsilon(1e-12));
    }
}

TEST_CASE("impulse preserves the energy exactly") {
    const auto g = make_semilinear(1.0, 3.0);
    LiftedState s{0.5 * kPi, 1.2345678901234567, -0.87654321, 0.0, 0.0};
    s.rho = std::hypot(s.x, s.y);
    s.phi = std::atan2(s.y, s.x);
    const auto out = apply_impulse(s);
    CHECK(std::memcmp(&out.x, &s.x, sizeof(double)) == 0);  // x bitwise unchanged
    CHECK(potential(g, out.x, out.y) == potential(g, s.x, s.y));
    CHECK(out.rho == s.rho);
}

TEST_CASE("evolve reproduces the worked linear trajectories") {
    const auto sys = linear_system();
    {
        const auto [end, diag] = evolve(sys, make_lifted(0.0, 1.0, 0.0), kTwoPi, {});
        CHECK(end.x == doctest::Approx(-1.0).epsilon(1e-9));
        CHECK(std::abs(end.y) < 1e-9);
        CHECK(diag.winding == doctest::Approx(-3.0 * kPi).epsilon(1e-9));
        CHECK(diag.impulses == 1);
    }
    {
        const auto [end, diag] = evolve(sys, make_lifted(0.0, 1.0, 0.0), 2.0 * kTwoPi, {});
        (void)diag;
        CHECK(end.x == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(std::abs(end.y) < 1e-8);
    }
    {
        // x(t) = y0 sin t through the impulse
        const double y0 = 2.0;
        const auto [mid, d1] = evolve(sys, make_lifted(0.0, 0.0, y0), 0.5 * kPi, {});
        (void)d1;
        CHECK(mid.x == doctest::Approx(y0).epsilon(1e-9));
        const auto [end, d2] = evolve(sys, make_lifted(0.0, 0.0, y0), kTwoPi, {});
        (void)d2;
        CHECK(std::abs(end.x) < 1e-9);
        CHECK(end.y == doctest::Approx(y0).epsilon(1e-9));
    }
}

TEST_CASE("energy conservation between impulses") {
    ImpulsiveSystem sys;
    sys.g = make_semilinear(1.0, 3.0);
    sys.impulse.t1 = 0.5 * kPi;
    for (double c : {10.0, 1e3, 1e6}) {
        const auto [h, h1] = intercepts(sys.g, c);
        (void)h1;
        const auto [end, diag] = evolve(sys, make_lifted(0.0, h, 0.0), kTwoPi, {});
        (void)end;
        CHECK(diag.energy_drift <= 1e-8 * std::max(1.0, c));
    }
}

TEST_CASE("lift consistency along a dense trajectory") {
    ImpulsiveSystem sys;
    sys.g = make_semilinear(1.0, 3.0);
    sys.impulse.t1 = 0.5 * kPi;
    int checked = 0;
    TrajectorySink sink = [&](double, double x, double y, double rho, double phi, double, bool) {
        if (rho > 0.0) {
            CHECK(std::abs(x - rho * std::cos(phi)) <= 1e-9 * rho);
            CHECK(std::abs(y - rho * std::sin(phi)) <= 1e-9 * rho);
            ++checked;
        }
    };
    FlowSettings settings;
    settings.dense_output = true;
    evolve(sys, make_lifted(0.0, 20.0, 3.0), kTwoPi, settings, sink);
    CHECK(checked > 100);
}

TEST_CASE("winding additivity across a restart") {
    ImpulsiveSystem sys;
    sys.g = make_semilinear(1.0, 3.0);
    sys.impulse.t1 = 0.5 * kPi;
    const auto s0 = make_lifted(0.0, 15.0, -2.0);

    const auto [full_end, full] = evolve(sys, s0, 2.0 * kTwoPi, {});
    const auto [mid, first] = evolve(sys, s0, kTwoPi, {});
    const auto [end2, second] = evolve(sys, mid, 2.0 * kTwoPi, {});
    (void)end2;
    CHECK(first.winding + second.winding ==
          doctest::Approx(full.winding).epsilon(1e-9));
    CHECK(full_end.x == doctest::Approx(end2.x).epsilon(1e-8));
}

TEST_CASE("one clockwise revolution per period without the impulse") {
    ImpulsiveSystem sys;
    sys.g = make_semilinear(1.0, 3.0);
    sys.impulse.enabled = false;
    const double c = 500.0;
    const double T = tau(sys.g, c);
    for (const auto& p : sample_curve(sys.g, c, 8)) {
        const auto [end, diag] = evolve(sys, make_lifted(0.0, p.x, p.y), T, {});
        (void)end;
        CHECK(diag.winding == doctest::Approx(-kTwoPi).epsilon(1e-8));
    }
}

TEST_CASE("lifted angle agrees with the angular ODE on segments") {
    // independent oracle: integrate the polar system
    //   rho' = rho cos(phi) sin(phi) - g(rho cos phi) sin(phi)
    //   phi' = -sin(phi)^2 - g(rho cos phi) cos(phi) / rho
    // directly and compare with the unwrapped Cartesian lift
    const auto g = make_semilinear(1.0, 3.0);
    ImpulsiveSystem sys;
    sys.g = g;
    sys.impulse.enabled = false;

    using Polar = Dopri5<2>;
    Polar::Rhs polar_rhs = [&g](double, const Polar::State& s, Polar::State& ds) {
        const double rho = s[0], phi = s[1];
        const double c = std::cos(phi), sn = std::sin(phi);
        const double gv = g.eval(rho * c);
        ds[0] = rho * c * sn - gv * sn;
        ds[1] = -sn * sn - gv * c / rho;
    };
    StepControl ctl{1e-11, 1e-13, 0.05};

    for (double phi0 : {0.3, 2.0, -1.2}) {
        const double rho0 = 25.0;
        const auto s0 = make_lifted(0.0, rho0 * std::cos(phi0), rho0 * std::sin(phi0));
        const auto seg = flow_segment(sys, {0.0, s0.x, s0.y, rho0, phi0}, 1.7, {});
        const auto polar = Polar::integrate(polar_rhs, 0.0, {rho0, phi0}, 1.7, ctl);
        CHECK(seg.phi == doctest::Approx(polar[1]).epsilon(1e-7));
        CHECK(seg.rho == doctest::Approx(polar[0]).epsilon(1e-7));
    }
}

TEST_CASE("impulse at the span start acts on the initial state") {
    ImpulsiveSystem sys;
    sys.g = make_linear();
    sys.impulse.t1 = 0.0;
    // (1, 1) reflects to (1, -1) at t = 0, then rotates a full period
    const auto [end, diag] = evolve(sys, make_lifted(0.0, 1.0, 1.0), kTwoPi, {});
    CHECK(diag.impulses == 1);
    CHECK(end.x == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(end.y == doctest::Approx(-1.0).epsilon(1e-9));

    // composition still matches a single evolution over two periods
    const auto [mid, d1] = evolve(sys, make_lifted(0.0, 0.3, 0.8), kTwoPi, {});
    const auto [two, d2] = evolve(sys, mid, 2.0 * kTwoPi, {});
    const auto [direct, d3] = evolve(sys, make_lifted(0.0, 0.3, 0.8), 2.0 * kTwoPi, {});
    (void)d1;
    (void)d2;
    (void)d3;
    CHECK(two.x == doctest::Approx(direct.x).epsilon(1e-9));
    CHECK(two.y == doctest::Approx(direct.y).epsilon(1e-9));
}

TEST_CASE("winding is stable under tolerance refinement") {
    ImpulsiveSystem sys;
    sys.g = make_semilinear(1.0, 3.0);
    sys.impulse.t1 = 0.5 * kPi;
    FlowSettings tight;
    tight.rel_tol = 1e-11;
    tight.abs_tol = 1e-13;
    const auto s0 = make_lifted(0.0, 40.0, 13.0);
    const auto [e1, d1] = evolve(sys, s0, kTwoPi, {});
    const auto [e2, d2] = evolve(sys, s0, kTwoPi, tight);
    (void)e1;
    (void)e2;
    CHECK(std::abs(d1.winding - d2.winding) <= 1e-8);
}

#include <doctest.h>

#include <cmath>

#include "duffing/energy.hpp"
#include "duffing/errors.hpp"
#include "duffing/models.hpp"
#include "duffing/orbits.hpp"
#include "duffing/poincare.hpp"
#include "duffing/twist.hpp"

using namespace duffing;

namespace {

ImpulsiveSystem semilinear_system(double eps = 0.0) {
    ImpulsiveSystem sys;
    sys.g = make_semilinear(1.0, 3.0);
    sys.impulse.t1 = 0.5 * kPi;
    if (eps != 0.0) sys.forcing.cos_coeffs = {eps};
    return sys;
}

// the radial band rho in (0.5, 2) of the linear model as V-levels
AnnulusSpec linear_band() {
    AnnulusSpec an;
    an.a = 0.125;
    an.b = 2.0;
    an.m = 2;
    an.tau_a = kTwoPi;
    an.tau_b = kTwoPi;
    an.kind = AnnulusSpec::Kind::A;
    return an;
}

}  // namespace

TEST_CASE("linear band: the fixed set is the y-axis segment") {
    ImpulsiveSystem sys;
    sys.g = make_linear();
    sys.impulse.t1 = 0.5 * kPi;
    GridSpec grid;
    grid.radial = 3;
    grid.angular = 12;
    const auto records = find_fixed_points(sys, linear_band(), grid);
    REQUIRE(records.size() >= 2);
    for (const auto& r : records) {
        CHECK(std::abs(r.point.x) < 1e-6);  // completeness against x(t) = y0 sin t
        CHECK(r.residual < 1e-9 * std::max(1.0, norm(r.point)));
        CHECK(r.degenerate);  // a whole segment of fixed points
        CHECK(r.v_level > 0.125);
        CHECK(r.v_level < 2.0);
        CHECK(std::abs(std::abs(r.det_jacobian) - 1.0) < 1e-6);
    }
    // distinct roots stay separated by the dedup radius
    for (std::size_t i = 0; i < records.size(); ++i)
        for (std::size_t j = i + 1; j < records.size(); ++j)
            CHECK(norm(records[i].point - records[j].point) >= 1e-6 * std::sqrt(0.125));

    // a second band, same completeness
    AnnulusSpec wide = linear_band();
    wide.a = 0.5;  // rho in (1, 3)
    wide.b = 4.5;
    const auto more = find_fixed_points(sys, wide, grid);
    REQUIRE(more.size() >= 2);
    for (const auto& r : more) CHECK(std::abs(r.point.x) < 1e-6);
}

TEST_CASE("autonomous annulus carries fixed-point families") {
    const auto sys = semilinear_system(0.0);
    const auto annuli = tau_scan(sys.g, 1e2, 1e6, 200, {2});
    REQUIRE(!annuli.empty());
    GridSpec grid;
    grid.radial = 3;
    grid.angular = 8;
    const auto records = find_fixed_points(sys, annuli[0], grid, {}, 0);
    REQUIRE(records.size() >= 2);
    for (const auto& r : records) {
        CHECK(r.v_level > annuli[0].a);
        CHECK(r.v_level < annuli[0].b);
        CHECK(r.min_period_factor == 1);
        // the map preserves the level of its fixed points
        const auto out = poincare_map(sys, r.point);
        CHECK(std::abs(potential(sys.g, out.end.x, out.end.y) - r.v_level) <
              1e-8 * std::max(1.0, r.v_level));
        // multipliers multiply to the signed determinant
        const auto prod = r.multiplier_pair.first * r.multiplier_pair.second;
        CHECK(std::abs(prod.real() - r.det_jacobian) < 1e-6);
        CHECK(std::abs(std::abs(prod) - 1.0) < 1e-6);
    }
}

TEST_CASE("forced annulus carries isolated fixed points") {
    const auto sys = semilinear_system(0.1);
    const auto annuli = tau_scan(sys.g, 1e2, 1e6, 200, {2});
    REQUIRE(!annuli.empty());
    GridSpec grid;
    grid.radial = 4;
    grid.angular = 10;
    const auto records = find_fixed_points(sys, annuli[0], grid, {}, 0);
    REQUIRE(records.size() >= 2);
    for (const auto& r : records) {
        CHECK(!r.degenerate);
        CHECK(r.residual < 1e-9 * std::max(1.0, norm(r.point)));
        CHECK(r.min_period_factor == 1);
    }
}

TEST_CASE("verify_orbit recovers the least period factor") {
    ImpulsiveSystem sys;
    sys.g = make_linear();
    sys.impulse.t1 = 0.5 * kPi;

    OrbitRecord on_axis;
    on_axis.point = {0.0, 1.0};
    CHECK(verify_orbit(sys, on_axis, 3).min_period_factor == 1);

    OrbitRecord off_axis;
    off_axis.point = {1.0, 0.0};  // P maps it to (-1, 0); only P^2 closes
    CHECK(verify_orbit(sys, off_axis, 3).min_period_factor == 2);

    OrbitRecord nowhere;
    nowhere.point = {0.37, 0.41};
    ImpulsiveSystem forced = semilinear_system(0.1);
    CHECK_THROWS_AS(verify_orbit(forced, nowhere, 2), NumericalError);
}

TEST_CASE("displacement degree of simple planar maps") {
    const auto lin = make_linear();
    // translation never vanishes and does not rotate
    PlanarMap translation = [](const Vec2& z) { return Vec2{z.x + 1.0, z.y}; };
    CHECK(displacement_degree_on_curve(translation, lin, 2.0, 16) == 0);
    // z -> 2z points radially outward: one full turn along the curve
    PlanarMap dilation = [](const Vec2& z) { return Vec2{2.0 * z.x, 2.0 * z.y}; };
    CHECK(displacement_degree_on_curve(dilation, lin, 2.0, 16) == 1);
}

TEST_CASE("displacement winding detects fixed points on the linear band boundary") {
    ImpulsiveSystem sys;
    sys.g = make_linear();
    sys.impulse.t1 = 0.5 * kPi;
    // the fixed segment {x = 0} meets both boundary circles
    CHECK_THROWS_AS(displacement_winding(sys, linear_band(), 37), NumericalError);
}

TEST_CASE("displacement winding on a certified annulus") {
    const auto annuli = tau_scan(make_semilinear(1.0, 3.0), 1e2, 1e6, 200, {2});
    REQUIRE(!annuli.empty());

    // autonomous: the fixed-point families cross every energy curve, so a
    // boundary fixed point is the honest outcome
    const auto autonomous = semilinear_system(0.0);
    CHECK_THROWS_AS(displacement_winding(autonomous, annuli[0], 48), NumericalError);

    // forced: the two interior fixed points have canceling indices, so the
    // boundary degrees agree
    const auto forced = semilinear_system(0.1);
    const auto [inner, outer] = displacement_winding(forced, annuli[0], 48);
    CHECK(inner == outer);
}

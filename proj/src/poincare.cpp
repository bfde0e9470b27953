#include "duffing/poincare.hpp"

#include <cmath>

#include "duffing/dopri5.hpp"
#include "duffing/energy.hpp"
#include "duffing/errors.hpp"

namespace duffing {

namespace {

using Aug = Dopri5<6>;  // (x, y, m11, m21, m12, m22)

Aug::State augment(const Vec2& z, const Mat2& m) {
    return {z.x, z.y, m.a11, m.a21, m.a12, m.a22};
}

}  // namespace

Mat2 jacobian(const ImpulsiveSystem& sys, const Vec2& z, const FlowSettings& settings) {
    const GField& g = sys.g;
    const bool autonomous = sys.forcing.is_zero();
    const Forcing& p = sys.forcing;
    Aug::Rhs rhs = [&g, &p, autonomous](double t, const Aug::State& s, Aug::State& ds) {
        const double gp = g.deriv(s[0]);
        ds[0] = s[1];
        ds[1] = -g.eval(s[0]) + (autonomous ? 0.0 : eval_forcing(p, t));
        ds[2] = s[3];
        ds[3] = -gp * s[2];
        ds[4] = s[5];
        ds[5] = -gp * s[4];
    };

    Aug::State s = augment(z, Mat2::identity());
    double t = 0.0;
    const StepControl ctl = settings.control();
    for (double tk : sys.impulse.times_in(0.0, kTwoPi)) {
        if (tk > t + 1e-12) s = Aug::integrate(rhs, t, s, tk, ctl);
        // reversal and its differential diag(1, -1)
        s = {s[0], -s[1], s[2], -s[3], s[4], -s[5]};
        t = std::max(t, tk);
    }
    if (kTwoPi > t) s = Aug::integrate(rhs, t, s, kTwoPi, ctl);
    return {s[2], s[4], s[3], s[5]};
}

PoincareOutcome poincare_map(const ImpulsiveSystem& sys, const Vec2& z,
                             const FlowSettings& settings) {
    PoincareOutcome out;
    out.start = z;
    const auto [end, diag] = evolve(sys, make_lifted(0.0, z.x, z.y), kTwoPi, settings);
    out.end = {end.x, end.y};
    out.winding = diag.winding;
    out.energy_drift = sys.forcing.is_zero() ? diag.energy_drift : 0.0;
    out.jacobian = jacobian(sys, z, settings);
    out.det = det(out.jacobian);
    return out;
}

double area_defect(const ImpulsiveSystem& sys, const Vec2& z, const FlowSettings& settings) {
    return std::abs(std::abs(det(jacobian(sys, z, settings))) - 1.0);
}

}  // namespace duffing

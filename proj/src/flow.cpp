#include "duffing/flow.hpp"

#include <cmath>
#include <string>

#include "duffing/energy.hpp"
#include "duffing/errors.hpp"

namespace duffing {

namespace {

constexpr double kEventTol = 1e-12;

using Stepper = Dopri5<2>;

// Accumulated angle increment across [t0, t1] of one dense step, bisecting until
// consecutive samples differ by less than pi/2.
double unwrap_over(const Stepper::DenseStep& s, double t0, double a0, double t1, double a1,
                   int depth) {
    const double d = wrap_angle(a1 - a0);
    if (std::abs(d) < 0.5 * kPi) return d;
    if (depth <= 0)
        throw NumericalError("angle unwrap: lift ambiguous (trajectory too close to the origin)");
    const double tm = 0.5 * (t0 + t1);
    const auto ym = s.eval(tm);
    if (ym[0] == 0.0 && ym[1] == 0.0)
        throw NumericalError("angle unwrap: trajectory reached the origin");
    const double am = std::atan2(ym[1], ym[0]);
    return unwrap_over(s, t0, a0, tm, am, depth - 1) + unwrap_over(s, tm, am, t1, a1, depth - 1);
}

}  // namespace

LiftedState make_lifted(double t, double x, double y) {
    return {t, x, y, std::hypot(x, y), std::atan2(y, x)};
}

double impulse_angle_jump(double phi_minus, double y) {
    if (y == 0.0) return 0.0;
    double m = std::fmod(-2.0 * phi_minus, kTwoPi);
    if (m > 0.0) m -= kTwoPi;
    return m;  // in (-2*pi, 0]
}

LiftedState apply_impulse(const LiftedState& s) {
    LiftedState out = s;
    out.y = -s.y;  // exact reversal, x untouched
    out.phi = s.phi + impulse_angle_jump(s.phi, s.y);
    return out;
}

LiftedState flow_segment(const ImpulsiveSystem& sys, const LiftedState& s, double t_end,
                         const FlowSettings& settings, EvolveDiagnostics* diag,
                         const TrajectorySink& sink) {
    if (t_end < s.t) throw ConfigError("flow_segment: backward spans are not supported");
    if (t_end == s.t) return s;
    for (double tk : sys.impulse.times_in(s.t, t_end))
        if (tk > s.t + kEventTol && tk < t_end - kEventTol)
            throw ConfigError("flow_segment: impulse time " + std::to_string(tk) +
                              " lies strictly inside the segment");

    const GField& g = sys.g;
    const bool autonomous = sys.forcing.is_zero();
    Stepper::Rhs rhs;
    if (autonomous) {
        rhs = [&g](double, const Stepper::State& y, Stepper::State& dy) {
            dy[0] = y[1];
            dy[1] = -g.eval(y[0]);
        };
    } else {
        const Forcing& p = sys.forcing;
        rhs = [&g, &p](double t, const Stepper::State& y, Stepper::State& dy) {
            dy[0] = y[1];
            dy[1] = -g.eval(y[0]) + eval_forcing(p, t);
        };
    }

    double phi = s.phi;
    double a_prev = std::atan2(s.y, s.x);
    const double v0 = (diag && !std::isnan(diag->energy_ref)) ? diag->energy_ref
                                                              : potential(g, s.x, s.y);
    double drift = diag ? diag->energy_drift : 0.0;

    auto on_step = [&](const Stepper::DenseStep& ds) {
        const double a_new = std::atan2(ds.y1[1], ds.y1[0]);
        phi += unwrap_over(ds, ds.t0, a_prev, ds.t1, a_new, 48);
        // snap the accumulated lift onto the exact atan2 branch
        phi = a_new + kTwoPi * std::round((phi - a_new) / kTwoPi);
        a_prev = a_new;
        if (diag && autonomous) {
            const double v = potential(g, ds.y1[0], ds.y1[1]);
            drift = std::max(drift, std::abs(v - v0));
        }
        if (sink && settings.dense_output) {
            const double v = potential(g, ds.y1[0], ds.y1[1]);
            sink(ds.t1, ds.y1[0], ds.y1[1], std::hypot(ds.y1[0], ds.y1[1]), phi, v, false);
        }
    };

    StepStats stats;
    const auto y_end =
        Stepper::integrate(rhs, s.t, {s.x, s.y}, t_end, settings.control(), &stats, on_step);
    if (sink && !settings.dense_output)
        sink(t_end, y_end[0], y_end[1], std::hypot(y_end[0], y_end[1]), phi,
             potential(g, y_end[0], y_end[1]), false);

    if (diag) {
        diag->accepted_steps += stats.accepted;
        diag->rejected_steps += stats.rejected;
        if (autonomous) diag->energy_drift = drift;
    }

    LiftedState out;
    out.t = t_end;
    out.x = y_end[0];
    out.y = y_end[1];
    out.rho = std::hypot(out.x, out.y);
    out.phi = phi;
    return out;
}

std::pair<LiftedState, EvolveDiagnostics> evolve(const ImpulsiveSystem& sys, const LiftedState& s0,
                                                 double t_end, const FlowSettings& settings,
                                                 const TrajectorySink& sink) {
    if (t_end < s0.t) throw ConfigError("evolve: t_end must not precede the initial time");
    EvolveDiagnostics diag;
    if (sys.forcing.is_zero()) diag.energy_ref = potential(sys.g, s0.x, s0.y);
    LiftedState s = s0;
    const double phi_start = s0.phi;

    if (sink) sink(s.t, s.x, s.y, s.rho, s.phi, potential(sys.g, s.x, s.y), false);

    auto kick = [&](LiftedState& st) {
        const double delta = impulse_angle_jump(st.phi, st.y);
        st = apply_impulse(st);
        ++diag.impulses;
        diag.impulse_deltas.push_back(delta);
        if (delta != 0.0) diag.impulse_jumped = true;
        if (sink) sink(st.t, st.x, st.y, st.rho, st.phi, potential(sys.g, st.x, st.y), true);
    };

    for (double tk : sys.impulse.times_in(s0.t, t_end)) {
        if (tk <= s.t + kEventTol) {
            kick(s);
            continue;
        }
        s = flow_segment(sys, s, tk, settings, &diag, sink);
        kick(s);
    }
    if (t_end > s.t) s = flow_segment(sys, s, t_end, settings, &diag, sink);

    diag.winding = s.phi - phi_start;
    return {s, diag};
}

}  // namespace duffing

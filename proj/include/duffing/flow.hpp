// Integration of the planar system between impulses, the velocity-reversal impulse
// map with its lifted-angle jump rule, and full evolutions over time spans.
#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "duffing/dopri5.hpp"
#include "duffing/models.hpp"
#include "duffing/types.hpp"

namespace duffing {

// Planar state with a continuous lifted polar angle. Between impulses phi is the
// continuous unwrapping of atan2(y, x); at an impulse it jumps per the rule in
// apply_impulse.
struct LiftedState {
    double t{0.0};
    double x{0.0};
    double y{0.0};
    double rho{0.0};
    double phi{0.0};
};

LiftedState make_lifted(double t, double x, double y);

struct FlowSettings {
    double rel_tol{1e-10};
    double abs_tol{1e-12};
    double max_step{1.0};
    bool dense_output{false};

    StepControl control() const { return {rel_tol, abs_tol, max_step}; }

    FlowSettings tightened(double factor) const {
        FlowSettings s = *this;
        s.rel_tol /= factor;
        s.abs_tol /= factor;
        return s;
    }
};

struct EvolveDiagnostics {
    double winding{0.0};       // phi(end) - phi(start)
    double energy_drift{0.0};  // max |V - V(start)| over accepted steps (autonomous case only)
    double energy_ref{std::numeric_limits<double>::quiet_NaN()};  // reference V for the drift
    long accepted_steps{0};
    long rejected_steps{0};
    int impulses{0};
    std::vector<double> impulse_deltas;  // angle jump at each impulse
    bool impulse_jumped{false};          // any nonzero jump
};

// Row sink for trajectory dumps: (t, x, y, rho, phi, V, impulse_row).
using TrajectorySink = std::function<void(double, double, double, double, double, double, bool)>;

// Velocity reversal (x, y) -> (x, -y); rho unchanged; angle jump
// delta = -2*phi (mod 2*pi) chosen in (-2*pi, 0], except delta = 0 when y == 0.
double impulse_angle_jump(double phi_minus, double y);
LiftedState apply_impulse(const LiftedState& s);

// Advance without any impulse in the open interval (s.t, t_end); the lifted angle
// is unwrapped from dense output with successive samples closer than pi/2.
LiftedState flow_segment(const ImpulsiveSystem& sys, const LiftedState& s, double t_end,
                         const FlowSettings& settings, EvolveDiagnostics* diag = nullptr,
                         const TrajectorySink& sink = nullptr);

// Split [s0.t, t_end) at scheduled impulse times, alternate flow and impulse.
// An impulse within 1e-12 of the span start applies to the initial state;
// one at t_end belongs to the next window.
std::pair<LiftedState, EvolveDiagnostics> evolve(const ImpulsiveSystem& sys, const LiftedState& s0,
                                                 double t_end, const FlowSettings& settings,
                                                 const TrajectorySink& sink = nullptr);

}  // namespace duffing

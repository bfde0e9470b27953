// Restoring-force families, periodic forcing and the impulse schedule.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "duffing/types.hpp"

namespace duffing {

// Restoring force g with derivative and closed-form antiderivative G(x) = int_0^x g,
// together with the certified constants: |g'| <= K everywhere, and
// g(x)/x >= A0 for |x| >= M0.
struct GField {
    enum class Kind { linear, semilinear, user };

    std::function<double(double)> eval;       // g(x)
    std::function<double(double)> deriv;      // g'(x)
    std::function<double(double)> antideriv;  // G(x), G(0) = 0
    double K{0.0};
    double A0{0.0};
    double M0{0.0};
    Kind kind{Kind::user};
};

// Dense-grid certification of the bounds above plus a finite-difference check of
// antideriv against eval. Throws ConfigError on violation.
void certify_field(const GField& g, int grid_points = 4001);

GField make_linear();

// Odd, C1, piecewise-linear force with slope lambda_lo^2 on even radial bands and
// lambda_hi^2 on odd ones; band edges grow geometrically from 1 by `growth`, corners
// blended over a half-width of `smoothing * edge` by a linear ramp of g' (so g is
// quadratic and G cubic on the blend, both closed form).
GField make_semilinear(double lambda_lo, double lambda_hi, double growth = 4.0,
                       double smoothing = 0.05);

// Trigonometric polynomial p(t) = constant + sum_n cos_coeffs[n-1] cos(nt) + sin_coeffs[n-1] sin(nt).
struct Forcing {
    double constant{0.0};
    std::vector<double> cos_coeffs;
    std::vector<double> sin_coeffs;

    bool is_zero() const { return constant == 0.0 && cos_coeffs.empty() && sin_coeffs.empty(); }

    // |c0| + sum |a_n| + |b_n|
    double bound() const;
};

double eval_forcing(const Forcing& f, double t);

// One velocity-reversal impulse per period at t1 + 2*pi*j.
struct ImpulseSchedule {
    double t1{0.0};
    bool enabled{true};

    // Impulse times in [t_begin, t_end), ascending.
    std::vector<double> times_in(double t_begin, double t_end) const;
};

struct ImpulsiveSystem {
    GField g;
    Forcing forcing;
    ImpulseSchedule impulse;
};

}  // namespace duffing

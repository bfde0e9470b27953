#include "duffing/energy.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include "duffing/dopri5.hpp"
#include "duffing/errors.hpp"

namespace duffing {

namespace {

// Solve f(r) = 0 for r in (0, hi] by bisection, f increasing through the root,
// then Newton polish when a derivative is supplied.
template <typename F, typename DF>
double solve_radial(F&& f, DF&& df, double lo, double hi, int bisect_iters = 80) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo > 0.0 || fhi < 0.0) throw BracketError("root not bracketed");
    for (int i = 0; i < bisect_iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm <= 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    double r = 0.5 * (lo + hi);
    for (int i = 0; i < 3; ++i) {
        const double d = df(r);
        if (d == 0.0) break;
        const double step = f(r) / d;
        const double rn = r - step;
        if (rn >= lo && rn <= hi) r = rn;
    }
    return r;
}

// Expand hi from seed by doubling until f(hi) >= 0.
template <typename F>
double expand_bracket(F&& f, double seed, double cap) {
    double hi = seed;
    while (f(hi) < 0.0) {
        hi *= 2.0;
        if (hi > cap) throw BracketError("level set appears unbounded in this direction");
    }
    return hi;
}

// 7-15 Gauss-Kronrod pair on [-1, 1] (QUADPACK dqk15 nodes).
constexpr double kXgk[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                            0.741531185599394, 0.586087235467691, 0.405845151377397,
                            0.207784955007898, 0.0};
constexpr double kWgk[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                            0.140653259715525, 0.169004726639267, 0.190350578064785,
                            0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                           0.417959183673469};

template <typename F>
void gk15(F&& f, double a, double b, double& value, double& error) {
    const double c = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - hw * kXgk[i]);
        fv[14 - i] = f(c + hw * kXgk[i]);
    }
    fv[7] = f(c);
    double resk = kWgk[7] * fv[7];
    double resg = kWg[3] * fv[7];
    for (int i = 0; i < 7; ++i) resk += kWgk[i] * (fv[i] + fv[14 - i]);
    for (int i = 0; i < 3; ++i) resg += kWg[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
    value = resk * hw;
    error = std::abs((resk - resg) * hw);
}

// Adaptive GK15 on [a, b], refining the worst panel first.
template <typename F>
double adaptive_quadrature(F&& f, double a, double b, double rel_tol, int max_panels = 4000) {
    struct Panel {
        double a, b, value, error;
        bool operator<(const Panel& o) const { return error < o.error; }
    };
    std::priority_queue<Panel> panels;
    Panel p{a, b, 0.0, 0.0};
    gk15(f, a, b, p.value, p.error);
    panels.push(p);
    double total = p.value, total_err = p.error;
    int n = 1;
    while (total_err > rel_tol * std::max(std::abs(total), 1e-300)) {
        if (n >= max_panels) throw NumericalError("adaptive quadrature did not converge");
        Panel worst = panels.top();
        panels.pop();
        total -= worst.value;
        total_err -= worst.error;
        const double mid = 0.5 * (worst.a + worst.b);
        Panel left{worst.a, mid, 0.0, 0.0}, right{mid, worst.b, 0.0, 0.0};
        gk15(f, left.a, left.b, left.value, left.error);
        gk15(f, right.a, right.b, right.value, right.error);
        total += left.value + right.value;
        total_err += left.error + right.error;
        panels.push(left);
        panels.push(right);
        ++n;
    }
    return total;
}

// Inverse of G along one side: u >= 0 with G(sign*u) = target, target in [0, c].
double invert_antideriv(const GField& g, double sign, double target, double u_max) {
    if (target <= 0.0) return 0.0;
    auto f = [&](double u) { return g.antideriv(sign * u) - target; };
    auto df = [&](double u) { return sign * g.eval(sign * u); };
    return solve_radial(f, df, 0.0, u_max, 70);
}

}  // namespace

EnergyCurve energy_curve(const GField& g, double c, double c0_floor) {
    EnergyCurve ec;
    ec.c = c;
    ec.c0_floor = c0_floor;
    const auto [h, h1] = intercepts(g, c);
    ec.h = h;
    ec.h1 = h1;
    ec.tau = tau(g, c);
    return ec;
}

std::pair<double, double> intercepts(const GField& g, double c) {
    if (!(c > 0.0)) throw ConfigError("intercepts: level must be positive");
    const double res_tol = 1e-12 * std::max(1.0, c);

    auto solve_side = [&](double sign) {
        auto f = [&](double r) { return g.antideriv(sign * r) - c; };
        auto df = [&](double r) { return sign * g.eval(sign * r); };
        const double hi = expand_bracket(f, 1.0, 1e12);
        double r = solve_radial(f, df, 0.0, hi);
        if (std::abs(f(r)) > res_tol)
            throw NumericalError("intercepts: residual above tolerance at c=" + std::to_string(c));
        return r;
    };
    return {solve_side(+1.0), solve_side(-1.0)};
}

double tau(const GField& g, double c, double rel_tol) {
    const auto [h, h1] = intercepts(g, c);
    const double sqrt_c = std::sqrt(c);

    // tau = sqrt(2) * sum over halves of  int_0^{pi/2} 2 sqrt(c) sin(psi) / |g(u(psi))| dpsi
    // where G(sign*u) = c sin^2(psi). The integrand is bounded: near psi=0 it tends to
    // sqrt(2/g'(0)); near psi=pi/2 to 2 sqrt(c)/|g at the turning point|.
    auto half = [&](double sign, double u_turn) {
        auto integrand = [&](double psi) {
            const double sp = std::sin(psi);
            const double target = std::min(c * sp * sp, c);  // roundoff clamp
            const double u = invert_antideriv(g, sign, target, u_turn);
            const double gv = std::abs(g.eval(sign * u));
            if (gv == 0.0) {
                // u = 0 limit (open quadrature nodes make this unreachable in practice)
                return std::sqrt(2.0 / std::max(g.deriv(0.0), 1e-300));
            }
            return 2.0 * sqrt_c * sp / gv;
        };
        return adaptive_quadrature(integrand, 0.0, 0.5 * kPi, rel_tol * 0.5);
    };

    return std::sqrt(2.0) * (half(+1.0, h) + half(-1.0, h1));
}

double tau_flow_oracle(const GField& g, double c) {
    const auto [h, h1] = intercepts(g, c);
    (void)h1;
    using Stepper = Dopri5<2>;
    Stepper::Rhs rhs = [&g](double, const Stepper::State& y, Stepper::State& dy) {
        dy[0] = y[1];
        dy[1] = -g.eval(y[0]);
    };
    StepControl ctl;
    ctl.rel_tol = 1e-12;
    ctl.abs_tol = 1e-12 * std::max(1.0, h);
    ctl.max_step = 0.1;

    const double t_cap = 10.0 * kTwoPi / std::sqrt(g.A0);
    double found = -1.0;
    auto on_step = [&](const Stepper::DenseStep& s) {
        if (found >= 0.0) return;
        // w crossing from + to - with x > 0
        if (!(s.y0[1] > 0.0 && s.y1[1] <= 0.0)) return;
        double lo = s.t0, hi = s.t1;
        for (int i = 0; i < 80; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (s.eval(mid)[1] > 0.0)
                lo = mid;
            else
                hi = mid;
        }
        const double t_ev = 0.5 * (lo + hi);
        if (s.eval(t_ev)[0] > 0.0 && t_ev > 1e-9) found = t_ev;
    };
    Stepper::integrate(rhs, 0.0, {h, 0.0}, t_cap, ctl, nullptr, on_step);
    if (found < 0.0)
        throw NumericalError("tau_flow_oracle: no return to the positive x-axis within the cap");
    return found;
}

double curve_radius(const GField& g, double c, double theta) {
    const double ct = std::cos(theta), st = std::sin(theta);
    auto f = [&](double r) { return potential(g, r * ct, r * st) - c; };
    auto df = [&](double r) { return r * st * st + g.eval(r * ct) * ct; };
    const double hi = expand_bracket(f, 1.0, 1e12);
    return solve_radial(f, df, 0.0, hi);
}

std::vector<Vec2> sample_curve(const GField& g, double c, int n) {
    if (n < 4) throw ConfigError("sample_curve: need at least 4 points");
    const double res_tol = 1e-9 * std::max(1.0, c);
    std::vector<Vec2> pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double theta = kTwoPi * i / n;
        double r;
        try {
            r = curve_radius(g, c, theta);
        } catch (const BracketError&) {
            throw BracketError("sample_curve: no radial crossing at angle " + std::to_string(theta));
        }
        const Vec2 p{r * std::cos(theta), r * std::sin(theta)};
        if (std::abs(potential(g, p.x, p.y) - c) > res_tol)
            throw NumericalError("sample_curve: residual above tolerance at angle " +
                                 std::to_string(theta));
        pts.push_back(p);
    }
    return pts;
}

double min_level(const GField& g, double floor, int n_angles, double cap) {
    if (!(floor > 0.0)) throw ConfigError("min_level: floor must be positive");
    for (double c = floor; c <= cap; c *= 4.0) {
        bool ok = true;
        for (int i = 0; i < n_angles && ok; ++i) {
            const double theta = kTwoPi * i / n_angles;
            const double ct = std::cos(theta), st = std::sin(theta);
            double r;
            try {
                auto f = [&](double rr) { return potential(g, rr * ct, rr * st) - c; };
                const double hi = expand_bracket(f, 1.0, 1e12);
                auto df = [&](double rr) { return rr * st * st + g.eval(rr * ct) * ct; };
                r = solve_radial(f, df, 0.0, hi);
            } catch (const BracketError&) {
                ok = false;
                break;
            }
            // radial uniqueness: V - c changes sign exactly once along the ray
            int sign_changes = 0;
            double prev = -c;  // V(0,0) - c
            for (int k = 1; k <= 64; ++k) {
                const double rr = 2.0 * r * k / 64.0;
                const double v = potential(g, rr * ct, rr * st) - c;
                if ((prev < 0.0 && v >= 0.0) || (prev > 0.0 && v <= 0.0)) ++sign_changes;
                prev = v;
            }
            if (sign_changes != 1) ok = false;
        }
        if (ok) return c;
    }
    throw BracketError("min_level: no star-shaped level found below the cap");
}

}  // namespace duffing

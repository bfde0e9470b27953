#include "duffing/models.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "duffing/errors.hpp"

namespace duffing {

namespace {

// Piecewise representation valid for x >= 0; extended oddly. On each piece
// g is a cubic in t = x - x0 and G its quartic antiderivative, so both stay
// closed form. Corners are blended by a quadratic-spline transition of g'
// (two quadratic arcs, C1 in g', hence g is C2).
struct PiecewiseField {
    struct Piece {
        double x0, g0, G0, c1, c2, c3;
    };
    std::vector<Piece> pieces;
    double x_max{0.0};

    const Piece& locate(double a) const {
        auto it = std::upper_bound(pieces.begin(), pieces.end(), a,
                                   [](double v, const Piece& p) { return v < p.x0; });
        return *std::prev(it);
    }

    double g_pos(double a) const {
        const Piece& p = locate(a);
        const double t = a - p.x0;
        return p.g0 + t * (p.c1 + t * (p.c2 + t * p.c3));
    }
    double gp_pos(double a) const {
        const Piece& p = locate(a);
        const double t = a - p.x0;
        return p.c1 + t * (2.0 * p.c2 + 3.0 * t * p.c3);
    }
    double G_pos(double a) const {
        const Piece& p = locate(a);
        const double t = a - p.x0;
        return p.G0 + t * (p.g0 + t * (p.c1 / 2.0 + t * (p.c2 / 3.0 + t * p.c3 / 4.0)));
    }
};

std::shared_ptr<PiecewiseField> build_bands(double lo2, double hi2, double growth, double s,
                                            double r0, double x_max) {
    auto f = std::make_shared<PiecewiseField>();
    f->x_max = x_max;
    double x = 0.0, g = 0.0, G = 0.0;
    double edge = r0;
    int band = 0;
    auto slope_of = [&](int b) { return (b % 2 == 0) ? lo2 : hi2; };

    auto push_piece = [&](double x_to, double c1, double c2, double c3) {
        f->pieces.push_back({x, g, G, c1, c2, c3});
        const double t = x_to - x;
        G += t * (g + t * (c1 / 2.0 + t * (c2 / 3.0 + t * c3 / 4.0)));
        g += t * (c1 + t * (c2 + t * c3));
        x = x_to;
    };

    while (x < x_max) {
        const double w = s * edge;
        const double s0 = slope_of(band), s1 = slope_of(band + 1);
        push_piece(edge - w, s0, 0.0, 0.0);
        // g' ramps from s0 to s1 over [edge-w, edge+w] via two quadratic arcs
        push_piece(edge, s0, 0.0, (s1 - s0) / (6.0 * w * w));
        push_piece(edge + w, 0.5 * (s0 + s1), (s1 - s0) / (2.0 * w), -(s1 - s0) / (6.0 * w * w));
        ++band;
        edge *= growth;
    }
    push_piece(x_max * 4.0, slope_of(band), 0.0, 0.0);
    return f;
}

}  // namespace

GField make_linear() {
    GField g;
    g.eval = [](double x) { return x; };
    g.deriv = [](double) { return 1.0; };
    g.antideriv = [](double x) { return 0.5 * x * x; };
    g.K = 1.0;
    g.A0 = 1.0;
    g.M0 = 0.0;
    g.kind = GField::Kind::linear;
    certify_field(g);
    return g;
}

GField make_semilinear(double lambda_lo, double lambda_hi, double growth, double smoothing) {
    if (!(lambda_lo > 0.0) || !(lambda_hi > lambda_lo))
        throw ConfigError("make_semilinear: need 0 < lambda_lo < lambda_hi");
    if (!(growth > 1.0)) throw ConfigError("make_semilinear: growth factor must exceed 1");
    const double s_max = (growth - 1.0) / (growth + 1.0);
    if (!(smoothing > 0.0) || smoothing >= s_max)
        throw ConfigError("make_semilinear: smoothing half-width merges adjacent corners");

    const double lo2 = lambda_lo * lambda_lo;
    const double hi2 = lambda_hi * lambda_hi;
    const double r0 = 1.0;
    auto pw = build_bands(lo2, hi2, growth, smoothing, r0, 1e12);

    GField g;
    g.eval = [pw](double x) { return x < 0.0 ? -pw->g_pos(-x) : pw->g_pos(x); };
    g.deriv = [pw](double x) { return pw->gp_pos(std::abs(x)); };
    g.antideriv = [pw](double x) { return pw->G_pos(std::abs(x)); };
    g.K = hi2;
    g.A0 = lo2;
    g.M0 = r0;
    g.kind = GField::Kind::semilinear;
    certify_field(g);
    return g;
}

void certify_field(const GField& g, int grid_points) {
    if (!g.eval || !g.deriv || !g.antideriv) throw ConfigError("GField: missing callables");
    if (!(g.K > 0.0) || !(g.A0 > 0.0) || g.M0 < 0.0)
        throw ConfigError("GField: constants K, A0 must be positive and M0 >= 0");
    if (g.antideriv(0.0) != 0.0) throw ConfigError("GField: antideriv(0) != 0");

    const double X = 10.0 * std::max(g.M0, 1.0);
    const double tol = 1.0 + 1e-12;
    for (int i = 0; i < grid_points; ++i) {
        const double x = -X + 2.0 * X * i / (grid_points - 1);
        if (std::abs(g.deriv(x)) > g.K * tol)
            throw ConfigError("GField: |g'| exceeds K at x=" + std::to_string(x));
        if (std::abs(x) >= std::max(g.M0, 1e-9)) {
            if (g.eval(x) / x < g.A0 / tol)
                throw ConfigError("GField: g(x)/x below A0 at x=" + std::to_string(x));
        }
        // finite-difference consistency of G with g
        const double h = 1e-5 * std::max(1.0, std::abs(x));
        const double fd = (g.antideriv(x + h) - g.antideriv(x - h)) / (2.0 * h);
        const double scale = std::max(1.0, std::abs(g.eval(x)));
        if (std::abs(fd - g.eval(x)) > 1e-6 * scale)
            throw ConfigError("GField: antideriv inconsistent with eval at x=" + std::to_string(x));
    }
}

double Forcing::bound() const {
    double b = std::abs(constant);
    for (double a : cos_coeffs) b += std::abs(a);
    for (double a : sin_coeffs) b += std::abs(a);
    return b;
}

double eval_forcing(const Forcing& f, double t) {
    // Argument reduction keeps periodicity error at the ulp level for any |t|.
    const double tr = std::remainder(t, kTwoPi);
    double p = f.constant;
    for (std::size_t n = 0; n < f.cos_coeffs.size(); ++n)
        p += f.cos_coeffs[n] * std::cos(static_cast<double>(n + 1) * tr);
    for (std::size_t n = 0; n < f.sin_coeffs.size(); ++n)
        p += f.sin_coeffs[n] * std::sin(static_cast<double>(n + 1) * tr);
    return p;
}

std::vector<double> ImpulseSchedule::times_in(double t_begin, double t_end) const {
    std::vector<double> out;
    if (!enabled) return out;
    const double event_tol = 1e-12;
    long k = static_cast<long>(std::ceil((t_begin - t1) / kTwoPi - event_tol));
    for (;; ++k) {
        const double tk = t1 + kTwoPi * static_cast<double>(k);
        if (tk >= t_end - event_tol) break;
        if (tk >= t_begin - event_tol) out.push_back(tk);
    }
    return out;
}

}  // namespace duffing

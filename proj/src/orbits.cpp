#include "duffing/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "duffing/energy.hpp"
#include "duffing/errors.hpp"
#include "duffing/poincare.hpp"

namespace duffing {

namespace {

Vec2 map_once(const ImpulsiveSystem& sys, const Vec2& z, const FlowSettings& settings) {
    const auto [end, diag] = evolve(sys, make_lifted(0.0, z.x, z.y), kTwoPi, settings);
    (void)diag;
    return {end.x, end.y};
}

// Newton step on J s = -f. Fixed points of the autonomous map come in curve
// families, so J = P'(z) - I turns singular along them: when the smallest
// singular value is below rank_tol times the largest, step with the rank-1
// pseudo-inverse instead (moves transverse to the family, never along it).
void newton_step(const Mat2& J, const Vec2& f, Vec2& s) {
    const double fro2 = J.a11 * J.a11 + J.a12 * J.a12 + J.a21 * J.a21 + J.a22 * J.a22;
    const double d = det(J);
    const double disc = std::sqrt(std::max(fro2 * fro2 - 4.0 * d * d, 0.0));
    const double s1 = std::sqrt(0.5 * (fro2 + disc));            // largest singular value
    const double s2 = (s1 > 0.0) ? std::abs(d) / s1 : 0.0;       // smallest
    constexpr double rank_tol = 1e-4;

    if (s2 > rank_tol * s1) {
        s = {(-f.x * J.a22 + f.y * J.a12) / d, (-f.y * J.a11 + f.x * J.a21) / d};
        return;
    }
    if (s1 == 0.0) {
        s = {0.0, 0.0};
        return;
    }
    // right singular vector of s1: dominant eigenvector of J^T J
    const double a = J.a11 * J.a11 + J.a21 * J.a21;
    const double b = J.a11 * J.a12 + J.a21 * J.a22;
    const double c = J.a12 * J.a12 + J.a22 * J.a22;
    Vec2 v = (std::abs(b) > 1e-300) ? Vec2{b, s1 * s1 - a} : (a >= c ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0});
    const double vn = norm(v);
    v = v * (1.0 / vn);
    const Vec2 u = (J * v) * (1.0 / s1);
    const double proj = u.x * f.x + u.y * f.y;
    s = v * (-proj / s1);
}

bool inside_annulus(const ImpulsiveSystem& sys, const AnnulusSpec& an, const Vec2& z) {
    if (sys.forcing.is_zero()) {
        const double v = potential(sys.g, z.x, z.y);
        return v > an.a && v < an.b;
    }
    const double theta = std::atan2(z.y, z.x);
    const double rho = norm(z);
    return rho > curve_radius(sys.g, an.a, theta) && rho < curve_radius(sys.g, an.b, theta);
}

}  // namespace

std::vector<OrbitRecord> find_fixed_points(const ImpulsiveSystem& sys, const AnnulusSpec& annulus,
                                           const GridSpec& grid, const FlowSettings& settings,
                                           int annulus_id) {
    if (!(annulus.a > 0.0 && annulus.b > annulus.a))
        throw ConfigError("find_fixed_points: malformed annulus");
    if (grid.radial < 1 || grid.angular < 1)
        throw ConfigError("find_fixed_points: empty seed grid");

    std::mt19937_64 rng(grid.seed);
    std::uniform_real_distribution<double> jitter(0.0, 1.0);
    const double la = std::log(annulus.a), lb = std::log(annulus.b);
    // coarse search, tight polish, independent verification at 10x tighter again
    const FlowSettings polish = settings.tightened(100.0);
    const FlowSettings verify = settings.tightened(1000.0);
    const double dedup_radius = 1e-6 * std::sqrt(annulus.a);

    std::vector<OrbitRecord> records;
    for (int j = 0; j < grid.radial; ++j) {
        const double c = std::exp(la + (lb - la) * (j + 0.5) / grid.radial);
        for (int i = 0; i < grid.angular; ++i) {
            const double theta = kTwoPi * (i + 0.5 * jitter(rng)) / grid.angular;
            Vec2 z;
            try {
                const double r = curve_radius(sys.g, c, theta);
                z = {r * std::cos(theta), r * std::sin(theta)};
            } catch (const Error&) {
                continue;
            }

            // Newton on F(z) = P(z) - z: coarse phase at the caller's tolerance,
            // then a short polish against the tight map
            bool converged = false;
            bool singular = false;
            Mat2 M;
            const double escape = 4.0 * std::sqrt(2.0 * annulus.b);
            auto iterate = [&](const FlowSettings& st, double res_tol, int iters) {
                for (int it = 0; it < iters; ++it) {
                    Vec2 pz;
                    try {
                        pz = map_once(sys, z, st);
                        M = jacobian(sys, z, st);
                    } catch (const Error&) {
                        return false;
                    }
                    const Vec2 f = pz - z;
                    const Mat2 J{M.a11 - 1.0, M.a12, M.a21, M.a22 - 1.0};
                    if (norm(f) < res_tol * std::max(1.0, norm(z))) {
                        const double jn = frobenius_norm(J);
                        singular = std::abs(det(J)) <= 1e-6 * std::max(1.0, jn * jn);
                        return true;
                    }
                    Vec2 s;
                    newton_step(J, f, s);
                    const double step_cap = 0.25 * std::max(1.0, norm(z));
                    const double sn = norm(s);
                    if (sn > step_cap) s = s * (step_cap / sn);
                    z = z + s;
                    if (!std::isfinite(z.x) || !std::isfinite(z.y) || norm(z) > escape)
                        return false;
                }
                return false;
            };
            converged = iterate(settings, 1e-8, 40) && iterate(polish, 5e-10, 8);
            if (!converged) continue;
            if (!inside_annulus(sys, annulus, z)) continue;

            // independent re-verification at 10x tighter tolerance
            const Vec2 pz_tight = map_once(sys, z, verify);
            const double residual = norm(pz_tight - z);
            if (residual >= 1e-9 * std::max(1.0, norm(z))) continue;

            bool duplicate = false;
            for (const auto& r : records)
                if (norm(r.point - z) < dedup_radius) {
                    duplicate = true;
                    break;
                }
            if (duplicate) continue;

            OrbitRecord rec;
            rec.point = z;
            rec.residual = residual;
            rec.annulus_id = annulus_id;
            rec.multiplier_pair = eigenvalues(M);
            rec.min_period_factor = 1;
            rec.degenerate = singular;
            rec.det_jacobian = det(M);
            rec.v_level = potential(sys.g, z.x, z.y);
            records.push_back(rec);
        }
    }
    std::sort(records.begin(), records.end(),
              [](const OrbitRecord& a, const OrbitRecord& b) { return a.residual < b.residual; });
    return records;
}

OrbitRecord verify_orbit(const ImpulsiveSystem& sys, const OrbitRecord& rec, int n_max,
                         const FlowSettings& settings) {
    if (n_max < 1) throw ConfigError("verify_orbit: n_max must be positive");
    const FlowSettings tight = settings.tightened(100.0);
    OrbitRecord out = rec;
    const double scale = std::max(1.0, norm(rec.point));

    for (int n = 1; n <= n_max; ++n) {
        const auto [end, diag] =
            evolve(sys, make_lifted(0.0, rec.point.x, rec.point.y), n * kTwoPi, tight);
        (void)diag;
        const double res = norm(Vec2{end.x, end.y} - rec.point);
        if (res < 1e-8 * scale) {
            out.min_period_factor = n;
            out.residual = res;
            const Mat2 M = jacobian(sys, rec.point, tight);
            out.multiplier_pair = eigenvalues(M);
            out.det_jacobian = det(M);
            out.v_level = potential(sys.g, rec.point.x, rec.point.y);
            return out;
        }
    }
    throw NumericalError("verify_orbit: no period factor up to " + std::to_string(n_max) +
                         " closes the orbit");
}

int displacement_degree_on_curve(const PlanarMap& map, const GField& g, double c, int n_angles,
                                 double vanish_tol) {
    if (n_angles < 8) throw ConfigError("displacement_degree_on_curve: need at least 8 angles");

    auto displacement_angle = [&](double theta, double& magnitude) {
        const double r = curve_radius(g, c, theta);
        const Vec2 z{r * std::cos(theta), r * std::sin(theta)};
        const Vec2 d = map(z) - z;
        magnitude = norm(d);
        if (magnitude < vanish_tol)
            throw NumericalError(
                "displacement_winding: displacement vanishes on the boundary (fixed point "
                "on the curve) near angle " +
                std::to_string(theta));
        return std::atan2(d.y, d.x);
    };

    std::function<double(double, double, double, double, int)> accumulate =
        [&](double t0, double a0, double t1, double a1, int depth) -> double {
        const double d = wrap_angle(a1 - a0);
        if (std::abs(d) < 0.5 * kPi) return d;
        if (depth <= 0)
            throw NumericalError(
                "displacement_winding: displacement direction jumps at the refinement limit "
                "(degenerate boundary field)");
        double mag;
        const double tm = 0.5 * (t0 + t1);
        const double am = displacement_angle(tm, mag);
        return accumulate(t0, a0, tm, am, depth - 1) + accumulate(tm, am, t1, a1, depth - 1);
    };

    double total = 0.0;
    double mag;
    double a_prev = displacement_angle(0.0, mag);
    const double a_first = a_prev;
    for (int i = 1; i <= n_angles; ++i) {
        const double t0 = kTwoPi * (i - 1) / n_angles;
        const double t1 = kTwoPi * i / n_angles;
        const double a1 = (i == n_angles) ? a_first : displacement_angle(t1, mag);
        total += accumulate(t0, a_prev, t1, a1, 48);
        a_prev = a1;
    }
    const double deg = total / kTwoPi;
    const long rounded = std::lround(deg);
    if (std::abs(deg - rounded) > 1e-6)
        throw NumericalError("displacement_winding: accumulated angle is not a multiple of 2*pi");
    return static_cast<int>(rounded);
}

std::pair<int, int> displacement_winding(const ImpulsiveSystem& sys, const AnnulusSpec& annulus,
                                         int n_angles, const FlowSettings& settings) {
    PlanarMap pmap = [&](const Vec2& z) { return map_once(sys, z, settings); };
    auto degree = [&](double c) {
        const double noise = 1e3 * settings.rel_tol * std::max(1.0, std::sqrt(2.0 * c));
        return displacement_degree_on_curve(pmap, sys.g, c, n_angles,
                                            std::max(1e-12, noise));
    };
    return {degree(annulus.a), degree(annulus.b)};
}

}  // namespace duffing

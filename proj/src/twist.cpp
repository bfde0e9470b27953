#include "duffing/twist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "duffing/energy.hpp"
#include "duffing/errors.hpp"

namespace duffing {

std::vector<CurveWinding> winding_on_curve(const ImpulsiveSystem& sys, double c, int n,
                                           const FlowSettings& settings) {
    if (n < 8) throw ConfigError("winding_on_curve: need at least 8 starts");
    const auto pts = sample_curve(sys.g, c, n);
    std::vector<CurveWinding> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double theta = kTwoPi * i / n;
        LiftedState s0{0.0, pts[i].x, pts[i].y, std::hypot(pts[i].x, pts[i].y), theta};
        const auto [end, diag] = evolve(sys, s0, kTwoPi, settings);
        (void)end;
        out.push_back({theta, diag.winding, diag.impulse_jumped});
    }
    return out;
}

std::vector<AnnulusSpec> tau_scan(const GField& g, double c_lo, double c_hi, int points,
                                  const std::vector<int>& m_candidates, double min_margin) {
    if (!(c_lo > 0.0) || !(c_hi > c_lo)) throw ConfigError("tau_scan: need 0 < c_lo < c_hi");
    if (points < 2) throw ConfigError("tau_scan: need at least 2 grid points");

    std::vector<double> cs(points), taus(points);
    const double la = std::log(c_lo), lb = std::log(c_hi);
    for (int i = 0; i < points; ++i) {
        cs[i] = std::exp(la + (lb - la) * i / (points - 1));
        taus[i] = tau(g, cs[i]);
    }

    std::vector<AnnulusSpec> annuli;
    for (int m : m_candidates) {
        if (m <= 0) throw ConfigError("tau_scan: m candidates must be positive");
        const double target = kTwoPi / m;

        // per-run extreme levels alternating below/above the target band
        struct Extreme {
            double c, tau;
            bool below;
        };
        std::vector<Extreme> ext;
        for (int i = 0; i < points; ++i) {
            bool below;
            if (taus[i] < target - min_margin)
                below = true;
            else if (taus[i] > target + min_margin)
                below = false;
            else
                continue;
            if (ext.empty() || ext.back().below != below) {
                ext.push_back({cs[i], taus[i], below});
            } else if ((below && taus[i] < ext.back().tau) ||
                       (!below && taus[i] > ext.back().tau)) {
                ext.back() = {cs[i], taus[i], below};
            }
        }

        for (std::size_t k = 0; k + 1 < ext.size(); ++k) {
            AnnulusSpec an;
            an.a = ext[k].c;
            an.b = ext[k + 1].c;
            an.tau_a = ext[k].tau;
            an.tau_b = ext[k + 1].tau;
            an.m = m;
            an.kind = ext[k].below ? AnnulusSpec::Kind::A : AnnulusSpec::Kind::B;
            // shaved so the strict margin inequalities survive independent re-evaluation
            an.alpha =
                0.999999 * std::min(std::abs(target - an.tau_a), std::abs(an.tau_b - target));
            annuli.push_back(an);
        }
    }
    return annuli;
}

TwistReport twist_check(const ImpulsiveSystem& sys, const AnnulusSpec& annulus,
                        int boundary_samples, const FlowSettings& settings) {
    if (!(annulus.a < annulus.b)) throw ConfigError("twist_check: annulus requires a < b");
    if (annulus.m <= 0) throw ConfigError("twist_check: annulus carries no m");
    const double offset = 2.0 * annulus.m * kPi;
    const double target = kTwoPi / annulus.m;

    TwistReport rep;
    rep.boundary_samples = boundary_samples;
    rep.pass = true;

    auto check_curve = [&](double c, double tau_c, bool fast) {
        // the claimed kind fixes both the window and the required sign;
        // tau is re-evaluated only to flag a stale or misclassified annulus
        const double tau_now = tau(sys.g, c);
        if ((tau_now < target) != fast)
            rep.note += "tau at c=" + std::to_string(c) + " is on the wrong side of 2*pi/m; ";
        if (std::abs(tau_now - tau_c) > 1e-6 * tau_now)
            rep.note += "stored tau stale at c=" + std::to_string(c) + "; ";

        const auto ws = winding_on_curve(sys, c, boundary_samples, settings);
        double margin = std::numeric_limits<double>::infinity();
        for (const auto& w : ws) {
            // slow side: read the jump in the backward window
            const double wind = fast ? w.winding : (w.winding + (w.impulse_jumped ? kTwoPi : 0.0));
            const double f = wind + offset;
            const double m_here = fast ? -f : f;
            if (m_here <= 0.0) {
                rep.pass = false;
                rep.offending_angles.push_back(w.phi0);
            }
            margin = std::min(margin, m_here);
        }
        return margin;
    };

    const bool a_fast = annulus.kind == AnnulusSpec::Kind::A;
    const double margin_inner = check_curve(annulus.a, annulus.tau_a, a_fast);
    const double margin_outer = check_curve(annulus.b, annulus.tau_b, !a_fast);
    rep.beta1 = a_fast ? margin_inner : margin_outer;  // fast-side margin
    rep.beta2 = a_fast ? margin_outer : margin_inner;  // slow-side margin
    return rep;
}

std::vector<GapPoint> gap_profile(const ImpulsiveSystem& sys_forced,
                                  const ImpulsiveSystem& sys_autonomous,
                                  const std::vector<double>& gammas, int n_angles,
                                  const FlowSettings& settings) {
    if (n_angles < 1) throw ConfigError("gap_profile: need at least one angle");
    if (std::abs(sys_forced.impulse.t1 - sys_autonomous.impulse.t1) > 1e-12 ||
        sys_forced.impulse.enabled != sys_autonomous.impulse.enabled)
        throw ConfigError("gap_profile: impulse schedules differ");
    for (double x : {0.3, 1.7, -2.9, 41.0, -517.0})
        if (sys_forced.g.eval(x) != sys_autonomous.g.eval(x))
            throw ConfigError("gap_profile: restoring forces differ");

    std::vector<GapPoint> out;
    out.reserve(gammas.size());
    for (double gamma : gammas) {
        if (!(gamma > 0.0)) throw ConfigError("gap_profile: radii must be positive");
        double max_gap = 0.0;
        for (int i = 0; i < n_angles; ++i) {
            const double theta = kTwoPi * i / n_angles;
            LiftedState s0{0.0, gamma * std::cos(theta), gamma * std::sin(theta), gamma, theta};
            const auto [ef, df] = evolve(sys_forced, s0, kTwoPi, settings);
            const auto [ea, da] = evolve(sys_autonomous, s0, kTwoPi, settings);
            (void)ef;
            (void)ea;
            const double raw = df.winding - da.winding;
            // reduce to the geometric angle between the two solutions
            const double gap = std::abs(std::remainder(raw, kTwoPi));
            max_gap = std::max(max_gap, gap);
        }
        out.push_back({gamma, max_gap});
    }
    return out;
}

}  // namespace duffing

// Windings on energy curves, twist-annulus selection from the period function,
// boundary sign checks, and the forced/autonomous winding gap.
#pragma once

#include <string>
#include <vector>

#include "duffing/flow.hpp"
#include "duffing/models.hpp"

namespace duffing {

// Annulus between two energy curves. Kind A has the fast curve (tau < 2*pi/m)
// inside; kind B has it outside.
struct AnnulusSpec {
    double a{0.0};  // inner energy level
    double b{0.0};  // outer energy level
    double tau_a{0.0};
    double tau_b{0.0};
    int m{0};
    double alpha{0.0};  // measured margin: min distance of tau(a), tau(b) to 2*pi/m
    double beta1{0.0};  // measured fast-side twist margin (filled by twist_check)
    double beta2{0.0};  // measured slow-side twist margin (filled by twist_check)
    int boundary_samples{0};
    enum class Kind { A, B } kind{Kind::A};
};

struct CurveWinding {
    double phi0{0.0};
    double winding{0.0};
    bool impulse_jumped{false};  // the impulse moved the angle (delta != 0)
};

// Winding of the evolution over [0, 2*pi) from n equally spaced starts on Gamma_c.
std::vector<CurveWinding> winding_on_curve(const ImpulsiveSystem& sys, double c, int n,
                                           const FlowSettings& settings = {});

// Sample tau on a log grid over [c_lo, c_hi]; for each candidate m extract the
// per-run extreme levels on either side of 2*pi/m (margin at least min_margin)
// and pair consecutive extremes into annuli a_k < b_k < a_{k+1}.
std::vector<AnnulusSpec> tau_scan(const GField& g, double c_lo, double c_hi, int points,
                                  const std::vector<int>& m_candidates, double min_margin = 0.05);

struct TwistReport {
    bool pass{false};
    double beta1{0.0};
    double beta2{0.0};
    int boundary_samples{0};
    std::vector<double> offending_angles;  // starts violating the sign condition
    std::string note;
};

// Boundary sign check of the twist condition. The winding on the fast curve
// (tau < 2*pi/m) is taken as evolved; on the slow curve the angle jump is read
// in the backward window (winding + 2*pi whenever the impulse jumped), matching
// the decomposition -2q*pi + xi used for the outer estimate. Margins:
// beta1 = -max(W + 2m*pi) over the fast curve, beta2 = min(W + 2m*pi) over the
// slow one; pass requires both strictly positive.
TwistReport twist_check(const ImpulsiveSystem& sys, const AnnulusSpec& annulus,
                        int boundary_samples = 64, const FlowSettings& settings = {});

struct GapPoint {
    double gamma{0.0};
    double max_gap{0.0};
};

// For each radius gamma, evolve both systems from the same starts on the circle
// rho = gamma and report the largest winding gap |Theta - Phi|, reduced modulo
// 2*pi (the geometric angle between the two solutions, continuous through the
// impulse). Identically zero when the forcing vanishes.
std::vector<GapPoint> gap_profile(const ImpulsiveSystem& sys_forced,
                                  const ImpulsiveSystem& sys_autonomous,
                                  const std::vector<double>& gammas, int n_angles,
                                  const FlowSettings& settings = {});

}  // namespace duffing

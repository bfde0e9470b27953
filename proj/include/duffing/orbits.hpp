// Fixed points of the period map inside twist annuli: Newton search from polar
// grids, independent re-verification, and a degree-based boundary certificate.
#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "duffing/flow.hpp"
#include "duffing/models.hpp"
#include "duffing/twist.hpp"
#include "duffing/types.hpp"

namespace duffing {

struct OrbitRecord {
    Vec2 point;
    double residual{0.0};  // ||P(z) - z|| at the verification tolerance
    int annulus_id{-1};
    std::pair<std::complex<double>, std::complex<double>> multiplier_pair;
    int min_period_factor{1};
    bool degenerate{false};  // P'(z) - I numerically singular (fixed-point family)
    double det_jacobian{0.0};
    double v_level{0.0};
};

struct GridSpec {
    int radial{6};
    int angular{12};
    std::uint64_t seed{0};  // jitters the angular grid
};

// Newton on P(z) - z seeded from a polar grid strictly inside the annulus, with a
// least-squares step when P'(z) - I is singular. Converged roots are deduplicated
// at distance 1e-6 * sqrt(a), kept only when inside the annulus (V-level test for
// autonomous systems, radial test between the boundary curves otherwise), and
// re-verified by an evolution at 10x tighter tolerance: residual must stay below
// 1e-9 * max(1, ||z||). Sorted by residual.
std::vector<OrbitRecord> find_fixed_points(const ImpulsiveSystem& sys, const AnnulusSpec& annulus,
                                           const GridSpec& grid = {},
                                           const FlowSettings& settings = {},
                                           int annulus_id = -1);

// Recompute residuals of P^n for n = 1..n_max at tightened tolerance; set
// min_period_factor to the least n with residual below 1e-8 * max(1, ||z||).
// Throws NumericalError when no n qualifies.
OrbitRecord verify_orbit(const ImpulsiveSystem& sys, const OrbitRecord& rec, int n_max,
                         const FlowSettings& settings = {});

using PlanarMap = std::function<Vec2(const Vec2&)>;

// Winding number of the displacement z -> map(z) - z along Gamma_c, by angle
// accumulation with adaptive bisection whenever consecutive displacement angles
// differ by more than pi/2. Throws NumericalError when the displacement falls
// below vanish_tol anywhere on the curve: a fixed point sits on the boundary.
int displacement_degree_on_curve(const PlanarMap& map, const GField& g, double c, int n_angles,
                                 double vanish_tol = 1e-12);

// Degrees along both boundary curves of the annulus for the period map. The
// vanish threshold sits above the integration noise of the map so boundary
// fixed points are reported rather than mistaken for noise.
std::pair<int, int> displacement_winding(const ImpulsiveSystem& sys, const AnnulusSpec& annulus,
                                         int n_angles, const FlowSettings& settings = {});

}  // namespace duffing

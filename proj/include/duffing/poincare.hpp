// The period-2*pi map, its variational Jacobian and the area-preservation defect.
#pragma once

#include "duffing/flow.hpp"
#include "duffing/models.hpp"
#include "duffing/types.hpp"

namespace duffing {

struct PoincareOutcome {
    Vec2 start;
    Vec2 end;
    double winding{0.0};
    Mat2 jacobian;
    double det{0.0};           // signed: the velocity reversal makes this -1
    double energy_drift{0.0};  // autonomous case only
};

// State at t = 2*pi of the solution from (z, t=0), through the scheduled impulse.
// The winding matches evolve's diagnostics exactly (it is the same evolution);
// the Jacobian comes from a separate variational integration.
PoincareOutcome poincare_map(const ImpulsiveSystem& sys, const Vec2& z,
                             const FlowSettings& settings = {});

// M(2*pi) of the tangent system M' = [[0, 1], [-g'(x(t)), 0]] M with the impulse
// differential diag(1, -1) applied at the scheduled times.
Mat2 jacobian(const ImpulsiveSystem& sys, const Vec2& z, const FlowSettings& settings = {});

// | |det DP| - 1 |. The reversal impulse reverses orientation, so the signed
// determinant sits at -1; area preservation is the unsigned statement.
double area_defect(const ImpulsiveSystem& sys, const Vec2& z, const FlowSettings& settings = {});

}  // namespace duffing

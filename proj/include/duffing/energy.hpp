// Autonomous energy geometry: level curves of V = y^2/2 + G(x), their x-intercepts,
// the period function tau(c), and star-shapedness diagnostics.
#pragma once

#include <utility>
#include <vector>

#include "duffing/models.hpp"
#include "duffing/types.hpp"

namespace duffing {

struct EnergyCurve {
    double c{0.0};
    double h{0.0};   // positive x-intercept
    double h1{0.0};  // -h1 is the negative x-intercept
    double tau{0.0};
    double c0_floor{0.0};
};

inline double potential(const GField& g, double x, double y) {
    return 0.5 * y * y + g.antideriv(x);
}

// Intercepts and period of Gamma_c in one record.
EnergyCurve energy_curve(const GField& g, double c, double c0_floor = 1.0);

// Smallest level, of the form floor * 4^k <= cap, whose curve passes a radial
// uniqueness scan (ray from the origin meets the level set exactly once) at
// n_angles angles. Throws BracketError when no admissible level exists below cap.
double min_level(const GField& g, double floor = 1.0, int n_angles = 720, double cap = 1e9);

// x-intercepts of Gamma_c: G(h) = G(-h1) = c, residual <= 1e-12 * max(1, c).
std::pair<double, double> intercepts(const GField& g, double c);

// Least period of the orbit on Gamma_c via the substitution G(u) = c sin^2(psi)
// on each half (bounded integrand), adaptive Gauss-Kronrod quadrature.
double tau(const GField& g, double c, double rel_tol = 1e-9);

// Independent oracle: integrate z' = w, w' = -g(z) from (h(c), 0) until the first
// return to the positive x-axis with w crossing from + to -; event refined to 1e-10.
double tau_flow_oracle(const GField& g, double c);

// n points on Gamma_c at equally spaced polar angles 2*pi*i/n, solved radially;
// residual |V - c| <= 1e-9 * max(1, c) at each point.
std::vector<Vec2> sample_curve(const GField& g, double c, int n);

// Radius of Gamma_c along the ray at angle theta.
double curve_radius(const GField& g, double c, double theta);

}  // namespace duffing

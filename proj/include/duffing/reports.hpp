// Writers for the CSV/JSON external interfaces. Every file embeds the resolved
// configuration; numeric cells are printed with %.17g so identical runs produce
// byte-identical output.
#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "duffing/orbits.hpp"
#include "duffing/twist.hpp"

namespace duffing {

struct Provenance {
    std::string config_json;  // resolved model config
    std::string command;      // subcommand + parameters
    std::uint64_t seed{0};
    double rel_tol{1e-10};
    double abs_tol{1e-12};
};

void write_csv_header(std::ostream& os, const Provenance& p);

// Trajectory dump rows: t, x, y, rho, phi, V, impulse flag.
struct TrajectoryRow {
    double t, x, y, rho, phi, v;
    bool impulse;
};
void write_trajectory_csv(std::ostream& os, const Provenance& p,
                          const std::vector<TrajectoryRow>& rows);

// tau-scan table: c, h, h1, tau.
struct TauRow {
    double c, h, h1, tau;
};
void write_tau_scan_csv(std::ostream& os, const Provenance& p, const std::vector<TauRow>& rows);

// Poincare grid: x0, y0, x1, y1, winding, det.
struct PoincareRow {
    double x0, y0, x1, y1, winding, det;
};
void write_poincare_grid_csv(std::ostream& os, const Provenance& p,
                             const std::vector<PoincareRow>& rows);

void write_gap_profile_csv(std::ostream& os, const Provenance& p,
                           const std::vector<GapPoint>& rows);

std::string annuli_report_json(const Provenance& p, const std::vector<AnnulusSpec>& annuli);

std::string twist_report_json(const Provenance& p, const AnnulusSpec& annulus,
                              const TwistReport& report);

std::string orbits_report_json(const Provenance& p, const std::vector<OrbitRecord>& records);

}  // namespace duffing

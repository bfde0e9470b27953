#include "duffing/reports.hpp"

#include <cinttypes>
#include <cstdio>

#include <json.hpp>

namespace duffing {

using nlohmann::ordered_json;

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

ordered_json provenance_json(const Provenance& p) {
    ordered_json j;
    j["command"] = p.command;
    j["config"] = ordered_json::parse(p.config_json.empty() ? "{}" : p.config_json);
    j["seed"] = p.seed;
    j["rel_tol"] = p.rel_tol;
    j["abs_tol"] = p.abs_tol;
    return j;
}

ordered_json annulus_json(const AnnulusSpec& a) {
    ordered_json j;
    j["a"] = a.a;
    j["b"] = a.b;
    j["tau_a"] = a.tau_a;
    j["tau_b"] = a.tau_b;
    j["m"] = a.m;
    j["alpha"] = a.alpha;
    j["kind"] = a.kind == AnnulusSpec::Kind::A ? "A" : "B";
    return j;
}

}  // namespace

void write_csv_header(std::ostream& os, const Provenance& p) {
    os << "# command: " << p.command << "\n";
    os << "# config: " << (p.config_json.empty() ? "{}" : p.config_json) << "\n";
    os << "# seed: " << p.seed << "\n";
    os << "# rel_tol: " << fmt(p.rel_tol) << " abs_tol: " << fmt(p.abs_tol) << "\n";
}

void write_trajectory_csv(std::ostream& os, const Provenance& p,
                          const std::vector<TrajectoryRow>& rows) {
    write_csv_header(os, p);
    os << "t,x,y,rho,phi,V,impulse\n";
    for (const auto& r : rows)
        os << fmt(r.t) << ',' << fmt(r.x) << ',' << fmt(r.y) << ',' << fmt(r.rho) << ','
           << fmt(r.phi) << ',' << fmt(r.v) << ',' << (r.impulse ? 1 : 0) << '\n';
}

void write_tau_scan_csv(std::ostream& os, const Provenance& p, const std::vector<TauRow>& rows) {
    write_csv_header(os, p);
    os << "c,h,h1,tau\n";
    for (const auto& r : rows)
        os << fmt(r.c) << ',' << fmt(r.h) << ',' << fmt(r.h1) << ',' << fmt(r.tau) << '\n';
}

void write_poincare_grid_csv(std::ostream& os, const Provenance& p,
                             const std::vector<PoincareRow>& rows) {
    write_csv_header(os, p);
    os << "x0,y0,x1,y1,winding,det\n";
    for (const auto& r : rows)
        os << fmt(r.x0) << ',' << fmt(r.y0) << ',' << fmt(r.x1) << ',' << fmt(r.y1) << ','
           << fmt(r.winding) << ',' << fmt(r.det) << '\n';
}

void write_gap_profile_csv(std::ostream& os, const Provenance& p,
                           const std::vector<GapPoint>& rows) {
    write_csv_header(os, p);
    os << "gamma,max_gap\n";
    for (const auto& r : rows) os << fmt(r.gamma) << ',' << fmt(r.max_gap) << '\n';
}

std::string annuli_report_json(const Provenance& p, const std::vector<AnnulusSpec>& annuli) {
    ordered_json j;
    j["provenance"] = provenance_json(p);
    j["annuli"] = ordered_json::array();
    for (const auto& a : annuli) j["annuli"].push_back(annulus_json(a));
    return j.dump(2) + "\n";
}

std::string twist_report_json(const Provenance& p, const AnnulusSpec& annulus,
                              const TwistReport& report) {
    ordered_json j;
    j["provenance"] = provenance_json(p);
    j["annulus"] = annulus_json(annulus);
    j["a"] = annulus.a;
    j["b"] = annulus.b;
    j["m"] = annulus.m;
    j["alpha"] = annulus.alpha;
    j["beta1"] = report.beta1;
    j["beta2"] = report.beta2;
    j["samples"] = report.boundary_samples;
    j["verdict"] = report.pass ? "pass" : "fail";
    if (!report.offending_angles.empty()) j["offending_angles"] = report.offending_angles;
    if (!report.note.empty()) j["note"] = report.note;
    return j.dump(2) + "\n";
}

std::string orbits_report_json(const Provenance& p, const std::vector<OrbitRecord>& records) {
    ordered_json j;
    j["provenance"] = provenance_json(p);
    j["orbits"] = ordered_json::array();
    for (const auto& r : records) {
        ordered_json o;
        o["point"] = {r.point.x, r.point.y};
        o["residual"] = r.residual;
        o["annulus_id"] = r.annulus_id;
        o["multipliers"] = {{r.multiplier_pair.first.real(), r.multiplier_pair.first.imag()},
                            {r.multiplier_pair.second.real(), r.multiplier_pair.second.imag()}};
        o["min_period_factor"] = r.min_period_factor;
        o["degenerate"] = r.degenerate;
        o["det_jacobian"] = r.det_jacobian;
        o["v_level"] = r.v_level;
        j["orbits"].push_back(o);
    }
    return j.dump(2) + "\n";
}

}  // namespace duffing

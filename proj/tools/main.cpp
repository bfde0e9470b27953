// Command-line front end: simulation, scans, twist checks and orbit searches
// with reproducible file outputs.
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "duffing/energy.hpp"
#include "duffing/errors.hpp"
#include "duffing/flow.hpp"
#include "duffing/model_config.hpp"
#include "duffing/orbits.hpp"
#include "duffing/poincare.hpp"
#include "duffing/reports.hpp"
#include "duffing/twist.hpp"

namespace fs = std::filesystem;
using namespace duffing;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitCheckFailed = 4;

struct CommonOpts {
    std::string config_path;
    std::string out_dir{"."};
    std::uint64_t seed{0};
    double rel_tol{1e-10};
    double abs_tol{1e-12};

    FlowSettings settings() const {
        FlowSettings s;
        s.rel_tol = rel_tol;
        s.abs_tol = abs_tol;
        return s;
    }

    Provenance provenance(const std::string& command, const std::string& config_json) const {
        Provenance p;
        p.command = command;
        p.config_json = config_json;
        p.seed = seed;
        p.rel_tol = rel_tol;
        p.abs_tol = abs_tol;
        return p;
    }
};

void add_common(CLI::App* cmd, CommonOpts& o, bool config_required = true) {
    auto* c = cmd->add_option("--config", o.config_path, "model config JSON");
    if (config_required) c->required();
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_option("--seed", o.seed, "random seed for grid jitter");
    cmd->add_option("--rel-tol", o.rel_tol, "integrator relative tolerance");
    cmd->add_option("--abs-tol", o.abs_tol, "integrator absolute tolerance");
}

std::ofstream open_out(const CommonOpts& o, const std::string& name) {
    fs::create_directories(o.out_dir);
    const auto path = fs::path(o.out_dir) / name;
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open output file " + path.string());
    return os;
}

// Annulus selection: inline levels or an annuli.json produced by tau-scan.
struct AnnulusOpts {
    double a{0.0}, b{0.0};
    int m{0};
    std::string annuli_path;
    int index{0};
};

void add_annulus_opts(CLI::App* cmd, AnnulusOpts& o) {
    cmd->add_option("--a", o.a, "inner energy level (inline annulus)");
    cmd->add_option("--b", o.b, "outer energy level (inline annulus)");
    cmd->add_option("--m", o.m, "winding multiple m (inline annulus)");
    cmd->add_option("--annuli", o.annuli_path, "annuli.json from tau-scan");
    cmd->add_option("--index", o.index, "annulus index within --annuli");
}

AnnulusSpec resolve_annulus(const AnnulusOpts& o, const GField& g) {
    AnnulusSpec an;
    if (!o.annuli_path.empty()) {
        std::ifstream in(o.annuli_path);
        if (!in) throw ConfigError("cannot open annuli file " + o.annuli_path);
        nlohmann::json j;
        in >> j;
        const auto& arr = j.at("annuli");
        if (o.index < 0 || o.index >= static_cast<int>(arr.size()))
            throw ConfigError("annulus index out of range");
        const auto& e = arr[o.index];
        an.a = e.at("a").get<double>();
        an.b = e.at("b").get<double>();
        an.m = e.at("m").get<int>();
        an.tau_a = e.at("tau_a").get<double>();
        an.tau_b = e.at("tau_b").get<double>();
        an.alpha = e.at("alpha").get<double>();
        an.kind = e.at("kind").get<std::string>() == "A" ? AnnulusSpec::Kind::A
                                                         : AnnulusSpec::Kind::B;
        return an;
    }
    if (!(o.a > 0.0) || !(o.b > o.a) || o.m <= 0)
        throw ConfigError("inline annulus requires --a, --b (0 < a < b) and --m");
    an.a = o.a;
    an.b = o.b;
    an.m = o.m;
    an.tau_a = tau(g, an.a);
    an.tau_b = tau(g, an.b);
    const double target = kTwoPi / an.m;
    an.kind = an.tau_a < target ? AnnulusSpec::Kind::A : AnnulusSpec::Kind::B;
    an.alpha = std::min(std::abs(target - an.tau_a), std::abs(an.tau_b - target));
    return an;
}

int cmd_simulate(const CommonOpts& o, double x0, double y0, double t_end) {
    const auto cfg = ModelConfig::from_file(o.config_path);
    const auto sys = cfg.build();
    std::ostringstream cmdline;
    cmdline << "simulate --x0 " << x0 << " --y0 " << y0 << " --t-end " << t_end;
    const auto prov = o.provenance(cmdline.str(), cfg.to_json());

    std::vector<TrajectoryRow> rows;
    TrajectorySink sink = [&rows](double t, double x, double y, double rho, double phi, double v,
                                  bool impulse) {
        rows.push_back({t, x, y, rho, phi, v, impulse});
    };
    auto settings = o.settings();
    settings.dense_output = true;
    evolve(sys, make_lifted(0.0, x0, y0), t_end, settings, sink);

    auto os = open_out(o, "trajectory.csv");
    write_trajectory_csv(os, prov, rows);
    std::cout << "trajectory.csv: " << rows.size() << " rows\n";
    return kExitOk;
}

int cmd_tau_scan(const CommonOpts& o, double c_lo, double c_hi, int points,
                 std::vector<int> ms, double min_margin) {
    const auto cfg = ModelConfig::from_file(o.config_path);
    const auto sys = cfg.build();
    if (ms.empty()) ms = {1, 2, 3, 4, 5, 6, 7, 8};
    std::ostringstream cmdline;
    cmdline << "tau-scan --c-lo " << c_lo << " --c-hi " << c_hi << " --points " << points;
    const auto prov = o.provenance(cmdline.str(), cfg.to_json());

    if (!(c_lo > 0.0) || !(c_hi > c_lo)) throw ConfigError("tau-scan: need 0 < c_lo < c_hi");

    std::vector<TauRow> rows;
    rows.reserve(points);
    for (int i = 0; i < points; ++i) {
        const double c =
            std::exp(std::log(c_lo) + (std::log(c_hi) - std::log(c_lo)) * i / (points - 1));
        const auto ec = energy_curve(sys.g, c);
        rows.push_back({ec.c, ec.h, ec.h1, ec.tau});
    }
    const auto annuli = tau_scan(sys.g, c_lo, c_hi, points, ms, min_margin);

    auto os = open_out(o, "tau_scan.csv");
    write_tau_scan_csv(os, prov, rows);
    auto oj = open_out(o, "annuli.json");
    oj << annuli_report_json(prov, annuli);

    if (annuli.empty())
        std::cout << "no twist annuli found for any m candidate (tau shows no oscillation "
                     "across 2*pi/m)\n";
    else
        std::cout << annuli.size() << " annuli written to annuli.json\n";
    return kExitOk;
}

int cmd_twist_check(const CommonOpts& o, const AnnulusOpts& ao, int samples) {
    const auto cfg = ModelConfig::from_file(o.config_path);
    const auto sys = cfg.build();
    auto an = resolve_annulus(ao, sys.g);
    std::ostringstream cmdline;
    cmdline << "twist-check --a " << an.a << " --b " << an.b << " --m " << an.m << " --samples "
            << samples;
    const auto prov = o.provenance(cmdline.str(), cfg.to_json());

    const auto rep = twist_check(sys, an, samples, o.settings());
    an.beta1 = rep.beta1;
    an.beta2 = rep.beta2;
    an.boundary_samples = rep.boundary_samples;

    auto os = open_out(o, "twist_report.json");
    os << twist_report_json(prov, an, rep);
    std::cout << "twist " << (rep.pass ? "pass" : "fail") << ": beta1=" << rep.beta1
              << " beta2=" << rep.beta2 << "\n";
    return rep.pass ? kExitOk : kExitCheckFailed;
}

int cmd_find_orbits(const CommonOpts& o, const AnnulusOpts& ao, int radial, int angular,
                    int n_max, bool dump_trajectories) {
    const auto cfg = ModelConfig::from_file(o.config_path);
    const auto sys = cfg.build();
    const auto an = resolve_annulus(ao, sys.g);
    std::ostringstream cmdline;
    cmdline << "find-orbits --a " << an.a << " --b " << an.b << " --m " << an.m << " --radial "
            << radial << " --angular " << angular;
    const auto prov = o.provenance(cmdline.str(), cfg.to_json());

    GridSpec grid;
    grid.radial = radial;
    grid.angular = angular;
    grid.seed = o.seed;
    auto records = find_fixed_points(sys, an, grid, o.settings(), ao.index);
    for (auto& r : records) r = verify_orbit(sys, r, n_max, o.settings());

    auto os = open_out(o, "orbits.json");
    os << orbits_report_json(prov, records);

    if (dump_trajectories) {
        auto settings = o.settings();
        settings.dense_output = true;
        for (std::size_t k = 0; k < records.size(); ++k) {
            std::vector<TrajectoryRow> rows;
            TrajectorySink sink = [&rows](double t, double x, double y, double rho, double phi,
                                          double v, bool imp) {
                rows.push_back({t, x, y, rho, phi, v, imp});
            };
            evolve(sys, make_lifted(0.0, records[k].point.x, records[k].point.y),
                   records[k].min_period_factor * kTwoPi, settings, sink);
            auto ot = open_out(o, "orbit_" + std::to_string(k) + ".csv");
            write_trajectory_csv(ot, prov, rows);
        }
    }
    std::cout << records.size() << " verified fixed points\n";
    return records.size() >= 2 ? kExitOk : kExitCheckFailed;
}

int cmd_gap_profile(const CommonOpts& o, std::vector<double> gammas, int n_angles) {
    const auto cfg = ModelConfig::from_file(o.config_path);
    const auto sys_forced = cfg.build();
    ModelConfig cfg_auto = cfg;
    cfg_auto.forcing = Forcing{};
    const auto sys_auto = cfg_auto.build();
    if (gammas.empty()) gammas = {1e2, 1e3, 1e4, 1e5};
    std::ostringstream cmdline;
    cmdline << "gap-profile --n-angles " << n_angles;
    const auto prov = o.provenance(cmdline.str(), cfg.to_json());

    const auto rows = gap_profile(sys_forced, sys_auto, gammas, n_angles, o.settings());
    auto os = open_out(o, "gap_profile.csv");
    write_gap_profile_csv(os, prov, rows);
    for (const auto& r : rows)
        std::cout << "gamma=" << r.gamma << " max_gap=" << r.max_gap << "\n";
    return kExitOk;
}

int cmd_reproduce_linear_example(const CommonOpts& o) {
    ModelConfig cfg;
    cfg.kind = GField::Kind::linear;
    cfg.t1 = 0.5 * kPi;
    const auto sys = cfg.build();
    const auto prov = o.provenance("reproduce-linear-example", cfg.to_json());
    const auto settings = o.settings();

    bool ok = true;
    std::vector<PoincareRow> rows;
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) {
            const double x0 = -2.0 + 4.0 * i / 9.0;
            const double y0 = -2.0 + 4.0 * j / 9.0;
            const auto out = poincare_map(sys, {x0, y0}, settings);
            rows.push_back({x0, y0, out.end.x, out.end.y, out.winding, out.det});
            ok = ok && std::abs(out.end.x + x0) < 1e-7 && std::abs(out.end.y - y0) < 1e-7;
            const auto out2 = poincare_map(sys, out.end, settings);
            ok = ok && std::abs(out2.end.x - x0) < 1e-7 && std::abs(out2.end.y - y0) < 1e-7;
        }
    }
    // x(t) = y0 sin t stays 2*pi-periodic: (0, y0) are fixed points
    for (double y0 : {1.0, -0.5, 2.0}) {
        const auto out = poincare_map(sys, {0.0, y0}, settings);
        ok = ok && std::abs(out.end.x) < 1e-9 && std::abs(out.end.y - y0) < 1e-9;
    }
    const auto w = poincare_map(sys, {1.0, 0.0}, settings);
    ok = ok && std::abs(w.winding + 3.0 * kPi) < 1e-6;

    auto os = open_out(o, "linear_example.csv");
    write_poincare_grid_csv(os, prov, rows);
    std::cout << (ok ? "linear example reproduced: P = (-x0, y0), P^2 = id, winding -3*pi\n"
                     : "linear example FAILED\n");
    return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"impulsive Duffing laboratory: Poincare maps, twist annuli, periodic orbits"};
    app.require_subcommand(1);

    CommonOpts common;

    auto* sim = app.add_subcommand("simulate", "integrate one trajectory and dump it as CSV");
    double x0 = 1.0, y0 = 0.0, t_end = 2.0 * kTwoPi;
    add_common(sim, common);
    sim->add_option("--x0", x0, "initial position");
    sim->add_option("--y0", y0, "initial velocity");
    sim->add_option("--t-end", t_end, "end time");

    auto* scan = app.add_subcommand("tau-scan", "scan the period function and extract annuli");
    double c_lo = 1e2, c_hi = 1e6, min_margin = 0.05;
    int points = 200;
    std::vector<int> ms;
    add_common(scan, common);
    scan->add_option("--c-lo", c_lo, "lowest energy level");
    scan->add_option("--c-hi", c_hi, "highest energy level");
    scan->add_option("--points", points, "grid points (log spaced)");
    scan->add_option("--m", ms, "winding multiples to try");
    scan->add_option("--min-margin", min_margin, "minimum tau margin around 2*pi/m");

    auto* twist = app.add_subcommand("twist-check", "verify the twist sign condition");
    AnnulusOpts twist_an;
    int samples = 64;
    add_common(twist, common);
    add_annulus_opts(twist, twist_an);
    twist->add_option("--samples", samples, "boundary samples per curve");

    auto* orbits = app.add_subcommand("find-orbits", "locate fixed points of the period map");
    AnnulusOpts orbit_an;
    int radial = 6, angular = 12, n_max = 3;
    bool dump_trajectories = false;
    add_common(orbits, common);
    add_annulus_opts(orbits, orbit_an);
    orbits->add_option("--radial", radial, "radial seed count");
    orbits->add_option("--angular", angular, "angular seed count");
    orbits->add_option("--n-max", n_max, "largest period factor checked");
    orbits->add_flag("--dump-trajectories", dump_trajectories,
                     "write orbit_<k>.csv for each record");

    auto* gap = app.add_subcommand("gap-profile", "forced vs autonomous winding gap over radii");
    std::vector<double> gammas;
    int n_angles = 16;
    add_common(gap, common);
    gap->add_option("--gammas", gammas, "radii to test");
    gap->add_option("--n-angles", n_angles, "starts per radius");

    auto* rle = app.add_subcommand("reproduce-linear-example",
                                   "verify the impulsive harmonic oscillator in closed form");
    add_common(rle, common, /*config_required=*/false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (sim->parsed()) return cmd_simulate(common, x0, y0, t_end);
        if (scan->parsed()) return cmd_tau_scan(common, c_lo, c_hi, points, ms, min_margin);
        if (twist->parsed()) return cmd_twist_check(common, twist_an, samples);
        if (orbits->parsed())
            return cmd_find_orbits(common, orbit_an, radial, angular, n_max, dump_trajectories);
        if (gap->parsed()) return cmd_gap_profile(common, gammas, n_angles);
        if (rle->parsed()) return cmd_reproduce_linear_example(common);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitConfig;
}

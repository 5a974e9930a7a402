// Command-line front end: classify points, run trajectories, sweep phase
// diagrams and decay maps, trace the EP boundary, and check the three-level
// reduction. Dimensionless (Omega*t0, gamma*t1) flags are primary; physical
// flags accept MHz / us with the 2*pi convention for couplings.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fptsim/dynamics.hpp"
#include "fptsim/floquet.hpp"
#include "fptsim/io.hpp"
#include "fptsim/models.hpp"
#include "fptsim/sweeps.hpp"

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitCantWrite = 73;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// internal physical units: rad/us and us
double mhz_to_rad_us(double mhz) { return kTwoPi * mhz; }

int write_or_73(const std::string& path, const std::string& content) {
    try {
        fptsim::atomic_write(path, content);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCantWrite;
    }
    return 0;
}

struct CommonSimFlags {
    double omega_t0 = -1.0;
    double gamma_t1 = -1.0;
    double omega_mhz = 0.1;
    double gamma_mhz = 0.2;
    double t0_us = -1.0;
    double t1_us = -1.0;
    std::string output;
    std::string format = "csv";
    std::string normalization = "both";
};

fptsim::PulseProtocol resolve_protocol(const CommonSimFlags& f, fptsim::DimensionlessPoint& pt,
                                       double& omega, double& gamma) {
    omega = mhz_to_rad_us(f.omega_mhz);
    gamma = mhz_to_rad_us(f.gamma_mhz);
    if (f.t0_us >= 0.0 || f.t1_us >= 0.0) {
        pt.omega_t0 = omega * std::max(f.t0_us, 0.0);
        pt.gamma_t1 = gamma * std::max(f.t1_us, 0.0);
    } else {
        pt.omega_t0 = std::max(f.omega_t0, 0.0);
        pt.gamma_t1 = std::max(f.gamma_t1, 0.0);
    }
    return fptsim::canonical_protocol(pt, omega, gamma);
}

// Expand "--config FILE" into flag arguments. The file is flat key=value
// with '#' comments; flags already present on the command line win.
std::vector<std::string> expand_config_args(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            config_path = args[i + 1];
            args.erase(args.begin() + i, args.begin() + i + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
            args.erase(args.begin() + i);
            break;
        }
    }
    if (config_path.empty()) return args;
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot read config file: " + config_path);
    for (const auto& [key, value] : fptsim::parse_config(in)) {
        const std::string flag = "--" + key;
        bool given = false;
        for (const auto& a : args)
            if (a == flag || a.rfind(flag + "=", 0) == 0) given = true;
        if (!given) args.push_back(flag + "=" + value);
    }
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Floquet PT-symmetry simulator for pulsed quantum measurement"};
    app.require_subcommand(1);

    // ---- classify ----
    double cl_w = 0.0, cl_g = 0.0, cl_tol = 1e-12, cl_ratio = -1.0;
    bool cl_compare = false;
    auto* classify_cmd = app.add_subcommand("classify", "PT phase of a dimensionless point");
    classify_cmd->add_option("--omega-t0", cl_w, "measurement interval Omega*t0")->required();
    classify_cmd->add_option("--gamma-t1", cl_g, "measurement strength gamma*t1")->required();
    classify_cmd->add_option("--tol", cl_tol, "EP tolerance (relative)");
    classify_cmd->add_flag("--compare-static", cl_compare,
                           "also report the static continuous-model phase");
    classify_cmd->add_option("--gamma-over-omega", cl_ratio,
                             "gamma/Omega ratio for the static comparison");

    // ---- simulate ----
    CommonSimFlags sim;
    std::uint64_t sim_periods = 100;
    auto* sim_cmd = app.add_subcommand("simulate", "stroboscopic trajectory of the pulse protocol");
    sim_cmd->add_option("--omega-t0", sim.omega_t0, "measurement interval Omega*t0");
    sim_cmd->add_option("--gamma-t1", sim.gamma_t1, "measurement strength gamma*t1");
    sim_cmd->add_option("--omega-mhz", sim.omega_mhz, "coupling Omega in MHz (x 2*pi)");
    sim_cmd->add_option("--gamma-mhz", sim.gamma_mhz, "loss gamma in MHz (x 2*pi)");
    auto* sim_t0 = sim_cmd->add_option("--t0-us", sim.t0_us, "evolution duration t0 in us");
    auto* sim_t1 = sim_cmd->add_option("--t1-us", sim.t1_us, "measurement duration t1 in us");
    sim_t0->excludes("--omega-t0")->excludes("--gamma-t1");
    sim_t1->excludes("--omega-t0")->excludes("--gamma-t1");
    sim_cmd->add_option("--periods", sim_periods, "number of Floquet periods");
    sim_cmd->add_option("-o,--output", sim.output, "output file (stdout if omitted)");
    sim_cmd->add_option("--format", sim.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sim_cmd->add_option("--normalization", sim.normalization, "raw, normalized or both")
        ->check(CLI::IsMember({"raw", "normalized", "both"}));

    // ---- square-wave ----
    double sq_omega_mhz = 0.1, sq_ratio = 2.0, sq_freq_ratio = 0.5;
    std::uint64_t sq_periods = 50, sq_samples = 16;
    std::string sq_output, sq_format = "csv";
    auto* sq_cmd = app.add_subcommand("square-wave",
                                      "anti-phase square-wave protocol, segment-resolved run");
    sq_cmd->add_option("--omega-mhz", sq_omega_mhz, "coupling Omega in MHz (x 2*pi)");
    sq_cmd->add_option("--gamma-over-omega", sq_ratio, "gamma/Omega ratio");
    sq_cmd->add_option("--freq-ratio", sq_freq_ratio, "2*pi*omega/Omega oscillation ratio");
    sq_cmd->add_option("--periods", sq_periods, "number of square-wave periods");
    sq_cmd->add_option("--samples-per-segment", sq_samples, "interior samples per segment");
    sq_cmd->add_option("-o,--output", sq_output, "output file (stdout if omitted)");
    sq_cmd->add_option("--format", sq_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    // ---- phase-diagram / decay-map ----
    fptsim::GridSpec grid{{0.0, std::numbers::pi, 256}, {0.0, 2.0, 256}, fptsim::GridSpacing::Linear};
    std::string grid_spacing = "linear", grid_output, grid_format = "csv", grid_svg;
    unsigned grid_workers = 0;
    double grid_tol = 1e-12;
    auto add_grid_flags = [&](CLI::App* cmd) {
        cmd->add_option("--omega-t0-min", grid.omega_t0.min);
        cmd->add_option("--omega-t0-max", grid.omega_t0.max);
        cmd->add_option("--omega-t0-count", grid.omega_t0.count);
        cmd->add_option("--gamma-t1-min", grid.gamma_t1.min);
        cmd->add_option("--gamma-t1-max", grid.gamma_t1.max);
        cmd->add_option("--gamma-t1-count", grid.gamma_t1.count);
        cmd->add_option("--spacing", grid_spacing)->check(CLI::IsMember({"linear", "log"}));
        cmd->add_option("--workers", grid_workers, "worker threads (0 = auto, FPT_THREADS caps)");
        cmd->add_option("--tol", grid_tol, "EP tolerance");
        cmd->add_option("-o,--output", grid_output, "output file (stdout if omitted)");
        cmd->add_option("--format", grid_format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
    };
    auto* pd_cmd = app.add_subcommand("phase-diagram", "discriminant/phase/kappa over a grid");
    add_grid_flags(pd_cmd);
    pd_cmd->add_option("--svg", grid_svg, "also emit an SVG heatmap to this path");
    auto* dm_cmd = app.add_subcommand("decay-map", "per-period decay rate over a grid");
    add_grid_flags(dm_cmd);

    // ---- boundary ----
    double bd_min = 0.01, bd_max = 3.0;
    std::size_t bd_count = 1000;
    std::string bd_output;
    auto* bd_cmd = app.add_subcommand("boundary", "EP boundary curve gamma_t1*(omega_t0)");
    bd_cmd->add_option("--min", bd_min, "smallest omega_t0 sample");
    bd_cmd->add_option("--max", bd_max, "largest omega_t0 sample");
    bd_cmd->add_option("--count", bd_count, "number of samples");
    bd_cmd->add_option("-o,--output", bd_output, "output file (stdout if omitted)");

    // ---- validate-three-level ----
    double tl_omega_mhz = 0.1, tl_omega_prime_mhz = 1.0, tl_linewidth = 22.0;
    double tl_tmax_us = -1.0, tl_bound = 0.05;
    auto* tl_cmd = app.add_subcommand("validate-three-level",
                                      "three-level model vs its two-level reduction");
    tl_cmd->add_option("--omega-mhz", tl_omega_mhz, "Omega in MHz (x 2*pi)");
    tl_cmd->add_option("--omega-prime-mhz", tl_omega_prime_mhz, "Omega' in MHz (x 2*pi)");
    tl_cmd->add_option("--linewidth", tl_linewidth, "|P> linewidth Gamma in 1/us");
    tl_cmd->add_option("--t-max-us", tl_tmax_us, "window (default: one Rabi period 2*pi/Omega)");
    tl_cmd->add_option("--max-sup-error", tl_bound, "acceptance bound on sup |p0_3L - p0_2L|");

    for (auto* cmd : app.get_subcommands({}))
        cmd->add_option("--config", "flat key=value config file ('#' comments)")
            ->expected(1)
            ->type_name("FILE");

    try {
        std::vector<std::string> args = expand_config_args(argc, argv);
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (classify_cmd->parsed()) {
            const fptsim::DimensionlessPoint pt{cl_w, cl_g};
            const double d = fptsim::discriminant(pt);
            const fptsim::PhaseLabel phase = fptsim::classify(pt, cl_tol);
            std::cout << "D = " << fptsim::fmt12(d) << "  phase = " << to_string(phase);
            if (cl_compare) {
                if (cl_ratio < 0.0) {
                    std::cerr << "error: --compare-static needs --gamma-over-omega\n";
                    return kExitUsage;
                }
                const fptsim::PhaseLabel st =
                    fptsim::static_classify(fptsim::ContinuousModel(1.0, cl_ratio));
                std::cout << "  static = " << to_string(st)
                          << (st != phase ? "  (static and Floquet classifications disagree)" : "");
            }
            std::cout << "\n";
            switch (phase) {
                case fptsim::PhaseLabel::PTSP: return 0;
                case fptsim::PhaseLabel::PTBP: return 1;
                case fptsim::PhaseLabel::EP: return 2;
            }
        }

        if (sim_cmd->parsed()) {
            fptsim::DimensionlessPoint pt;
            double omega = 0.0, gamma = 0.0;
            const fptsim::PulseProtocol protocol = resolve_protocol(sim, pt, omega, gamma);
            const fptsim::Trajectory traj =
                fptsim::stroboscopic_run(protocol, fptsim::InitialState::ground(), sim_periods);
            const fptsim::HeaderBlock header = {
                {"command", "simulate"},
                {"omega_t0", fptsim::fmt12(pt.omega_t0)},
                {"gamma_t1", fptsim::fmt12(pt.gamma_t1)},
                {"omega_rad_per_us", fptsim::fmt12(omega)},
                {"gamma_per_us", fptsim::fmt12(gamma)},
                {"periods", std::to_string(sim_periods)},
                {"normalization", sim.normalization},
                {"artifact_version", "1.0"},
            };
            const std::string text = sim.format == "json" ? fptsim::trajectory_json(traj, header)
                                                          : fptsim::trajectory_csv(traj, header);
            if (sim.output.empty()) {
                std::cout << text;
                return 0;
            }
            return write_or_73(sim.output, text);
        }

        if (sq_cmd->parsed()) {
            const double omega = mhz_to_rad_us(sq_omega_mhz);
            const double gamma = sq_ratio * omega;
            const double freq = sq_freq_ratio * omega / kTwoPi;
            const fptsim::PulseProtocol protocol =
                fptsim::square_wave_protocol(omega, gamma, freq);
            const fptsim::Trajectory traj = fptsim::piecewise_run(
                protocol, fptsim::InitialState::ground(), sq_periods, sq_samples);
            const fptsim::HeaderBlock header = {
                {"command", "square-wave"},
                {"omega_rad_per_us", fptsim::fmt12(omega)},
                {"gamma_per_us", fptsim::fmt12(gamma)},
                {"oscillation_freq_rad_per_us", fptsim::fmt12(freq)},
                {"periods", std::to_string(sq_periods)},
                {"samples_per_segment", std::to_string(sq_samples)},
                {"artifact_version", "1.0"},
            };
            const std::string text = sq_format == "json" ? fptsim::trajectory_json(traj, header)
                                                         : fptsim::trajectory_csv(traj, header);
            if (sq_output.empty()) {
                std::cout << text;
                return 0;
            }
            return write_or_73(sq_output, text);
        }

        if (pd_cmd->parsed() || dm_cmd->parsed()) {
            grid.spacing = grid_spacing == "log" ? fptsim::GridSpacing::Log
                                                 : fptsim::GridSpacing::Linear;
            const unsigned workers = fptsim::resolve_workers(grid_workers);
            const fptsim::PhaseDiagram diag = fptsim::phase_diagram(grid, workers, grid_tol);
            const fptsim::HeaderBlock header = {
                {"command", pd_cmd->parsed() ? "phase-diagram" : "decay-map"},
                {"omega_t0_min", fptsim::fmt12(grid.omega_t0.min)},
                {"omega_t0_max", fptsim::fmt12(grid.omega_t0.max)},
                {"omega_t0_count", std::to_string(grid.omega_t0.count)},
                {"gamma_t1_min", fptsim::fmt12(grid.gamma_t1.min)},
                {"gamma_t1_max", fptsim::fmt12(grid.gamma_t1.max)},
                {"gamma_t1_count", std::to_string(grid.gamma_t1.count)},
                {"spacing", grid_spacing},
                {"tol", fptsim::fmt12(grid_tol)},
                {"artifact_version", "1.0"},
            };
            const std::string text = grid_format == "json"
                                         ? fptsim::phase_diagram_json(diag, header)
                                         : fptsim::phase_diagram_csv(diag, header);
            if (!grid_svg.empty()) {
                std::vector<double> ws;
                const double lo = std::max(grid.omega_t0.min, 1e-4);
                const double hi = std::min(grid.omega_t0.max, std::numbers::pi - 1e-4);
                for (int i = 0; i < 512; ++i)
                    ws.push_back(lo + (hi - lo) * i / 511.0);
                const int rc =
                    write_or_73(grid_svg, fptsim::phase_diagram_svg(diag, fptsim::boundary_curve(ws)));
                if (rc != 0) return rc;
            }
            if (grid_output.empty()) {
                std::cout << text;
                return 0;
            }
            return write_or_73(grid_output, text);
        }

        if (bd_cmd->parsed()) {
            std::vector<double> ws;
            ws.reserve(bd_count);
            for (std::size_t i = 0; i < bd_count; ++i)
                ws.push_back(bd_min + (bd_max - bd_min) * static_cast<double>(i) /
                                          static_cast<double>(bd_count - 1));
            const fptsim::BoundaryCurve curve = fptsim::boundary_curve(ws);
            const fptsim::HeaderBlock header = {
                {"command", "boundary"},
                {"min", fptsim::fmt12(bd_min)},
                {"max", fptsim::fmt12(bd_max)},
                {"count", std::to_string(bd_count)},
                {"artifact_version", "1.0"},
            };
            const std::string text = fptsim::boundary_csv(curve, header);
            if (bd_output.empty()) {
                std::cout << text;
                return 0;
            }
            return write_or_73(bd_output, text);
        }

        if (tl_cmd->parsed()) {
            const fptsim::ThreeLevelModel model(mhz_to_rad_us(tl_omega_mhz),
                                                mhz_to_rad_us(tl_omega_prime_mhz), tl_linewidth);
            const double tmax = tl_tmax_us > 0.0 ? tl_tmax_us : kTwoPi / model.omega;
            const fptsim::ReductionReport rep = fptsim::validate_reduction(model, tmax);
            std::cout << "gamma_eff = " << fptsim::fmt12(rep.gamma_eff) << " /us\n"
                      << "sup_error = " << fptsim::fmt12(rep.sup_error) << "\n"
                      << "ratio omega'/omega = "
                      << fptsim::fmt12(model.omega > 0 ? model.omega_prime / model.omega : 0.0)
                      << "\n"
                      << "ratio Gamma/omega = "
                      << fptsim::fmt12(model.omega > 0 ? model.Gamma / model.omega : 0.0) << "\n"
                      << "validity = " << (rep.validity_ok ? "ok" : "warning") << "\n";
            if (!rep.validity_ok) return 3;
            return rep.sup_error <= tl_bound ? 0 : 1;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 70;
    }
    return 0;
}

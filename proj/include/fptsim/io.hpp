// File output: trajectory/grid CSV and JSON, a dependency-free SVG heatmap,
// and atomic whole-file writes (temp + rename). Numbers carry 12 significant
// digits; a '#' header block records every parameter of the run.

#ifndef FPTSIM_IO_HPP
#define FPTSIM_IO_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fptsim/dynamics.hpp"
#include "fptsim/sweeps.hpp"

namespace fptsim {

/// Decimal with 12 significant digits.
inline std::string fmt12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

/// Whole-file atomic write: temp file in the target directory, then rename.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    std::error_code ec;
    fs::create_directories(dir, ec);
    const fs::path tmp = dir / (path.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
        out << content;
        if (!out.good()) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) throw std::runtime_error("rename failed: " + path.string() + ": " + ec.message());
}

/// Ordered key/value pairs reproduced verbatim in output headers.
using HeaderBlock = std::vector<std::pair<std::string, std::string>>;

inline std::string trajectory_csv(const Trajectory& traj, const HeaderBlock& header) {
    std::ostringstream out;
    for (const auto& [k, v] : header) out << "# " << k << " = " << v << "\n";
    if (traj.truncated) out << "# truncated = true (norm underflow)\n";
    out << "n,t,p0_raw,p1_raw,norm,p0_norm,p1_norm\n";
    for (const auto& s : traj.samples) {
        out << s.n << ',' << fmt12(s.t) << ',' << fmt12(s.p0_raw) << ',' << fmt12(s.p1_raw)
            << ',' << fmt12(s.norm) << ',' << fmt12(s.p0_norm) << ',' << fmt12(s.p1_norm)
            << "\n";
    }
    return out.str();
}

/// Parse a trajectory CSV produced by trajectory_csv (header lines skipped).
inline Trajectory parse_trajectory_csv(std::istream& in) {
    Trajectory traj;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'n') {
            if (line.find("truncated = true") != std::string::npos) traj.truncated = true;
            continue;
        }
        TrajectorySample s;
        std::istringstream row(line);
        char comma;
        row >> s.n >> comma >> s.t >> comma >> s.p0_raw >> comma >> s.p1_raw >> comma >> s.norm
            >> comma >> s.p0_norm >> comma >> s.p1_norm;
        if (row.fail()) throw std::runtime_error("malformed trajectory CSV row: " + line);
        traj.samples.push_back(s);
    }
    return traj;
}

inline std::string trajectory_json(const Trajectory& traj, const HeaderBlock& header) {
    std::ostringstream out;
    out << "{\n  \"params\": {";
    bool first = true;
    for (const auto& [k, v] : header) {
        out << (first ? "" : ", ") << "\"" << k << "\": \"" << v << "\"";
        first = false;
    }
    out << "},\n  \"truncated\": " << (traj.truncated ? "true" : "false") << ",\n  \"samples\": [\n";
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        const auto& s = traj.samples[i];
        out << "    {\"n\": " << s.n << ", \"t\": " << fmt12(s.t)
            << ", \"p0_raw\": " << fmt12(s.p0_raw) << ", \"p1_raw\": " << fmt12(s.p1_raw)
            << ", \"norm\": " << fmt12(s.norm) << ", \"p0_norm\": " << fmt12(s.p0_norm)
            << ", \"p1_norm\": " << fmt12(s.p1_norm) << "}"
            << (i + 1 < traj.samples.size() ? "," : "") << "\n";
    }
    out << "  ]\n}\n";
    return out.str();
}

inline std::string phase_diagram_csv(const PhaseDiagram& diag, const HeaderBlock& header) {
    std::ostringstream out;
    for (const auto& [k, v] : header) out << "# " << k << " = " << v << "\n";
    out << "omega_t0,gamma_t1,discriminant,phase,kappa\n";
    for (const auto& c : diag.cells) {
        out << fmt12(c.omega_t0) << ',' << fmt12(c.gamma_t1) << ',' << fmt12(c.discriminant)
            << ',' << to_string(c.phase) << ',' << fmt12(c.kappa) << "\n";
    }
    return out.str();
}

inline std::string phase_diagram_json(const PhaseDiagram& diag, const HeaderBlock& header) {
    std::ostringstream out;
    out << "{\n  \"params\": {";
    bool first = true;
    for (const auto& [k, v] : header) {
        out << (first ? "" : ", ") << "\"" << k << "\": \"" << v << "\"";
        first = false;
    }
    out << "},\n  \"cells\": [\n";
    for (std::size_t i = 0; i < diag.cells.size(); ++i) {
        const auto& c = diag.cells[i];
        out << "    {\"omega_t0\": " << fmt12(c.omega_t0) << ", \"gamma_t1\": " << fmt12(c.gamma_t1)
            << ", \"discriminant\": " << fmt12(c.discriminant) << ", \"phase\": \""
            << to_string(c.phase) << "\", \"kappa\": " << fmt12(c.kappa) << "}"
            << (i + 1 < diag.cells.size() ? "," : "") << "\n";
    }
    out << "  ]\n}\n";
    return out.str();
}

inline std::string boundary_csv(const BoundaryCurve& curve, const HeaderBlock& header) {
    std::ostringstream out;
    for (const auto& [k, v] : header) out << "# " << k << " = " << v << "\n";
    for (double w : curve.skipped) out << "# skipped out-of-domain sample " << fmt12(w) << "\n";
    out << "omega_t0,gamma_t1_star\n";
    for (const auto& [w, g] : curve.points)
        out << fmt12(w) << ',' << fmt12(g) << "\n";
    return out.str();
}

/// Phase-colored heatmap with the EP boundary curve overlaid as a polyline.
inline std::string phase_diagram_svg(const PhaseDiagram& diag, const BoundaryCurve& curve,
                                     int width = 640, int height = 640) {
    const auto& spec = diag.spec;
    const std::size_t rows = spec.omega_t0.count, cols = spec.gamma_t1.count;
    const double cw = static_cast<double>(width) / rows;
    const double ch = static_cast<double>(height) / cols;
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    // x axis: omega_t0, y axis: gamma_t1 (origin bottom-left)
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            const auto& c = diag.at(i, j);
            const char* color = "#4575b4";  // PTSP
            if (c.phase == PhaseLabel::PTBP) color = "#d73027";
            else if (c.phase == PhaseLabel::EP) color = "#ffffbf";
            out << "<rect x=\"" << fmt12(i * cw) << "\" y=\"" << fmt12(height - (j + 1) * ch)
                << "\" width=\"" << fmt12(cw + 0.5) << "\" height=\"" << fmt12(ch + 0.5)
                << "\" fill=\"" << color << "\"/>\n";
        }
    }
    if (!curve.points.empty()) {
        const double wmin = spec.omega_t0.min, wmax = spec.omega_t0.max;
        const double gmin = spec.gamma_t1.min, gmax = spec.gamma_t1.max;
        out << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"2\" points=\"";
        for (const auto& [w, g] : curve.points) {
            if (g < gmin || g > gmax) continue;
            const double x = (w - wmin) / (wmax - wmin) * width;
            const double y = height - (g - gmin) / (gmax - gmin) * height;
            out << fmt12(x) << ',' << fmt12(y) << ' ';
        }
        out << "\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

/// Flat key=value config file with '#' comments.
inline std::map<std::string, std::string> parse_config(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw std::runtime_error("malformed config line: " + line);
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

}  // namespace fptsim

#endif  // FPTSIM_IO_HPP

// Parameter-grid evaluation: phase diagrams, EP boundary curves, and
// per-period decay-rate maps. Grid cells are independent; results land in
// preallocated row-major slots so worker count never affects the output.

#ifndef FPTSIM_SWEEPS_HPP
#define FPTSIM_SWEEPS_HPP

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "fptsim/floquet.hpp"
#include "fptsim/models.hpp"

namespace fptsim {

enum class GridSpacing { Linear, Log };

struct GridAxis {
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 0;
};

struct GridSpec {
    GridAxis omega_t0;
    GridAxis gamma_t1;
    GridSpacing spacing = GridSpacing::Linear;

    void validate() const {
        for (const GridAxis* ax : {&omega_t0, &gamma_t1}) {
            if (ax->count < 2) throw std::invalid_argument("GridSpec: count must be >= 2");
            if (!(ax->min < ax->max)) throw std::invalid_argument("GridSpec: need min < max");
            if (spacing == GridSpacing::Log && !(ax->min > 0.0))
                throw std::invalid_argument("GridSpec: log spacing requires min > 0");
        }
    }

    static double node(const GridAxis& ax, GridSpacing sp, std::size_t i) {
        const double f = static_cast<double>(i) / static_cast<double>(ax.count - 1);
        if (sp == GridSpacing::Log)
            return ax.min * std::pow(ax.max / ax.min, f);
        return ax.min + f * (ax.max - ax.min);
    }
};

struct PhaseCell {
    double omega_t0 = 0.0;
    double gamma_t1 = 0.0;
    double discriminant = 0.0;
    PhaseLabel phase = PhaseLabel::PTSP;
    double kappa = 0.0;  // per-period decay rate of the dominant multiplier
};

/// Row-major grid of classified cells; row index runs over omega_t0.
struct PhaseDiagram {
    GridSpec spec;
    std::vector<PhaseCell> cells;

    const PhaseCell& at(std::size_t i, std::size_t j) const {
        return cells[i * spec.gamma_t1.count + j];
    }
};

namespace detail {

inline PhaseCell eval_cell(double w, double g, double tol) {
    PhaseCell c;
    c.omega_t0 = w;
    c.gamma_t1 = g;
    DimensionlessPoint p{w, g};
    c.discriminant = discriminant(p);
    c.phase = classify(p, tol);
    c.kappa = kappa_from_point(p);
    return c;
}

template <typename F>
void parallel_for(std::size_t n, unsigned workers, F&& body) {
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(64); i < n; i = next.fetch_add(64)) {
                const std::size_t end = std::min(n, i + 64);
                for (std::size_t k = i; k < end; ++k) body(k);
            }
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace detail

/// Discriminant, phase label and decay rate at every grid node.
inline PhaseDiagram phase_diagram(const GridSpec& spec, unsigned workers = 1,
                                  double tol = 1e-12) {
    spec.validate();
    PhaseDiagram diag;
    diag.spec = spec;
    const std::size_t rows = spec.omega_t0.count, cols = spec.gamma_t1.count;
    diag.cells.resize(rows * cols);
    detail::parallel_for(rows * cols, workers, [&](std::size_t idx) {
        const std::size_t i = idx / cols, j = idx % cols;
        const double w = GridSpec::node(spec.omega_t0, spec.spacing, i);
        const double g = GridSpec::node(spec.gamma_t1, spec.spacing, j);
        diag.cells[idx] = detail::eval_cell(w, g, tol);
    });
    return diag;
}

/// Same grid with the kappa channel populated (it always is; alias kept so
/// the two map products stay distinct at call sites).
inline PhaseDiagram decay_map(const GridSpec& spec, unsigned workers = 1, double tol = 1e-12) {
    return phase_diagram(spec, workers, tol);
}

struct BoundaryCurve {
    std::vector<std::pair<double, double>> points;  // (omega_t0, gamma_t1*)
    std::vector<double> skipped;                    // out-of-domain samples
};

/// EP boundary gamma_t1*(omega_t0) sampled at the given intervals.
inline BoundaryCurve boundary_curve(const std::vector<double>& omega_t0_samples) {
    BoundaryCurve curve;
    curve.points.reserve(omega_t0_samples.size());
    for (double w : omega_t0_samples) {
        if (!(w > 0.0) || !(w < std::numbers::pi)) {
            curve.skipped.push_back(w);
            continue;
        }
        curve.points.emplace_back(w, ep_boundary(w));
    }
    return curve;
}

/// Worker count from the FPT_THREADS environment cap (0 = hardware default).
inline unsigned resolve_workers(unsigned requested = 0) {
    unsigned w = requested;
    if (w == 0) {
        w = std::thread::hardware_concurrency();
        if (w == 0) w = 1;
    }
    if (const char* env = std::getenv("FPT_THREADS")) {
        try {
            const unsigned cap = static_cast<unsigned>(std::stoul(env));
            if (cap > 0) w = std::min(w, cap);
        } catch (const std::exception&) {
            // ignore malformed cap
        }
    }
    return w;
}

}  // namespace fptsim

#endif  // FPTSIM_SWEEPS_HPP

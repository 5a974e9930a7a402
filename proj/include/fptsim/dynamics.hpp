// Stroboscopic and continuous-time trajectories, survival probability,
// effective decay rates, and the three-level reduction check.

#ifndef FPTSIM_DYNAMICS_HPP
#define FPTSIM_DYNAMICS_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fptsim/floquet.hpp"
#include "fptsim/models.hpp"
#include "fptsim/smallmat.hpp"

namespace fptsim {

/// One trajectory sample. p2 is the auxiliary-level population, zero for
/// two-level runs.
struct TrajectorySample {
    std::uint64_t n = 0;   // period index (or step index for continuous runs)
    double t = 0.0;        // seconds
    double p0_raw = 0.0;
    double p1_raw = 0.0;
    double p2_raw = 0.0;
    double norm = 0.0;     // ||psi||^2
    double p0_norm = 0.0;
    double p1_norm = 0.0;
    double p2_norm = 0.0;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    bool truncated = false;  // norm underflowed below 1e-300
};

/// Unit-norm two-level state, stored in basis order (|1>, |0>).
struct InitialState {
    Vec2 amplitudes;

    explicit InitialState(Vec2 amps) : amplitudes(amps) {
        if (std::abs(amplitudes.norm() - 1.0) > 1e-12)
            throw std::invalid_argument("InitialState: not unit norm");
    }

    static InitialState ground() {
        Vec2 v;
        v[kIdxGround] = 1.0;
        return InitialState(v);
    }
    static InitialState excited() {
        Vec2 v;
        v[kIdxExcited] = 1.0;
        return InitialState(v);
    }
};

/// Unit-norm three-level state in basis order (|0>, |1>, |P>).
struct InitialState3 {
    Vec3 amplitudes;

    explicit InitialState3(Vec3 amps) : amplitudes(amps) {
        if (std::abs(amplitudes.norm() - 1.0) > 1e-12)
            throw std::invalid_argument("InitialState3: not unit norm");
    }

    static InitialState3 ground() {
        Vec3 v;
        v[kIdx3Ground] = 1.0;
        return InitialState3(v);
    }
    static InitialState3 excited() {
        Vec3 v;
        v[kIdx3Excited] = 1.0;
        return InitialState3(v);
    }
};

namespace detail {

inline TrajectorySample sample2(std::uint64_t n, double t, const Vec2& psi) {
    TrajectorySample s;
    s.n = n;
    s.t = t;
    s.p0_raw = std::norm(psi[kIdxGround]);
    s.p1_raw = std::norm(psi[kIdxExcited]);
    s.norm = s.p0_raw + s.p1_raw;
    if (s.norm > 0.0) {
        s.p0_norm = s.p0_raw / s.norm;
        s.p1_norm = s.p1_raw / s.norm;
    }
    return s;
}

}  // namespace detail

/// psi_k = U(T,0)^k psi_0 sampled once per period.
inline Trajectory stroboscopic_run(const PulseProtocol& protocol, const InitialState& psi0,
                                   std::uint64_t n_periods) {
    const Mat2 u = period_propagator(protocol);
    const double T = protocol.period();
    Trajectory traj;
    traj.samples.reserve(n_periods + 1);
    Vec2 psi = psi0.amplitudes;
    for (std::uint64_t k = 0; k <= n_periods; ++k) {
        TrajectorySample s = detail::sample2(k, static_cast<double>(k) * T, psi);
        if (s.norm < 1e-300) {
            traj.truncated = true;
            break;
        }
        traj.samples.push_back(s);
        if (k < n_periods) psi = u * psi;
    }
    return traj;
}

/// psi(t) = exp(-i H t) psi_0 on the grid t = k*dt, each sample from the
/// exact matrix exponential (no step-to-step accumulation).
inline Trajectory continuous_run(const ContinuousModel& model, const InitialState& psi0,
                                 double t_max, double dt) {
    if (!(dt > 0.0) || t_max < 0.0)
        throw std::invalid_argument("continuous_run: need dt > 0 and t_max >= 0");
    const Mat2 h = model.hamiltonian();
    Trajectory traj;
    const auto steps = static_cast<std::uint64_t>(std::floor(t_max / dt + 1e-9));
    traj.samples.reserve(steps + 1);
    for (std::uint64_t k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        const Vec2 psi = expm(h, t) * psi0.amplitudes;
        traj.samples.push_back(detail::sample2(k, t, psi));
    }
    return traj;
}

/// Exact 3x3 non-Hermitian propagation sampled on the grid.
inline Trajectory three_level_run(const ThreeLevelModel& model, const InitialState3& psi0,
                                  double t_max, double dt) {
    if (!(dt > 0.0) || t_max < 0.0)
        throw std::invalid_argument("three_level_run: need dt > 0 and t_max >= 0");
    const Mat3 h = model.hamiltonian();
    Trajectory traj;
    const auto steps = static_cast<std::uint64_t>(std::floor(t_max / dt + 1e-9));
    traj.samples.reserve(steps + 1);
    for (std::uint64_t k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        const Vec3 psi = expm(h, t) * psi0.amplitudes;
        TrajectorySample s;
        s.n = k;
        s.t = t;
        s.p0_raw = std::norm(psi[kIdx3Ground]);
        s.p1_raw = std::norm(psi[kIdx3Excited]);
        s.p2_raw = std::norm(psi[kIdx3Aux]);
        s.norm = s.p0_raw + s.p1_raw + s.p2_raw;
        if (s.norm > 0.0) {
            s.p0_norm = s.p0_raw / s.norm;
            s.p1_norm = s.p1_raw / s.norm;
            s.p2_norm = s.p2_raw / s.norm;
        }
        traj.samples.push_back(s);
    }
    return traj;
}

/// Segment-resolved run over n_periods of a protocol, sampling each segment
/// at samples_per_segment interior points. Sample index n counts periods at
/// period boundaries and carries the running period index otherwise.
inline Trajectory piecewise_run(const PulseProtocol& protocol, const InitialState& psi0,
                                std::uint64_t n_periods, std::uint64_t samples_per_segment = 8) {
    if (samples_per_segment == 0)
        throw std::invalid_argument("piecewise_run: samples_per_segment must be > 0");
    Trajectory traj;
    Vec2 psi = psi0.amplitudes;
    double t = 0.0;
    traj.samples.push_back(detail::sample2(0, 0.0, psi));
    for (std::uint64_t k = 0; k < n_periods; ++k) {
        for (const auto& seg : protocol.segments()) {
            const Mat2 h = seg.hamiltonian();
            const double dt = seg.duration / static_cast<double>(samples_per_segment);
            const Mat2 step = expm(h, dt);
            for (std::uint64_t m = 0; m < samples_per_segment; ++m) {
                psi = step * psi;
                t += dt;
                TrajectorySample s = detail::sample2(k + 1, t, psi);
                if (s.norm < 1e-300) {
                    traj.truncated = true;
                    return traj;
                }
                traj.samples.push_back(s);
            }
        }
    }
    return traj;
}

/// Per-period decay rate from the dominant multiplier and, when the
/// trajectory allows, from a least-squares fit of ln P0 over the tail half.
struct DecayEstimate {
    double kappa_multiplier = 0.0;
    std::optional<double> kappa_fit;
    std::uint64_t fit_start = 0;
    std::uint64_t fit_end = 0;
    double residual = 0.0;  // rms of the fit
};

inline DecayEstimate effective_decay_rate(const PulseProtocol& protocol,
                                          std::uint64_t n_max_cap = 50000) {
    const FloquetSpectrum spec = floquet_spectrum(protocol);
    DecayEstimate est;
    est.kappa_multiplier = -2.0 * std::log(std::abs(spec.multiplier_plus));
    if (est.kappa_multiplier < 0.0 && est.kappa_multiplier > -1e-15) est.kappa_multiplier = 0.0;

    // choose n_max so that p0(n_max) stays above 1e-12
    std::uint64_t n_max = n_max_cap;
    if (est.kappa_multiplier > 0.0) {
        const double n_floor = -std::log(1e-12) / est.kappa_multiplier;
        n_max = std::min<std::uint64_t>(n_max_cap, static_cast<std::uint64_t>(n_floor));
    } else {
        n_max = std::min<std::uint64_t>(n_max_cap, 256);
    }
    Trajectory traj = stroboscopic_run(protocol, InitialState::ground(), n_max);
    while (!traj.samples.empty() && traj.samples.back().p0_raw < 1e-12) traj.samples.pop_back();
    const std::uint64_t n_end = traj.samples.empty() ? 0 : traj.samples.back().n;
    const std::uint64_t n_start = n_end / 2;
    if (n_end - n_start + 1 < 8) return est;  // too short to fit

    double sx = 0, sy = 0, sxx = 0, sxy = 0, cnt = 0;
    for (const auto& s : traj.samples) {
        if (s.n < n_start || s.p0_raw <= 0.0) continue;
        const double x = static_cast<double>(s.n), y = std::log(s.p0_raw);
        sx += x; sy += y; sxx += x * x; sxy += x * y; cnt += 1;
    }
    if (cnt < 8) return est;
    const double denom = cnt * sxx - sx * sx;
    if (denom == 0.0) return est;
    const double slope = (cnt * sxy - sx * sy) / denom;
    const double icept = (sy - slope * sx) / cnt;
    est.kappa_fit = -slope;
    est.fit_start = n_start;
    est.fit_end = n_end;
    double ss = 0;
    for (const auto& s : traj.samples) {
        if (s.n < n_start || s.p0_raw <= 0.0) continue;
        const double r = std::log(s.p0_raw) - (icept + slope * static_cast<double>(s.n));
        ss += r * r;
    }
    est.residual = std::sqrt(ss / cnt);
    return est;
}

/// Comparison of the full three-level dynamics with the reduced two-level
/// model ContinuousModel(Omega, gamma_eff).
struct ReductionReport {
    double sup_error = 0.0;   // max |p0_3level - p0_2level| over the samples
    double gamma_eff = 0.0;   // Omega'^2 / (2 Gamma)
    bool validity_ok = true;  // ratio checks Omega', Gamma >= 10 Omega
};

inline ReductionReport validate_reduction(const ThreeLevelModel& model, double t_max,
                                          std::uint64_t n_samples = 400) {
    ReductionReport rep;
    rep.gamma_eff = model.gamma_eff();
    rep.validity_ok = model.reduction_valid();
    const ContinuousModel reduced(model.omega, rep.gamma_eff);
    const double dt = t_max / static_cast<double>(n_samples);
    if (!(dt > 0.0)) {
        // degenerate window; identical at t = 0
        return rep;
    }
    const Trajectory t3 = three_level_run(model, InitialState3::ground(), t_max, dt);
    const Trajectory t2 = continuous_run(reduced, InitialState::ground(), t_max, dt);
    const std::size_t n = std::min(t3.samples.size(), t2.samples.size());
    for (std::size_t i = 0; i < n; ++i) {
        rep.sup_error = std::max(rep.sup_error,
                                 std::abs(t3.samples[i].p0_raw - t2.samples[i].p0_raw));
    }
    return rep;
}

}  // namespace fptsim

#endif  // FPTSIM_DYNAMICS_HPP

// Hamiltonians and measurement protocols of the pulsed-measurement two-level
// system, plus the three-level source model and conversions between them.
//
// Conventions: hbar = 1, all couplings/rates are angular frequencies.
// Two-level states are stored in basis order (|1>, |0>), matching the
// closed-form one-period propagator entrywise; index constants below.

#ifndef FPTSIM_MODELS_HPP
#define FPTSIM_MODELS_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "fptsim/smallmat.hpp"

namespace fptsim {

// Two-level basis indices: |1> (lossy) first, |0> (ground) second.
inline constexpr std::size_t kIdxExcited = 0;
inline constexpr std::size_t kIdxGround = 1;

// Three-level basis indices (|0>, |1>, |P>).
inline constexpr std::size_t kIdx3Ground = 0;
inline constexpr std::size_t kIdx3Excited = 1;
inline constexpr std::size_t kIdx3Aux = 2;

enum class PhaseLabel { PTSP, PTBP, EP };

inline const char* to_string(PhaseLabel p) {
    switch (p) {
        case PhaseLabel::PTSP: return "PTSP";
        case PhaseLabel::PTBP: return "PTBP";
        case PhaseLabel::EP: return "EP";
    }
    return "?";
}

/// Continuous measurement model: H = -i*gamma |1><1| + (Omega/2) sigma_x.
struct ContinuousModel {
    double omega = 0.0;  // coupling strength (rad/s)
    double gamma = 0.0;  // measurement/loss rate (1/s)

    ContinuousModel(double omega_, double gamma_) : omega(omega_), gamma(gamma_) {
        if (omega < 0.0 || gamma < 0.0)
            throw std::invalid_argument("ContinuousModel: negative parameter");
    }

    Mat2 hamiltonian() const {
        Mat2 h;
        h(kIdxExcited, kIdxExcited) = Complex(0.0, -gamma);
        h(kIdxExcited, kIdxGround) = 0.5 * omega;
        h(kIdxGround, kIdxExcited) = 0.5 * omega;
        return h;
    }
};

/// One piecewise-constant slice of a pulse protocol.
struct PulseSegment {
    double omega;     // coupling on this segment (rad/s)
    double gamma;     // loss on this segment (1/s)
    double duration;  // seconds, > 0

    Mat2 hamiltonian() const { return ContinuousModel(omega, gamma).hamiltonian(); }
};

/// Ordered piecewise-constant segments defining one Floquet period.
class PulseProtocol {
public:
    explicit PulseProtocol(std::vector<PulseSegment> segments)
        : segments_(std::move(segments)) {
        if (segments_.empty()) throw std::invalid_argument("PulseProtocol: no segments");
        for (const auto& s : segments_) {
            if (!(s.duration > 0.0)) throw std::invalid_argument("PulseProtocol: non-positive duration");
            if (s.omega < 0.0 || s.gamma < 0.0)
                throw std::invalid_argument("PulseProtocol: negative parameter");
        }
    }

    const std::vector<PulseSegment>& segments() const { return segments_; }

    /// Period T = sum of durations (compensated summation).
    double period() const {
        double sum = 0.0, c = 0.0;
        for (const auto& s : segments_) {
            double y = s.duration - c;
            double t = sum + y;
            c = (t - sum) - y;
            sum = t;
        }
        return sum;
    }

    /// Integrated loss per period, sum of gamma_k * duration_k.
    double integrated_loss() const {
        double sum = 0.0, c = 0.0;
        for (const auto& s : segments_) {
            double y = s.gamma * s.duration - c;
            double t = sum + y;
            c = (t - sum) - y;
            sum = t;
        }
        return sum;
    }

private:
    std::vector<PulseSegment> segments_;
};

/// Three-level source model. Gamma is the natural linewidth (population
/// decay rate) of |P>; the Hamiltonian carries -i(Gamma/2)|P><P|.
struct ThreeLevelModel {
    double omega;        // |0> <-> |1> coupling (rad/s)
    double omega_prime;  // |1> <-> |P> coupling (rad/s)
    double Gamma;        // |P> linewidth (1/s)

    ThreeLevelModel(double omega_, double omega_prime_, double Gamma_)
        : omega(omega_), omega_prime(omega_prime_), Gamma(Gamma_) {
        if (omega < 0.0 || omega_prime < 0.0 || Gamma < 0.0)
            throw std::invalid_argument("ThreeLevelModel: negative parameter");
    }

    /// Adiabatic-elimination validity: Omega' and Gamma both >= 10 * Omega.
    bool reduction_valid() const {
        return omega == 0.0 || (omega_prime >= 10.0 * omega && Gamma >= 10.0 * omega);
    }

    Mat3 hamiltonian() const {
        Mat3 h;
        h(kIdx3Ground, kIdx3Excited) = 0.5 * omega;
        h(kIdx3Excited, kIdx3Ground) = 0.5 * omega;
        h(kIdx3Excited, kIdx3Aux) = 0.5 * omega_prime;
        h(kIdx3Aux, kIdx3Excited) = 0.5 * omega_prime;
        h(kIdx3Aux, kIdx3Aux) = Complex(0.0, -0.5 * Gamma);
        return h;
    }

    /// Effective loss rate on |1> after eliminating |P>.
    double gamma_eff() const {
        if (Gamma == 0.0) {
            if (omega_prime == 0.0) return 0.0;
            throw std::invalid_argument("gamma_eff: Gamma = 0 with nonzero coupling");
        }
        return omega_prime * omega_prime / (2.0 * Gamma);
    }
};

/// Dimensionless protocol coordinates: measurement interval Omega*t0 and
/// measurement strength gamma*t1.
struct DimensionlessPoint {
    double omega_t0 = 0.0;
    double gamma_t1 = 0.0;
};

/// Two-segment evolution-measurement protocol at a dimensionless point.
/// Zero-valued coordinates drop their segment; both zero is an error.
inline PulseProtocol canonical_protocol(DimensionlessPoint point, double omega, double gamma) {
    if (point.omega_t0 < 0.0 || point.gamma_t1 < 0.0)
        throw std::invalid_argument("canonical_protocol: negative dimensionless parameter");
    if (point.omega_t0 == 0.0 && point.gamma_t1 == 0.0)
        throw std::invalid_argument("canonical_protocol: empty protocol (both coordinates zero)");
    std::vector<PulseSegment> segs;
    if (point.omega_t0 > 0.0) {
        if (!(omega > 0.0)) throw std::invalid_argument("canonical_protocol: omega must be > 0");
        segs.push_back({omega, 0.0, point.omega_t0 / omega});
    }
    if (point.gamma_t1 > 0.0) {
        if (!(gamma > 0.0)) throw std::invalid_argument("canonical_protocol: gamma must be > 0");
        segs.push_back({0.0, gamma, point.gamma_t1 / gamma});
    }
    return PulseProtocol(std::move(segs));
}

/// Recover (Omega*t0, gamma*t1) from a canonical-form protocol.
inline DimensionlessPoint extract_point(const PulseProtocol& p) {
    DimensionlessPoint pt;
    for (const auto& s : p.segments()) {
        pt.omega_t0 += s.omega * s.duration;
        pt.gamma_t1 += s.gamma * s.duration;
    }
    return pt;
}

/// Anti-phase square-wave protocol: coupling on for the first half period,
/// loss on for the second; oscillation frequency freq, period 2*pi/freq.
inline PulseProtocol square_wave_protocol(double omega, double gamma, double freq) {
    if (!(freq > 0.0)) throw std::invalid_argument("square_wave_protocol: frequency must be > 0");
    const double half = std::numbers::pi / freq;
    return PulseProtocol({{omega, 0.0, half}, {0.0, gamma, half}});
}

/// Static classifier of the continuous model: gamma/Omega against 1.
inline PhaseLabel static_classify(const ContinuousModel& model) {
    if (!(model.omega > 0.0))
        throw std::invalid_argument("static_classify: omega = 0 gives undefined ratio");
    const double r = model.gamma / model.omega;
    if (std::abs(r - 1.0) <= 1e-12) return PhaseLabel::EP;
    return r < 1.0 ? PhaseLabel::PTSP : PhaseLabel::PTBP;
}

}  // namespace fptsim

#endif  // FPTSIM_MODELS_HPP

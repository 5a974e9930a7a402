// One-period propagators, Floquet multipliers and quasi-energies, and
// PT-phase classification for pulse protocols.

#ifndef FPTSIM_FLOQUET_HPP
#define FPTSIM_FLOQUET_HPP

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "fptsim/models.hpp"
#include "fptsim/smallmat.hpp"

namespace fptsim {

/// Right-to-left ordered product of segment propagators exp(-i H_k d_k).
inline Mat2 period_propagator(const PulseProtocol& protocol) {
    Mat2 u = Mat2::identity();
    for (const auto& seg : protocol.segments()) {
        u = expm(seg.hamiltonian(), seg.duration) * u;
    }
    return u;
}

/// ln(cosh(x)) without overflow.
inline double lncosh(double x) {
    const double ax = std::abs(x);
    return ax + std::log1p(std::exp(-2.0 * ax)) - std::numbers::ln2;
}

/// PT-phase discriminant D = cos^2(Omega*t0/2) * cosh^2(gamma*t1/2).
/// Evaluated in log space for large strengths to avoid overflow.
inline double discriminant(DimensionlessPoint p) {
    if (!std::isfinite(p.omega_t0) || !std::isfinite(p.gamma_t1))
        throw std::invalid_argument("discriminant: non-finite input");
    const double c = std::cos(0.5 * p.omega_t0);
    if (p.gamma_t1 > 700.0) {
        if (c == 0.0) return 0.0;
        const double ln_d = 2.0 * std::log(std::abs(c)) + 2.0 * lncosh(0.5 * p.gamma_t1);
        return std::exp(ln_d);
    }
    const double ch = std::cosh(0.5 * p.gamma_t1);
    return c * c * ch * ch;
}

/// D < 1 - tol: PTSP; D > 1 + tol: PTBP; otherwise EP.
inline PhaseLabel classify(DimensionlessPoint p, double tol = 1e-12) {
    const double d = discriminant(p);
    if (d < 1.0 - tol) return PhaseLabel::PTSP;
    if (d > 1.0 + tol) return PhaseLabel::PTBP;
    return PhaseLabel::EP;
}

/// Floquet data of a one-period propagator.
struct FloquetSpectrum {
    Complex multiplier_plus;   // dominant multiplier eta_+
    Complex multiplier_minus;  // eta_-
    Complex quasi_energy_plus;   // eps = i ln(eta) / T, principal branch
    Complex quasi_energy_minus;
    Vec2 mode_plus;
    Vec2 mode_minus;
    double period = 0.0;
    PhaseLabel phase = PhaseLabel::PTSP;
    bool defective = false;
};

namespace detail {

inline Complex quasi_energy(Complex eta, double period) {
    // i*ln(eta)/T with Re eps folded to the first Brillouin zone (-pi/T, pi/T]
    const Complex eps = Complex(0.0, 1.0) * std::log(eta) / period;
    const double zone = std::numbers::pi / period;
    double re = eps.real();
    if (re <= -zone) re += 2.0 * zone;
    return {re, eps.imag()};
}

}  // namespace detail

/// Eigendecomposition of the one-period propagator. The phase label comes
/// from the multiplier moduli: equal moduli (complex-conjugate pair up to a
/// global loss factor) is PTSP, split moduli PTBP, defective EP.
inline FloquetSpectrum floquet_spectrum(const PulseProtocol& protocol) {
    const Mat2 u = period_propagator(protocol);
    const Eig2Result e = eig2(u);
    FloquetSpectrum s;
    s.period = protocol.period();
    s.multiplier_plus = e.first.value;
    s.multiplier_minus = e.second.value;
    s.mode_plus = e.first.vector;
    s.mode_minus = e.second.vector;
    s.quasi_energy_plus = detail::quasi_energy(e.first.value, s.period);
    s.quasi_energy_minus = detail::quasi_energy(e.second.value, s.period);
    s.defective = e.degenerate;
    if (e.degenerate) {
        s.phase = PhaseLabel::EP;
    } else {
        const double m1 = std::abs(e.first.value);
        const double m2 = std::abs(e.second.value);
        s.phase = (std::abs(m1 - m2) <= 1e-10 * std::max(m1, m2)) ? PhaseLabel::PTSP
                                                                  : PhaseLabel::PTBP;
    }
    return s;
}

/// EP boundary: the measurement strength gamma*t1* at which D = 1 for a
/// given interval, 2*arccosh(1/cos(Omega*t0/2)). Defined on 0 < Omega*t0 < pi.
inline double ep_boundary(double omega_t0) {
    if (!(omega_t0 > 0.0) || !(omega_t0 < std::numbers::pi))
        throw std::domain_error("ep_boundary: omega_t0 must lie in (0, pi)");
    return 2.0 * std::acosh(1.0 / std::cos(0.5 * omega_t0));
}

/// Per-period decay rate of the dominant multiplier, -2 ln|eta_+|.
inline double kappa_from_point(DimensionlessPoint p) {
    // closed form via trace/determinant of the canonical propagator
    const double tr = std::cos(0.5 * p.omega_t0) * (1.0 + std::exp(-p.gamma_t1));
    const double dt = std::exp(-p.gamma_t1);
    const Complex disc = Complex(tr * tr - 4.0 * dt, 0.0);
    const Complex sq = std::sqrt(disc);
    const Complex e1 = 0.5 * (Complex(tr, 0.0) + sq);
    const Complex e2 = 0.5 * (Complex(tr, 0.0) - sq);
    const double m = std::max(std::abs(e1), std::abs(e2));
    if (m == 0.0) return std::numeric_limits<double>::infinity();
    return -2.0 * std::log(m);
}

}  // namespace fptsim

#endif  // FPTSIM_FLOQUET_HPP

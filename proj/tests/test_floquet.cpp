#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "fptsim/floquet.hpp"

using namespace fptsim;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const Complex kI(0.0, 1.0);

PulseProtocol canonical(double omega_t0, double gamma_t1) {
    return canonical_protocol({omega_t0, gamma_t1}, 1.0, 1.0);
}

Mat2 closed_form_u(double omega_t0, double gamma_t1) {
    const double c = std::cos(0.5 * omega_t0), s = std::sin(0.5 * omega_t0);
    const double e = std::exp(-gamma_t1);
    Mat2 u;
    u(0, 0) = e * c;
    u(0, 1) = -kI * e * s;
    u(1, 0) = -kI * s;
    u(1, 1) = c;
    return u;
}

}  // namespace

TEST_CASE("period_propagator of a pi-pulse") {
    const Mat2 u = period_propagator(canonical(std::numbers::pi, 0.0));
    CHECK_THAT(std::abs(u(0, 0)), WithinAbs(0.0, 1e-12));
    CHECK_THAT(std::abs(u(0, 1) - (-kI)), WithinAbs(0.0, 1e-12));
    CHECK_THAT(std::abs(u(1, 0) - (-kI)), WithinAbs(0.0, 1e-12));
    CHECK_THAT(std::abs(u(1, 1)), WithinAbs(0.0, 1e-12));
}

TEST_CASE("period_propagator of a pure loss segment") {
    const Mat2 u = period_propagator(canonical(0.0, 0.7));
    CHECK_THAT(std::abs(u(0, 0) - std::exp(-0.7)), WithinAbs(0.0, 1e-12));
    CHECK_THAT(std::abs(u(1, 1) - 1.0), WithinAbs(0.0, 1e-12));
    CHECK_THAT(std::abs(u(0, 1)), WithinAbs(0.0, 1e-12));
    CHECK_THAT(std::abs(u(1, 0)), WithinAbs(0.0, 1e-12));
}

TEST_CASE("period_propagator matches the closed form entrywise") {
    const Mat2 u = period_propagator(canonical(0.1, 0.2));
    const Mat2 expected = closed_form_u(0.1, 0.2);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK_THAT(std::abs(u.a[i] - expected.a[i]), WithinAbs(0.0, 1e-12));
}

TEST_CASE("propagator determinant accounts for the integrated loss") {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> d(0.0, 2.0);
    std::uniform_int_distribution<int> nseg(1, 6);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<PulseSegment> segs;
        const int n = nseg(rng);
        for (int k = 0; k < n; ++k) segs.push_back({d(rng), d(rng), 0.05 + d(rng)});
        const PulseProtocol p(std::move(segs));
        const Complex dt = det(period_propagator(p));
        const double expected = std::exp(-p.integrated_loss());
        CHECK_THAT(std::abs(dt - expected), WithinAbs(0.0, 1e-10 * std::max(1.0, expected)));
    }
}

TEST_CASE("discriminant values at labeled points") {
    // frozen from direct high-precision evaluation
    CHECK_THAT(discriminant({0.5, 0.3}), WithinRel(0.960072981822779, 1e-12));
    CHECK_THAT(discriminant({0.05, 0.3}), WithinRel(1.02203022192773, 1e-12));
    CHECK(discriminant({0.5, 0.3}) < 1.0);
    CHECK(discriminant({0.05, 0.3}) > 1.0);
}

TEST_CASE("discriminant never exceeds 1 in the unitary limit") {
    for (double w = 0.0; w < 7.0; w += 0.1) CHECK(discriminant({w, 0.0}) <= 1.0);
}

TEST_CASE("discriminant survives very large strengths via log space") {
    const double d = discriminant({std::numbers::pi, 800.0});  // cos = 0 exactly? no: cos(pi/2)=6e-17
    CHECK((std::isfinite(d) || std::isinf(d)));
    CHECK(!std::isnan(d));
    CHECK(discriminant({0.1, 1000.0}) > 1.0);
    // continuity of the log-space branch against the direct branch
    CHECK_THAT(discriminant({0.3, 700.0 + 1e-9}), WithinRel(discriminant({0.3, 700.0}), 1e-6));
}

TEST_CASE("classify reproduces the labeled parameter sets") {
    for (double g : {0.01, 0.05}) CHECK(classify({0.1, g}) == PhaseLabel::PTSP);
    for (double g : {0.2, 0.5}) CHECK(classify({0.1, g}) == PhaseLabel::PTBP);
    for (double g : {0.0040, 0.0140}) CHECK(classify({0.05, g}) == PhaseLabel::PTSP);
    for (double g : {0.40, 0.80}) CHECK(classify({0.05, g}) == PhaseLabel::PTBP);
    // derived closed-form EP: cosh(g/2) = sqrt(2) at omega_t0 = pi/2
    CHECK(classify({0.5 * std::numbers::pi, 1.76274717403909}, 1e-9) == PhaseLabel::EP);
}

TEST_CASE("floquet_spectrum of a unitary protocol") {
    const auto s = floquet_spectrum(canonical(0.3, 0.0));
    CHECK_THAT(std::abs(s.multiplier_plus), WithinAbs(1.0, 1e-12));
    CHECK_THAT(std::abs(s.multiplier_minus), WithinAbs(1.0, 1e-12));
    CHECK(s.phase == PhaseLabel::PTSP);
    // quasi-energies are real, +/- omega_t0 / (2T)
    CHECK_THAT(std::abs(s.quasi_energy_plus.imag()), WithinAbs(0.0, 1e-12));
    const double expected = 0.5 * 0.3 / s.period;
    const double e1 = s.quasi_energy_plus.real(), e2 = s.quasi_energy_minus.real();
    CHECK_THAT(std::abs(e1), WithinRel(expected, 1e-10));
    CHECK_THAT(std::abs(e2), WithinRel(expected, 1e-10));
    CHECK_THAT(e1 + e2, WithinAbs(0.0, 1e-12));
}

TEST_CASE("multipliers satisfy the trace and determinant identities") {
    const auto s = floquet_spectrum(canonical(0.5, 0.3));
    const Complex prod = s.multiplier_plus * s.multiplier_minus;
    const Complex sum = s.multiplier_plus + s.multiplier_minus;
    CHECK_THAT(std::abs(prod - std::exp(-0.3)), WithinAbs(0.0, 1e-10));
    CHECK_THAT(std::abs(sum - std::cos(0.25) * (1.0 + std::exp(-0.3))), WithinAbs(0.0, 1e-10));
}

TEST_CASE("multiplier moduli structure in each phase") {
    // PTSP: both moduli equal exp(-gamma_t1 / 2)
    const auto sp = floquet_spectrum(canonical(0.5, 0.3));
    CHECK(sp.phase == PhaseLabel::PTSP);
    CHECK_THAT(std::abs(sp.multiplier_plus), WithinRel(std::exp(-0.15), 1e-10));
    CHECK_THAT(std::abs(sp.multiplier_minus), WithinRel(std::exp(-0.15), 1e-10));
    // PTBP: both multipliers real with distinct moduli
    const auto sb = floquet_spectrum(canonical(0.1, 0.5));
    CHECK(sb.phase == PhaseLabel::PTBP);
    CHECK(std::abs(sb.multiplier_plus.imag()) <= 1e-10 * std::abs(sb.multiplier_plus));
    CHECK(std::abs(sb.multiplier_minus.imag()) <= 1e-10 * std::abs(sb.multiplier_minus));
    CHECK(std::abs(sb.multiplier_plus) > std::abs(sb.multiplier_minus));
}

TEST_CASE("moduli classification agrees with the discriminant route") {
    std::mt19937 rng(43);
    std::uniform_real_distribution<double> dw(0.0, std::numbers::pi), dg(0.0, 5.0);
    int checked = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        const DimensionlessPoint pt{dw(rng), dg(rng)};
        const double d = discriminant(pt);
        if (std::abs(d - 1.0) <= 1e-9) continue;  // EP band excluded
        const auto s = floquet_spectrum(canonical_protocol(pt, 1.0, 1.0));
        CHECK(s.phase == (d < 1.0 ? PhaseLabel::PTSP : PhaseLabel::PTBP));
        ++checked;
    }
    CHECK(checked > 1900);
}

TEST_CASE("ep_boundary closed-form values") {
    CHECK_THAT(ep_boundary(0.1), WithinRel(0.100041692727259, 1e-12));
    CHECK_THAT(ep_boundary(0.5 * std::numbers::pi),
               WithinRel(2.0 * std::acosh(std::sqrt(2.0)), 1e-12));
    // small-angle limit recovers the static boundary gamma = Omega
    CHECK_THAT(ep_boundary(1e-3) / 1e-3, WithinAbs(1.0, 1e-6));
    CHECK(classify({0.1, ep_boundary(0.1)}, 1e-9) == PhaseLabel::EP);
}

TEST_CASE("ep_boundary domain errors") {
    CHECK_THROWS_AS(ep_boundary(0.0), std::domain_error);
    CHECK_THROWS_AS(ep_boundary(std::numbers::pi), std::domain_error);
    CHECK_THROWS_AS(ep_boundary(4.0), std::domain_error);
}

TEST_CASE("discriminant is 2*pi periodic in the measurement interval") {
    std::mt19937 rng(47);
    std::uniform_real_distribution<double> dw(0.0, 2.0 * std::numbers::pi), dg(0.0, 3.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double w = dw(rng), g = dg(rng);
        CHECK_THAT(discriminant({w + 2.0 * std::numbers::pi, g}),
                   WithinAbs(discriminant({w, g}), 1e-12 * std::max(1.0, discriminant({w, g}))));
    }
}

TEST_CASE("kappa_from_point matches the spectrum of the propagator") {
    std::mt19937 rng(53);
    std::uniform_real_distribution<double> dw(0.01, 3.0), dg(0.01, 3.0);
    for (int trial = 0; trial < 100; ++trial) {
        const DimensionlessPoint pt{dw(rng), dg(rng)};
        const auto s = floquet_spectrum(canonical_protocol(pt, 1.0, 1.0));
        const double kappa = -2.0 * std::log(std::abs(s.multiplier_plus));
        CHECK_THAT(kappa_from_point(pt), WithinAbs(kappa, 1e-9 * std::max(1.0, kappa)));
    }
}

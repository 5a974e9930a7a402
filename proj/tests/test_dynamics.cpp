#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "fptsim/dynamics.hpp"

using namespace fptsim;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

PulseProtocol canonical(double omega_t0, double gamma_t1) {
    return canonical_protocol({omega_t0, gamma_t1}, 1.0, 1.0);
}

// index of the first strict interior local minimum, or -1
long first_local_min(const std::vector<TrajectorySample>& s,
                     double (*get)(const TrajectorySample&)) {
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        if (get(s[i]) < get(s[i - 1]) && get(s[i]) < get(s[i + 1])) return static_cast<long>(i);
    }
    return -1;
}

}  // namespace

TEST_CASE("stroboscopic run at n = 0") {
    const auto traj = stroboscopic_run(canonical(0.1, 0.3), InitialState::ground(), 0);
    REQUIRE(traj.samples.size() == 1);
    CHECK(traj.samples[0].p0_raw == 1.0);
    CHECK(traj.samples[0].norm == 1.0);
    CHECK(!traj.truncated);
}

TEST_CASE("unitary stroboscopic run reproduces the Rabi formula") {
    const auto traj = stroboscopic_run(canonical(0.1, 0.0), InitialState::ground(), 200);
    for (const auto& s : traj.samples) {
        const double expected = std::pow(std::cos(0.05 * static_cast<double>(s.n)), 2);
        CHECK_THAT(s.p0_raw, WithinAbs(expected, 1e-10));
        CHECK_THAT(s.norm, WithinAbs(1.0, 1e-10));
    }
}

TEST_CASE("norm conservation over many unitary periods") {
    const auto traj = stroboscopic_run(canonical(0.37, 0.0), InitialState::ground(), 10000);
    CHECK_THAT(traj.samples.back().norm, WithinAbs(1.0, 1e-10));
}

TEST_CASE("PTBP stroboscopic decay is monotone") {
    const auto traj = stroboscopic_run(canonical(0.1, 0.5), InitialState::ground(), 300);
    for (std::size_t i = 3; i + 1 < traj.samples.size(); ++i)
        CHECK(traj.samples[i + 1].p0_raw <= traj.samples[i].p0_raw + 1e-15);
}

TEST_CASE("PTSP raw survival has a strict interior local minimum") {
    // Rabi period in periods: 2*pi / omega_t0
    const auto traj = stroboscopic_run(canonical(0.1, 0.05), InitialState::ground(), 130);
    CHECK(first_local_min(traj.samples, [](const TrajectorySample& s) { return s.p0_raw; }) > 0);
}

TEST_CASE("trajectory populations are consistent") {
    const auto traj = stroboscopic_run(canonical(0.3, 0.2), InitialState::ground(), 100);
    double prev_norm = 1.0;
    for (const auto& s : traj.samples) {
        CHECK_THAT(s.p0_norm + s.p1_norm, WithinAbs(1.0, 1e-10));
        CHECK(s.norm <= prev_norm + 1e-12);  // loss only
        prev_norm = s.norm;
    }
}

TEST_CASE("deep decay truncates with a marker") {
    const auto traj = stroboscopic_run(canonical(3.0, 50.0), InitialState::ground(), 5000);
    CHECK(traj.truncated);
    CHECK(traj.samples.size() < 5001);
}

TEST_CASE("continuous run with no loss is a Rabi oscillation") {
    const ContinuousModel m(1.0, 0.0);
    const auto traj = continuous_run(m, InitialState::ground(), 12.0, 0.05);
    for (const auto& s : traj.samples)
        CHECK_THAT(s.p0_raw, WithinAbs(std::pow(std::cos(0.5 * s.t), 2), 1e-10));
}

TEST_CASE("static PTSP oscillation frequency is sqrt(Omega^2 - gamma^2)/2") {
    // normalized populations of the PT block return after 2*pi/sqrt(...)
    const double omega = 1.0, gamma = 0.5;
    const double period = 2.0 * std::numbers::pi / std::sqrt(omega * omega - gamma * gamma);
    const ContinuousModel m(omega, gamma);
    const auto traj = continuous_run(m, InitialState::ground(), period, period / 400.0);
    CHECK_THAT(traj.samples.back().p0_norm, WithinAbs(1.0, 1e-6));
    // and it dips in between
    CHECK(first_local_min(traj.samples, [](const TrajectorySample& s) { return s.p0_norm; }) > 0);
}

TEST_CASE("static PTBP normalized population is monotone after the transient") {
    const ContinuousModel m(1.0, 2.0);
    const auto traj = continuous_run(m, InitialState::ground(), 30.0, 0.1);
    for (std::size_t i = 20; i + 1 < traj.samples.size(); ++i)
        CHECK(traj.samples[i + 1].p0_norm <= traj.samples[i].p0_norm + 1e-12);
}

TEST_CASE("effective decay rate from the dominant multiplier") {
    // frozen oracle values: -2 ln|eta_+| of the closed-form propagator
    CHECK_THAT(effective_decay_rate(canonical(0.1, 0.2)).kappa_multiplier,
               WithinRel(0.026891122988142, 1e-9));
    CHECK_THAT(effective_decay_rate(canonical(0.1, 0.5)).kappa_multiplier,
               WithinRel(0.010313881705840, 1e-9));
    CHECK(effective_decay_rate(canonical(0.1, 0.0)).kappa_multiplier == 0.0);
}

TEST_CASE("fitted decay rate matches the multiplier rate in PTBP") {
    for (double g : {0.2, 0.5, 1.0}) {
        const auto est = effective_decay_rate(canonical(0.1, g));
        REQUIRE(est.kappa_fit.has_value());
        CHECK_THAT(*est.kappa_fit, WithinRel(est.kappa_multiplier, 0.05));
    }
}

TEST_CASE("Zeno freezing: decay rate decreases with measurement strength") {
    double prev = std::numeric_limits<double>::infinity();
    const double w = 0.1;
    const double g0 = ep_boundary(w);
    for (int k = 0; k < 20; ++k) {
        const double g = g0 + (5.0 - g0) * (k + 1) / 20.0;
        const double kappa = effective_decay_rate(canonical(w, g)).kappa_multiplier;
        CHECK(kappa < prev);
        prev = kappa;
    }
}

TEST_CASE("three-level run reduces to Rabi when decoupled") {
    const ThreeLevelModel m(1.0, 0.0, 0.0);
    const auto traj = three_level_run(m, InitialState3::ground(), 10.0, 0.1);
    for (const auto& s : traj.samples) {
        CHECK_THAT(s.p0_raw, WithinAbs(std::pow(std::cos(0.5 * s.t), 2), 1e-10));
        CHECK_THAT(s.p2_raw, WithinAbs(0.0, 1e-12));
    }
}

TEST_CASE("strong damping empties the excited level at rate 2*gamma_eff") {
    const ThreeLevelModel m(0.0, 2.0, 40.0);
    const double geff = m.gamma_eff();  // 0.05
    const double t_probe = 20.0;
    const auto traj = three_level_run(m, InitialState3::excited(), t_probe, t_probe / 200.0);
    const double p1_end = traj.samples.back().p1_raw;
    const double expected = std::exp(-2.0 * geff * t_probe);
    CHECK_THAT(p1_end, WithinRel(expected, 0.05));
}

TEST_CASE("reduction report at the source-model magnitudes") {
    const double omega = 2.0 * std::numbers::pi * 0.1;
    const double omega_prime = 2.0 * std::numbers::pi * 1.0;
    const double Gamma = 22.0;
    const ThreeLevelModel m(omega, omega_prime, Gamma);
    const auto rep = validate_reduction(m, 2.0 * std::numbers::pi / omega);
    CHECK(rep.validity_ok);
    CHECK_THAT(rep.gamma_eff, WithinRel(omega_prime * omega_prime / (2.0 * Gamma), 1e-15));
    CHECK(rep.sup_error <= 0.05);
}

TEST_CASE("reduction report trivial cases") {
    const auto rep = validate_reduction(ThreeLevelModel(1.0, 0.0, 50.0), 6.0);
    CHECK(rep.gamma_eff == 0.0);
    CHECK(rep.sup_error <= 1e-10);
    CHECK_THAT(ThreeLevelModel(1.0, 20.0, 100.0).gamma_eff() * 2.0,
               WithinRel(ThreeLevelModel(1.0, 20.0, 50.0).gamma_eff(), 1e-15));
}

TEST_CASE("piecewise run resolves segments and conserves norm without loss") {
    const auto p = square_wave_protocol(1.0, 0.0, 0.5);
    const auto traj = piecewise_run(p, InitialState::ground(), 3, 4);
    CHECK(traj.samples.size() == 1 + 3 * 2 * 4);
    for (const auto& s : traj.samples) CHECK_THAT(s.norm, WithinAbs(1.0, 1e-10));
}

TEST_CASE("trotter refinement converges to the continuous model") {
    // canonical protocol with 50% duty; averaged rates match (Omega=1, gamma=0.5)
    const ContinuousModel target(1.0, 0.5);
    const double t_rabi = 2.0 * std::numbers::pi;
    double prev_err = std::numeric_limits<double>::infinity();
    for (int k : {8, 16, 32, 64}) {
        const double T = t_rabi / k;
        const PulseProtocol p({{2.0, 0.0, 0.5 * T}, {0.0, 1.0, 0.5 * T}});
        const auto strobe = stroboscopic_run(p, InitialState::ground(), k);
        double err = 0.0;
        for (const auto& s : strobe.samples) {
            const auto cont = continuous_run(target, InitialState::ground(), s.t,
                                             s.t > 0 ? s.t : 1.0);
            err = std::max(err, std::abs(s.p0_raw - cont.samples.back().p0_raw));
        }
        CHECK(err < prev_err);
        prev_err = err;
    }
    CHECK(prev_err <= 1e-3);
}

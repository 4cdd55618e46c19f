#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "decoupler/error.hpp"
#include "decoupler/simulator.hpp"

using namespace decoupler;

namespace {

constexpr double kPi = std::numbers::pi;

DeviceModel chain_device(int n) {
    DeviceModel d;
    d.n_qubits = n;
    for (int q = 0; q + 1 < n; ++q) d.edges.push_back({q, q + 1, 2.0});
    d.omega01.assign(static_cast<std::size_t>(n), 5000.0);
    d.omega12.assign(static_cast<std::size_t>(n), 4670.0);
    normalize_noise(d);
    return d;
}

DeviceTiming zero_1q_timing() {
    DeviceTiming t;
    t.gate_ns["H"] = 0;
    return t;
}

// |+> on q1 idles while q0 is measured, then is read out in the X basis.
ScheduledCircuit plus_during_mcm() {
    DynamicCircuit c(2, 2);
    c.h(1).measure(0, 0).barrier({0, 1}).h(1).measure(1, 1);
    return build_schedule(c, zero_1q_timing());
}

double survival(const ProbabilityMap& p, int bit) {
    double s = 0.0;
    for (const auto& [k, v] : p) {
        if (k[k.size() - 1 - static_cast<std::size_t>(bit)] == '0') s += v;
    }
    return s;
}

}  // namespace

TEST(RunShots, BornRule) {
    DynamicCircuit c(1, 1);
    c.h(0).measure(0, 0);
    const auto d = run_shots(build_schedule(c, {}), {}, chain_device(1), 100000, 1);
    const double p0 = d.probability("0");
    EXPECT_GE(p0, 0.494);
    EXPECT_LE(p0, 0.506);
}

TEST(RunShots, PiPhaseFlipsPlus) {
    auto dev = chain_device(2);
    dev.noise.zphase_rate.push_back({0, 1, kPi / 1000.0});
    const auto d = run_shots(plus_during_mcm(), {}, dev, 200, 3);
    EXPECT_DOUBLE_EQ(d.prob_zero(1), 0.0);
}

TEST(Exact, ZPhaseMatchesCosineLaw) {
    auto dev = chain_device(2);
    const double nu = 1.3e-3;
    dev.noise.zphase_rate.push_back({0, 1, nu});
    const auto p = exact_distribution(plus_during_mcm(), {}, dev);
    EXPECT_NEAR(survival(p, 1), std::pow(std::cos(nu * 1000.0 / 2), 2), 1e-12);
}

TEST(Exact, TogglingFrameCancellation) {
    auto dev = chain_device(2);
    dev.noise.zphase_rate.push_back({0, 1, 2.1e-3});
    const std::vector<PulseEvent> pulses{{1, 500, PulseLabel::X_p}, {1, 1000, PulseLabel::X_m}};
    const auto p = exact_distribution(plus_during_mcm(), pulses, dev);
    EXPECT_NEAR(survival(p, 1), 1.0, 1e-12);
}

TEST(Exact, ZZNeedsStaggering) {
    auto dev = chain_device(3);
    const double zeta = kPi / 1000.0;
    dev.noise.zz_rate = {0.0, zeta};
    DynamicCircuit c(3, 3);
    c.h(1).h(2).measure(0, 0).barrier({0, 1, 2}).h(1).h(2).measure(1, 1).measure(2, 2);
    const auto s = build_schedule(c, zero_1q_timing());

    const std::vector<PulseEvent> simultaneous{{1, 500, PulseLabel::X_p}, {2, 500, PulseLabel::X_p},
                                               {1, 1000, PulseLabel::X_p}, {2, 1000, PulseLabel::X_p}};
    const auto ps = exact_distribution(s, simultaneous, dev);
    // Z_a Z_b survives with angle zeta*T/2 = pi/2.
    EXPECT_NEAR(ps.at("000"), 0.5, 1e-12);

    const std::vector<PulseEvent> staggered{{1, 250, PulseLabel::X_p}, {1, 750, PulseLabel::X_m},
                                            {2, 500, PulseLabel::X_p}, {2, 1000, PulseLabel::X_m}};
    const auto pg = exact_distribution(s, staggered, dev);
    EXPECT_NEAR(pg.at("000"), 1.0, 1e-12);
}

TEST(Exact, ReadoutErrorFeedsForward) {
    auto dev = chain_device(2);
    dev.noise.readout_error = {0.1, 0.0};
    DynamicCircuit c(2, 2);
    c.x(0).measure(0, 0).c_if(make_gate(GateKind::X, 1), 0).measure(1, 1);
    const auto p = exact_distribution(build_schedule(c, {}), {}, dev);
    EXPECT_NEAR(p.at("11"), 0.9, 1e-12);
    EXPECT_NEAR(p.at("00"), 0.1, 1e-12);
    EXPECT_EQ(p.size(), 2u);
}

TEST(Exact, DeferredReadoutFlip) {
    auto dev = chain_device(1);
    dev.noise.readout_error = {0.02};
    DynamicCircuit c(1, 1);
    c.measure(0, 0);
    const auto p = exact_distribution(build_schedule(c, {}), {}, dev);
    EXPECT_NEAR(p.at("1"), 0.02, 1e-15);
}

TEST(Exact, GhzThree) {
    DynamicCircuit c(3, 3);
    c.h(0).cx(0, 1).cx(1, 2).measure(0, 0).measure(1, 1).measure(2, 2);
    const auto p = exact_distribution(build_schedule(c, {}));
    ASSERT_EQ(p.size(), 2u);
    EXPECT_NEAR(p.at("000"), 0.5, 1e-14);
    EXPECT_NEAR(p.at("111"), 0.5, 1e-14);
}

TEST(Exact, BranchExplosion) {
    DynamicCircuit c(4, 4);
    for (int q = 0; q < 4; ++q) c.h(q).measure(q, q);
    SimOptions opt;
    opt.max_branches = 8;
    try {
        exact_distribution(build_schedule(c, {}), opt);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::BranchExplosion);
    }
}

TEST(RunShots, ConvergesToExact) {
    auto dev = chain_device(3);
    dev.noise.zphase_rate = {{0, 1, 9e-4}, {0, 2, 4e-4}};
    dev.noise.zz_rate = {0.0, 3e-4};
    dev.noise.readout_error = {0.03, 0.01, 0.02};
    DynamicCircuit c(3, 3);
    c.h(0).h(1).h(2).measure(0, 0).c_if(make_gate(GateKind::Z, 1), 0).barrier({0, 1, 2});
    c.h(1).h(2).measure(1, 1).measure(2, 2);
    const auto s = build_schedule(c, {});
    const auto exact = exact_distribution(s, {}, dev);
    const auto sampled = run_shots(s, {}, dev, 100000, 9);
    EXPECT_LT(tv_distance(exact, sampled.probabilities()), 0.01);
}

TEST(RunShots, ThreadInvariantAndDeterministic) {
    auto dev = chain_device(3);
    dev.noise.zphase_rate = {{0, 1, 9e-4}};
    dev.noise.readout_error = {0.05, 0.02, 0.02};
    dev.noise.pulse_error = 0.01;
    dev.noise.t2_dephasing_rate = {1e-5, 1e-5, 1e-5};
    DynamicCircuit c(3, 3);
    c.h(1).h(2).measure(0, 0).c_if(make_gate(GateKind::X, 2), 0).barrier({0, 1, 2}).h(1).measure(1, 1).measure(2, 2);
    const auto s = build_schedule(c, {});
    const std::vector<PulseEvent> pulses{{1, 400, PulseLabel::Y_p}, {1, 900, PulseLabel::Y_m}};
    SimOptions one;
    SimOptions many;
    many.threads = 3;
    const auto a = run_shots(s, pulses, dev, 2000, 77, one);
    const auto b = run_shots(s, pulses, dev, 2000, 77, many);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, run_shots(s, pulses, dev, 2000, 77, one));
    EXPECT_NE(a, run_shots(s, pulses, dev, 2000, 78, one));
}

TEST(RunShots, Errors) {
    const auto s = plus_during_mcm();
    EXPECT_THROW(run_shots(s, {{1, 5000, PulseLabel::X_p}}, chain_device(2), 10, 1), Error);
    try {
        run_shots(s, {}, chain_device(1), 10, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::QubitCountMismatch);
    }
    try {
        run_shots(s, {{0, 500, PulseLabel::X_p}}, chain_device(2), 10, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::PulseOutsideWindow);
    }
}

TEST(Collision, ResonantSwap) {
    const auto u = collision_unitary(0.0, 1.0, kPi / 2);
    StateVector sv(2);
    sv.apply_x(0);  // |m=1, u=0>
    sv.apply_2q(0, 1, u);
    EXPECT_NEAR(std::abs(sv[2] - std::complex<double>(0, -1)), 0.0, 1e-12);
    EXPECT_NEAR(sv.norm(), 1.0, 1e-12);
}

TEST(Collision, NoCouplingKeepsPopulations) {
    const auto u = collision_unitary(0.7, 0.0, 3.3);
    StateVector sv(2);
    sv.apply_1q(0, gate_h());
    sv.apply_1q(1, gate_h());
    const auto before = sv.probabilities();
    sv.apply_2q(0, 1, u);
    const auto after = sv.probabilities();
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(before[i], after[i], 1e-12);
}

TEST(Collision, UnitaryForGeneralParameters) {
    const auto u = collision_unitary(0.4, 0.9, 2.7);
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            std::complex<double> acc = 0;
            for (int k = 0; k < 4; ++k) acc += std::conj(u[static_cast<std::size_t>(4 * k + r)]) * u[static_cast<std::size_t>(4 * k + c)];
            EXPECT_NEAR(std::abs(acc - (r == c ? 1.0 : 0.0)), 0.0, 1e-12);
        }
    }
}

TEST(IdleNoise, FullRotationIsIdentity) {
    auto dev = chain_device(2);
    dev.noise.zphase_rate.push_back({0, 1, 2 * kPi / 1000.0});
    StateVector sv(2);
    sv.apply_1q(1, gate_h());
    const StateVector before = sv;
    evolve_idle_noise(sv, {1}, 0, 1000, dev, {0});
    EXPECT_NEAR(fidelity(before, sv), 1.0, 1e-12);
    EXPECT_NEAR(sv.norm(), 1.0, 1e-12);
}

TEST(Pulse, InversePairsAndIdentity) {
    Rng rng(1);
    StateVector sv(1);
    sv.apply_1q(0, gate_sx());
    sv.apply_rz(0, 0.4);
    const StateVector before = sv;
    apply_pulse(sv, 0, PulseLabel::X_p, 0.0, rng);
    apply_pulse(sv, 0, PulseLabel::X_m, 0.0, rng);
    EXPECT_NEAR(fidelity(before, sv), 1.0, 1e-12);
    apply_pulse(sv, 0, PulseLabel::I_m, 0.0, rng);
    EXPECT_NEAR(fidelity(before, sv), 1.0, 1e-12);

    StateVector zero(1);
    apply_pulse(zero, 0, PulseLabel::Z_p, 0.0, rng);
    EXPECT_NEAR(zero.prob_one(0), 0.0, 1e-15);
}

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "decoupler/error.hpp"
#include "decoupler/qft.hpp"
#include "decoupler/simulator.hpp"

using namespace decoupler;

namespace {

DeviceModel chain_device(int n) {
    DeviceModel d;
    d.n_qubits = n;
    for (int q = 0; q + 1 < n; ++q) d.edges.push_back({q, q + 1, 2.0});
    d.omega01.assign(static_cast<std::size_t>(n), 5000.0);
    d.omega12.assign(static_cast<std::size_t>(n), 4670.0);
    normalize_noise(d);
    return d;
}

// Dense oracle: |QFT psi|^2, reindexed from output y to the recorded value
// sum_m c_m 2^m where c_m is the measured bit of position m (c_m = bit m of y).
ProbabilityMap dense_distribution(const DynamicCircuit& prep, int n) {
    const auto psi = simulate_unitary(prep);
    const auto out = dense_qft_output(psi.amplitudes(), n);
    ProbabilityMap p;
    for (std::size_t y = 0; y < out.size(); ++y) {
        const double v = std::norm(out[y]);
        if (v > 1e-15) p[to_bitstring(y, n)] = v;
    }
    return p;
}

}  // namespace

TEST(QftM, Structure) {
    const auto c = build_qft_m(4);
    EXPECT_EQ(c.n_qubits, 4);
    EXPECT_EQ(c.n_clbits, 4);
    int conditionals = 0;
    for (const auto& inst : c.instructions) {
        if (const auto* cond = std::get_if<Conditional>(&inst)) {
            ++conditionals;
            EXPECT_EQ(cond->gate.kind, GateKind::Rk);
            EXPECT_EQ(cond->gate.k, cond->gate.target - cond->clbit + 1);
        }
    }
    EXPECT_EQ(conditionals, 6);
    EXPECT_THROW(build_qft_m(0), Error);
}

TEST(QftM, InvertsDaggerBasis) {
    for (int n : {1, 3, 5}) {
        for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
            const auto p = exact_distribution(build_schedule(build_proc_fidelity_circuit(n, s), {}));
            EXPECT_NEAR(p.at(to_bitstring(s, n)), 1.0, 1e-12) << "n=" << n << " s=" << s;
        }
    }
}

TEST(QftM, MatchesDenseOracle) {
    // Random-ish product and entangled inputs.
    for (int trial = 0; trial < 4; ++trial) {
        const int n = 4;
        DynamicCircuit prep(n, 0);
        for (Qubit q = 0; q < n; ++q) prep.h(q).rz(q, 0.37 * (q + 1) + trial);
        prep.cx(0, 1).cx(2, 3);
        if (trial % 2) prep.sx(1).cx(1, 2);
        const auto expected = dense_distribution(prep, n);

        DynamicCircuit full = prep;
        full.n_clbits = n;
        append_qft_m(full, {0, 1, 2, 3}, {0, 1, 2, 3});
        const auto got = exact_distribution(build_schedule(full, {}));
        EXPECT_LT(tv_distance(expected, got), 1e-10) << "trial " << trial;
    }
}

TEST(Ghz, PeakMatchesClosedForm) {
    const int n = 10;
    for (int m = 0; m < n; ++m) {
        const GhzSpec spec{n, m};
        const auto p = dense_distribution(build_ghz_psi_m(spec), n);
        const std::uint64_t peak = std::uint64_t{1} << (n - 1 - m);
        const double got = p.count(to_bitstring(peak, n)) ? p.at(to_bitstring(peak, n)) : 0.0;
        EXPECT_NEAR(got, peak_amplitude_closed_form(m), 1e-10) << "m=" << m;
        EXPECT_GT(got, 2.0 / (std::numbers::pi * std::numbers::pi));
    }
    EXPECT_NEAR(peak_amplitude_closed_form(0), 0.5, 1e-15);
    EXPECT_NEAR(peak_amplitude_closed_form(1), 0.25, 1e-12);
    EXPECT_NEAR(peak_amplitude_closed_form(30), 2.0 / (std::numbers::pi * std::numbers::pi), 1e-12);
}

TEST(Ghz, SemiclassicalMatchesDense) {
    const GhzSpec spec{6, 2};
    const auto expected = dense_distribution(build_ghz_psi_m(spec), 6);
    const auto got = exact_distribution(build_schedule(build_ghz_qft_circuit(spec), {}));
    EXPECT_LT(tv_distance(expected, got), 1e-10);
}

TEST(Snr, Definition) {
    const int n = 3;
    ProbabilityMap p;
    p[to_bitstring(4, n)] = 0.5;  // peak for m = 0
    p[to_bitstring(4, n)] += 0.0;
    p[to_bitstring(1, n)] = 0.5;
    const auto r = compute_snr(p, n, 0);
    // mirror 8 - 4 = 4 is the same outcome.
    EXPECT_DOUBLE_EQ(r.p_peak, 0.5);
    EXPECT_DOUBLE_EQ(r.p_mirror, 0.5);
    double mean = 1.0 / 8;
    double var = (2 * (0.5 - mean) * (0.5 - mean) + 6 * mean * mean) / 8;
    EXPECT_NEAR(r.snr, 1.0 / (2 * std::sqrt(var)), 1e-12);
    EXPECT_FALSE(r.zero_variance);

    ProbabilityMap flat;
    for (std::uint64_t v = 0; v < 8; ++v) flat[to_bitstring(v, n)] = 0.125;
    const auto z = compute_snr(flat, n, 1);
    EXPECT_TRUE(z.zero_variance);
    EXPECT_EQ(z.snr, 0.0);
    EXPECT_THROW(compute_snr(flat, n, 3), Error);
}

TEST(Snr, IdealValuesAtTen) {
    // Reference values from an independent FFT of the parity-state amplitudes.
    const double expected[10] = {31.814251975, 22.247238634, 21.905154958, 21.898581037, 21.988578786,
                                 21.935638277, 22.014726351, 21.903857410, 22.078610972, 21.799658129};
    for (int m = 0; m < 10; ++m) {
        const auto p = dense_distribution(build_ghz_psi_m({10, m}), 10);
        EXPECT_NEAR(compute_snr(p, 10, m).snr, expected[m], 1e-6) << "m=" << m;
    }
}

TEST(Snr, MirrorSymmetry) {
    const int n = 8;
    const auto p = dense_distribution(build_ghz_psi_m({n, 3}), n);
    for (std::uint64_t s = 1; s < (1U << n); ++s) {
        const auto a = p.count(to_bitstring(s, n)) ? p.at(to_bitstring(s, n)) : 0.0;
        const auto b = p.count(to_bitstring((1U << n) - s, n)) ? p.at(to_bitstring((1U << n) - s, n)) : 0.0;
        EXPECT_NEAR(a, b, 1e-12);
    }
}

TEST(ProcFidelity, NoiselessIsOne) {
    QftExperimentOptions opt;
    opt.shots = 200;
    const auto r = compute_proc_fidelity(5, 4, DdMode::none(), chain_device(5), 9, opt);
    EXPECT_EQ(r.s_values.size(), 4U);
    EXPECT_DOUBLE_EQ(r.f_proc, 1.0);
    const auto again = compute_proc_fidelity(5, 4, DdMode::none(), chain_device(5), 9, opt);
    EXPECT_EQ(again.s_values, r.s_values);
}

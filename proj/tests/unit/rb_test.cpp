#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "decoupler/clifford.hpp"
#include "decoupler/error.hpp"
#include "decoupler/rb.hpp"
#include "decoupler/rb_fit.hpp"
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

std::vector<double> model(double A, double alpha, double B, const std::vector<double>& l) {
    std::vector<double> p;
    for (double x : l) p.push_back(A * std::pow(alpha, x) + B);
    return p;
}

Mat2 mul(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

}  // namespace

TEST(Clifford, GroupStructure) {
    const auto& g = CliffordGroup::get();
    EXPECT_TRUE(equal_up_to_phase(g.matrix(0), {1.0, 0.0, 0.0, 1.0}));
    for (int a = 0; a < CliffordGroup::kSize; ++a) {
        EXPECT_EQ(g.compose(a, g.inverse(a)), 0);
        // The word reproduces the stored matrix.
        Mat2 m{1.0, 0.0, 0.0, 1.0};
        for (const auto& gate : g.word(a)) m = mul(gate_matrix(gate), m);
        EXPECT_TRUE(equal_up_to_phase(m, g.matrix(a)));
        std::set<int> row;
        for (int b = 0; b < CliffordGroup::kSize; ++b) row.insert(g.compose(a, b));
        EXPECT_EQ(row.size(), 24U);
    }
    for (const auto& gate : {make_gate(GateKind::H, 0), make_gate(GateKind::SX, 0), make_gate(GateKind::Y, 0)}) {
        EXPECT_GE(g.find(gate_matrix(gate)), 0);
    }
    EXPECT_EQ(g.find(gate_matrix(make_rz(0, 0.3))), -1);
}

TEST(Clifford, CompiledGateSet) {
    const auto& g = CliffordGroup::get();
    for (int a = 0; a < CliffordGroup::kSize; ++a) {
        for (const auto& gate : g.word(a)) EXPECT_NE(gate.kind, GateKind::CX);
        EXPECT_LE(g.word(a).size(), 3U);
    }
}

TEST(RbFit, RecoversExactModel) {
    const std::vector<double> l{0, 1, 2, 3, 4, 5, 10, 15, 20, 35};
    const auto fit = fit_rb_decay(l, model(0.9, 0.88, 0.1, l));
    EXPECT_NEAR(fit.alpha, 0.88, 1e-6);
    EXPECT_NEAR(fit.epl, 0.06, 1e-6);
    EXPECT_NEAR(fit.A, 0.9, 1e-6);
    EXPECT_NEAR(fit.B, 0.1, 1e-6);
    EXPECT_FALSE(fit.alpha_at_bound);
}

TEST(RbFit, ConstantTableFlagsBound) {
    const std::vector<double> l{2, 4, 6, 8};
    const auto fit = fit_rb_decay(l, {0.7, 0.7, 0.7, 0.7});
    EXPECT_TRUE(fit.alpha_at_bound);
    EXPECT_NEAR(fit.A * std::pow(fit.alpha, 4.0) + fit.B, 0.7, 1e-9);
    EXPECT_THROW(fit_rb_decay({1, 2}, {0.9, 0.8}), Error);
}

TEST(RbFit, BinomialNoiseRecovery) {
    const std::vector<double> l{0, 1, 2, 3, 4, 5, 10, 15, 20, 35};
    Rng rng(5);
    for (double alpha : {0.80, 0.88, 0.95}) {
        int ok = 0;
        const int trials = 50;
        for (int t = 0; t < trials; ++t) {
            std::vector<double> p;
            for (double x : l) {
                const double q = 0.9 * std::pow(alpha, x) + 0.1;
                double mean = 0.0;
                for (int r = 0; r < 7; ++r) {
                    int hits = 0;
                    for (int s = 0; s < 300; ++s) hits += rng.uniform() < q;
                    mean += hits / 300.0;
                }
                p.push_back(mean / 7);
            }
            ok += std::abs(fit_rb_decay(l, p).epl - (1 - alpha) / 2) <= 0.005;
        }
        EXPECT_GE(ok, trials * 9 / 10) << "alpha " << alpha;
    }
}

TEST(Bootstrap, DeterministicAndZeroVariance) {
    RbRawData flat;
    for (int l : {2, 4, 6, 8}) flat[l] = std::vector<double>(10, 0.5 + 0.4 * std::pow(0.9, l));
    const auto a = bootstrap_epl(flat, 20, 5, 1);
    EXPECT_NEAR(a.epl_sigma, 0.0, 1e-12);

    RbRawData noisy;
    Rng rng(3);
    for (int l : {2, 4, 6, 8, 10}) {
        for (int i = 0; i < 20; ++i) noisy[l].push_back(0.5 + 0.4 * std::pow(0.9, l) + 0.03 * (rng.uniform() - 0.5));
    }
    const auto b1 = bootstrap_epl(noisy, 50, 10, 9);
    const auto b2 = bootstrap_epl(noisy, 50, 10, 9);
    EXPECT_EQ(b1.samples, b2.samples);
    EXPECT_GT(b1.epl_sigma, 0.0);
}

TEST(McmRb, StructureAndIdealSurvival) {
    Rng rng(1);
    const auto rb = build_mcm_rb(2, {0}, {1}, 2, rng, 600);
    int measures = 0;
    for (const auto& inst : rb.circuit.instructions) measures += std::holds_alternative<Measure>(inst);
    EXPECT_EQ(measures, 1 + 2);  // one interleaved MCM plus the final readouts
    for (int l : {0, 1, 3, 6}) {
        Rng r(static_cast<std::uint64_t>(l) + 10);
        const auto c = build_mcm_rb(3, {1}, {0, 2}, l, r, 600);
        const auto p = exact_distribution(build_schedule(c.circuit, {}));
        for (const auto& [q, bit] : c.readout) EXPECT_NEAR(marginal(p, {bit}).at("0"), 1.0, 1e-12) << "l=" << l;
    }
}

TEST(DcRb, BlockSemantics) {
    // Z_c1 on |0>: the conditional Z fires but leaves |0> unchanged.
    Rng rng(2);
    for (RbKind kind : {RbKind::DcRbZ, RbKind::DcRbI}) {
        for (int l : {0, 1, 4}) {
            const auto c = build_dc_rb(3, kind, 1, {0, 2}, l, rng);
            const auto p = exact_distribution(build_schedule(c.circuit, {}));
            for (const auto& [q, bit] : c.readout) EXPECT_NEAR(marginal(p, {bit}).at("0"), 1.0, 1e-12);
        }
    }
}

TEST(DcRb, ReadoutErrorBecomesPauliZ) {
    auto dev = chain_device(2);
    dev.noise.readout_error = {0.0, 0.05};
    DynamicCircuit c(2, 2);
    c.h(0);
    append_dc_rb_block(c, RbKind::DcRbZ, 1, {0}, 1);
    c.z(0).h(0).measure(0, 0);
    const auto p = exact_distribution(build_schedule(c, dev.timing), {}, dev);
    EXPECT_NEAR(marginal(p, {0}).at("1"), 0.05, 1e-12);
}

TEST(RunRb, NoiselessSurvivalIsOne) {
    auto spec = RbSpec::dc_rb_defaults(RbKind::DcRbZ);
    spec.lengths = {0, 2, 5};
    spec.n_randomizations = 2;
    spec.shots = 50;
    spec.measured = {1};
    spec.unitaries = {0, 2};
    RbRunOptions opt;
    opt.noiseless = true;
    const auto res = run_rb(spec, chain_device(3), {DdMode::none(), DdMode::of(Baseline::MDD)}, 4, opt);
    ASSERT_EQ(res.size(), 2U);
    for (const auto& mode : res) {
        for (const auto& q : mode.qubits) {
            for (const auto& row : q.table) EXPECT_EQ(row.mean_p0, 1.0);
        }
    }
}

TEST(RunRb, MddBeatsNoDdUnderZPhase) {
    auto dev = chain_device(2);
    dev.noise.zphase_rate.push_back({1, 0, 1.2e-3});
    auto spec = RbSpec::mcm_rb_defaults();
    spec.lengths = {2, 4, 6};
    spec.n_randomizations = 6;
    spec.shots = 200;
    spec.measured = {1};
    spec.unitaries = {0};
    const auto res = run_rb(spec, dev, {DdMode::none(), DdMode::of(Baseline::MDD)}, 11);
    const auto& none = res[0].qubit(0);
    const auto& mdd = res[1].qubit(0);
    for (std::size_t i = 0; i < none.table.size(); ++i) EXPECT_GT(mdd.table[i].mean_p0, none.table[i].mean_p0);
    // Measured-qubit survival does not depend on the DD mode.
    EXPECT_EQ(res[0].qubit(1).raw, res[1].qubit(1).raw);
    const auto csv = rb_results_csv(spec, res);
    EXPECT_EQ(csv.rfind("experiment,qubit,dd_mode,l,randomizations,mean_p0,stderr\n", 0), 0U);
}

TEST(RunRb, SpecValidation) {
    auto spec = RbSpec::dc_rb_defaults(RbKind::DcRbI);
    spec.measured = {0};
    spec.unitaries = {1};
    spec.lengths = {3, 2};
    EXPECT_THROW(validate(spec), Error);
    spec.lengths = {1};
    EXPECT_THROW(validate(spec), Error);
    EXPECT_EQ(RbSpec::dc_rb_defaults(RbKind::DcRbZ).lengths.size(), 10U);
    EXPECT_EQ(RbSpec::mcm_rb_defaults().n_randomizations, 60);
}

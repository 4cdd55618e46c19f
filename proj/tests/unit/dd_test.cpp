#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "decoupler/dd.hpp"
#include "decoupler/error.hpp"
#include "decoupler/qft.hpp"

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

IdleWindow mcm_window(Nanos start, Nanos end, Nanos boundary, Nanos slot) {
    IdleWindow w;
    w.qubit = 1;
    w.start = start;
    w.end = end;
    w.context.during_mcm = true;
    w.context.measured = {0};
    w.context.ff_boundary = boundary;
    w.context.ff_slot = slot;
    return w;
}

DeviceTiming instant_x() {
    DeviceTiming t;
    t.gate_ns["X"] = 0;
    return t;
}

std::vector<Qubit> all_qubits(int n) {
    std::vector<Qubit> v;
    for (Qubit q = 0; q < n; ++q) v.push_back(q);
    return v;
}

// Measure q_m on a chain while every other qubit idles over [0, 1600).
ScheduledCircuit single_mcm(int n, Qubit m) {
    DynamicCircuit c(n, 1);
    for (Qubit q = 0; q < n; ++q) c.x(q);
    c.measure(m, 0).delay(m, 600).barrier(all_qubits(n));
    for (Qubit q = 0; q < n; ++q) c.x(q);
    return build_schedule(c, instant_x());
}

const IdleWindow& window_of(const ScheduledCircuit& s, Qubit q) {
    for (const auto& w : s.idle_windows) {
        if (w.qubit == q && w.context.during_mcm) return w;
    }
    throw std::runtime_error("no window");
}

std::vector<Nanos> times(const std::vector<PulseEvent>& ev) {
    std::vector<Nanos> t;
    for (const auto& e : ev) t.push_back(e.time);
    return t;
}

const std::vector<std::vector<std::string>> kTableSequences = {
    {"X_m", "X_m", "Z_p", "Y_m", "I_m", "X_p", "Z_p", "Z_p"},
    {"Z_p", "I_m", "I_p", "X_m", "Z_p", "Y_m", "X_m", "Y_m"},
    {"Y_p", "Y_m", "I_p", "I_p", "Z_p", "Z_p", "Y_p", "Y_m"},
};

}  // namespace

TEST(Sequence, ProductAndFrameCorrection) {
    for (const auto& labels : kTableSequences) {
        const auto seq = make_sequence(labels);
        const auto fixed = frame_corrected(seq);
        EXPECT_EQ(sequence_product(fixed), Pauli::I) << to_string(seq);
        EXPECT_TRUE(std::equal(seq.pulses.begin(), seq.pulses.end() - 1, fixed.pulses.begin()));
    }
    const auto xx = make_sequence({"X_p", "X_m"});
    EXPECT_EQ(frame_corrected(xx), xx);
    EXPECT_THROW(make_sequence({"Q_p"}), Error);
}

TEST(Sequence, ConstrainedCollision) {
    EXPECT_EQ(to_string(constrained_collision_sequence()), "I_p I_p I_p I_p I_p I_p X_p X_p");
}

TEST(Schedule, UniformGridWithFeedforwardSlot) {
    const auto w = mcm_window(0, 1600, 1000, 1600);
    const auto seq = make_sequence({"X_p", "X_m", "X_p", "X_m", "X_p", "X_m", "X_p", "X_m"});
    const auto ev = schedule_sequence(w, seq);
    EXPECT_EQ(times(ev), (std::vector<Nanos>{125, 250, 375, 500, 625, 750, 875, 1600}));

    ScheduleOptions at_boundary;
    at_boundary.final_slot = FinalSlot::AtBoundary;
    EXPECT_EQ(schedule_sequence(w, seq, at_boundary).back().time, 1000);
}

TEST(Schedule, NoFeedforwardTail) {
    const auto w = mcm_window(200, 1000, 1000, 1000);
    const auto ev = schedule_sequence(w, identity_sequence(4));
    EXPECT_EQ(times(ev), (std::vector<Nanos>{400, 600, 800, 1000}));
}

TEST(Schedule, TooShortAndOutsideMcm) {
    EXPECT_THROW(
        {
            try {
                schedule_sequence(mcm_window(0, 10, 5, 10), identity_sequence(8));
            } catch (const Error& e) {
                EXPECT_EQ(e.code(), Errc::WindowTooShort);
                throw;
            }
        },
        Error);
    IdleWindow plain;
    plain.end = 100;
    EXPECT_THROW(schedule_sequence(plain, identity_sequence(2)), Error);
}

TEST(Schedule, PulsesStayInsideWindows) {
    const auto sched = build_schedule(build_proc_fidelity_circuit(6, 13), {});
    const auto dev = chain_device(6);
    DdMode uniform;
    uniform.kind = DdMode::Kind::Uniform;
    uniform.uniform.sequences = {make_sequence(kTableSequences[0]), make_sequence(kTableSequences[1])};
    for (const auto& mode : {DdMode::of(Baseline::MDD), DdMode::of(Baseline::FFDD), DdMode::of(Baseline::XpXmStaggered),
                             uniform}) {
        const auto pulses = dd_pulses(sched, dev, mode);
        EXPECT_FALSE(pulses.empty()) << mode.name();
        EXPECT_NO_THROW(check_pulses(sched, pulses)) << mode.name();
    }
}

TEST(Coloring, DistanceParity) {
    const auto s = single_mcm(5, 2);
    const auto dev = chain_device(5);
    const auto colors = color_windows(s, dev, 2);
    std::map<Qubit, int> by_qubit;
    for (std::size_t i = 0; i < s.idle_windows.size(); ++i) {
        if (colors[i] >= 0) by_qubit[s.idle_windows[i].qubit] = colors[i];
    }
    EXPECT_EQ(by_qubit, (std::map<Qubit, int>{{0, 0}, {1, 1}, {3, 1}, {4, 0}}));
    for (int c : color_windows(s, dev, 1)) EXPECT_LE(c, 0);
}

TEST(Coloring, NearestMeasuredQubit) {
    const int n = 9;
    DynamicCircuit c(n, 2);
    for (Qubit q = 0; q < n; ++q) c.x(q);
    c.measure(1, 0).measure(6, 1).barrier(all_qubits(n));
    for (Qubit q = 0; q < n; ++q) c.x(q);
    const auto s = build_schedule(c, instant_x());
    const auto dev = chain_device(n);
    const auto colors = color_windows(s, dev, 3);
    for (std::size_t i = 0; i < s.idle_windows.size(); ++i) {
        const auto& w = s.idle_windows[i];
        if (!w.context.during_mcm) continue;
        int d = 1 << 20;
        for (Qubit m : w.context.measured) d = std::min(d, std::abs(m - w.qubit));
        EXPECT_EQ(colors[i], d % 3) << "qubit " << w.qubit;
    }
}

TEST(Baselines, PlacementAndCounts) {
    const auto s = single_mcm(3, 0);
    const auto dev = chain_device(3);
    const auto colors = color_windows(s, dev, 2);
    EXPECT_TRUE(baseline_pulses(s, colors, Baseline::NoDD).empty());
    const auto mdd = baseline_pulses(s, colors, Baseline::MDD);
    ASSERT_EQ(mdd.size(), 4U);
    EXPECT_EQ(mdd[0].time, 250);
    EXPECT_EQ(mdd[1].time, 750);
    EXPECT_EQ(baseline_pulses(s, colors, Baseline::FFDD).size(), 8U);
    const auto xpxm = baseline_pulses(s, colors, Baseline::XpXmStaggered);
    std::set<Nanos> q1, q2;
    for (const auto& p : xpxm) (p.qubit == 1 ? q1 : q2).insert(p.time);
    EXPECT_NE(q1, q2);
    EXPECT_EQ(parse_baseline("ffdd"), Baseline::FFDD);
    EXPECT_FALSE(parse_baseline("cpmg").has_value());
}

TEST(Baselines, CancelStaticPhase) {
    // Constant measurement-induced rotation on |+>: MDD and FFDD refocus it.
    auto dev = chain_device(2);
    dev.noise.zphase_rate.push_back({0, 1, 1.3e-3});
    dev.noise.static_z_rate = {0.0, 4e-4};
    DynamicCircuit c(2, 2);
    c.h(1).measure(0, 0).delay(0, 600).barrier({0, 1}).h(1).measure(1, 1);
    const auto s = build_schedule(c, {});
    auto survival = [&](const std::vector<PulseEvent>& pulses) {
        const auto p = exact_distribution(s, pulses, dev);
        return marginal(p, {1}).at("0");
    };
    EXPECT_LT(survival({}), 0.9);
    const auto mdd = dd_pulses(s, dev, DdMode::of(Baseline::MDD));
    // MDD refocuses [start, boundary); the feedforward tail stays uncompensated.
    const double tail = 0.6 * 4e-4 * 1000;
    EXPECT_NEAR(survival(mdd), std::cos(tail / 2) * std::cos(tail / 2), 1e-9);
    EXPECT_NEAR(survival(dd_pulses(s, dev, DdMode::of(Baseline::FFDD))), 1.0, 1e-9);
}

TEST(Partition, QftDiagonalMotifs) {
    const auto s = build_schedule(build_qft_m(30), {});
    const auto motifs = partition_motifs(s, 6, contiguous_registers(30, 5));
    ASSERT_EQ(motifs.size(), 6U);
    for (int i = 0; i < 6; ++i) {
        EXPECT_EQ(motifs[static_cast<std::size_t>(i)].id.interval, i);
        EXPECT_EQ(motifs[static_cast<std::size_t>(i)].id.reg, i);
        EXPECT_TRUE(motifs[static_cast<std::size_t>(i)].has_mcm);
    }
    const auto groups = parallel_groups(motifs, chain_device(30));
    EXPECT_EQ(groups, (std::vector<std::vector<std::size_t>>{{0, 3}, {1, 4}, {2, 5}}));
}

TEST(Partition, TrivialCases) {
    DynamicCircuit none(3, 0);
    none.h(0).cx(0, 1);
    EXPECT_TRUE(partition_motifs(build_schedule(none, {}), 1, {{0, 1, 2}}).empty());

    const auto s = build_schedule(build_qft_m(4), {});
    const auto one = partition_motifs(s, 1, {{0, 1, 2, 3}});
    ASSERT_EQ(one.size(), 1U);
    EXPECT_EQ(one[0].t_start, 0);
    EXPECT_EQ(one[0].t_end, s.total_duration);
    EXPECT_EQ(one[0].subcircuit.instructions.size(), s.circuit.instructions.size());

    try {
        make_partition(s, 1, {{0, 1}, {1, 2, 3}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::OverlappingRegisters);
    }
}

TEST(Partition, AdjacentRegistersNotParallel) {
    const auto s = build_schedule(build_qft_m(4), {});
    const auto motifs = partition_motifs(s, 2, {{0, 1}, {2, 3}});
    ASSERT_EQ(motifs.size(), 2U);
    EXPECT_EQ(parallel_groups(motifs, chain_device(4)).size(), 2U);
    EXPECT_EQ(parallel_groups({motifs[0]}, chain_device(4)).size(), 1U);
}

TEST(Pad, CollisionSubstitution) {
    const auto s = single_mcm(5, 2);
    const auto dev = chain_device(5);
    const auto colors = color_windows(s, dev, 2);
    DdStrategy strat;
    strat.sequences = {make_sequence(kTableSequences[0]), make_sequence(kTableSequences[1])};
    const std::vector<CollisionFlag> flags = {{2, 3, CollisionKind::Type1, 5.0, 100.0}};
    const auto pulses = pad_uniform(s, colors, strat, dev, flags);
    std::map<Qubit, std::vector<PulseLabel>> labels;
    for (const auto& p : pulses) labels[p.qubit].push_back(p.pulse);
    EXPECT_EQ(labels[3], constrained_collision_sequence().pulses);
    EXPECT_EQ(labels[4], identity_sequence(8).pulses);
    EXPECT_EQ(labels[1], frame_corrected(strat.sequences[1]).pulses);
    EXPECT_EQ(labels[0], frame_corrected(strat.sequences[0]).pulses);

    const auto clean = pad_uniform(s, colors, strat, dev, {});
    std::map<Qubit, std::vector<PulseLabel>> plain;
    for (const auto& p : clean) plain[p.qubit].push_back(p.pulse);
    EXPECT_EQ(plain[3], frame_corrected(strat.sequences[1]).pulses);
}

TEST(Pad, MotifMappingAndCounterfactuals) {
    const int n = 10;
    const auto s = build_schedule(build_qft_m(n), {});
    const auto dev = chain_device(n);
    const auto regs = contiguous_registers(n, 5);
    const auto partition = make_partition(s, 2, regs);
    StrategyMap strategies;
    strategies[{0, 0}].sequences = {make_sequence(kTableSequences[0]), make_sequence(kTableSequences[0])};
    strategies[{1, 1}].sequences = {make_sequence(kTableSequences[2]), make_sequence(kTableSequences[2])};
    const auto colors = color_windows(s, dev, 2);
    const auto pulses = pad_strategy(s, colors, partition, strategies, dev, {});
    EXPECT_NO_THROW(check_pulses(s, pulses));

    // Every window in register 0 during interval 0 carries M(0,0)'s sequence.
    const auto first = frame_corrected(make_sequence(kTableSequences[0])).pulses;
    const auto second = frame_corrected(make_sequence(kTableSequences[2])).pulses;
    std::size_t checked = 0;
    for (std::size_t i = 0; i < s.idle_windows.size(); ++i) {
        const auto& w = s.idle_windows[i];
        if (colors[i] < 0) continue;
        const auto id = window_motif(w, partition, strategies);
        ASSERT_TRUE(id.has_value());
        std::vector<PulseLabel> got;
        for (const auto& p : pulses) {
            if (p.qubit == w.qubit && p.time >= w.start && p.time <= w.end) got.push_back(p.pulse);
        }
        if (got.size() != 8) continue;
        EXPECT_EQ(got, id->reg == 0 ? first : second);
        ++checked;
    }
    EXPECT_GT(checked, 0U);

    PadOptions unaware;
    unaware.mode = PadMode::Unaware;
    unaware.unaware_source = MotifId{1, 1};
    for (const auto& [id, strat] : remap_strategies(strategies, unaware)) EXPECT_EQ(strat, strategies.at({1, 1}));

    PadOptions scrambled;
    scrambled.mode = PadMode::Scrambled;
    scrambled.scramble_seed = 7;
    const auto a = remap_strategies(strategies, scrambled);
    EXPECT_EQ(a, remap_strategies(strategies, scrambled));
    EXPECT_EQ(a.at({0, 0}), strategies.at({1, 1}));
    EXPECT_EQ(a.at({1, 1}), strategies.at({0, 0}));

    StrategyMap partial;
    partial[{0, 0}] = strategies.at({0, 0});
    auto far_regs = regs;
    try {
        pad_strategy(s, colors, partition, partial, dev, {});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::MissingStrategy);
    }
}

TEST(Pad, NetIdentityOnNoiselessState) {
    // Frame-corrected sequences leave a noiseless circuit's output unchanged.
    const auto s = build_schedule(build_proc_fidelity_circuit(4, 11), {});
    const auto dev = chain_device(4);
    DdMode mode;
    mode.kind = DdMode::Kind::Uniform;
    for (const auto& labels : kTableSequences) {
        mode.uniform.sequences = {make_sequence(labels), make_sequence(kTableSequences[0])};
        const auto p = exact_distribution(s, dd_pulses(s, dev, mode), dev);
        EXPECT_NEAR(p.at(to_bitstring(11, 4)), 1.0, 1e-12);
    }
}

TEST(StrategyJson, RoundTripsTableEntries) {
    DdStrategy s;
    s.sequences = {make_sequence(kTableSequences[0]), make_sequence(kTableSequences[1])};
    const auto text = strategy_to_json(s);
    EXPECT_NE(text.find("\"X_m\""), std::string::npos);
    EXPECT_EQ(strategy_from_json(text), s);

    const auto sched = build_schedule(build_qft_m(10), {});
    const auto partition = make_partition(sched, 2, contiguous_registers(10, 5));
    StrategyMap m{{{0, 0}, s}, {{1, 1}, s}};
    EXPECT_EQ(strategy_set_from_json(strategy_set_to_json(m, partition), 8, 2), m);
    EXPECT_THROW(strategy_set_from_json(strategy_set_to_json(m, partition), 4, 2), Error);
    EXPECT_EQ(strategy_set_from_json(text).at({0, 0}), s);
    EXPECT_THROW(strategy_from_json("{\"L\": 8}"), Error);
}

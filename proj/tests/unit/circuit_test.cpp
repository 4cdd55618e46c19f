#include <gtest/gtest.h>

#include "decoupler/circuit.hpp"
#include "decoupler/error.hpp"

using namespace decoupler;

namespace {

const IdleWindow* window_for(const ScheduledCircuit& s, Qubit q) {
    for (const auto& w : s.idle_windows) {
        if (w.qubit == q) return &w;
    }
    return nullptr;
}

}  // namespace

TEST(Schedule, SingleMeasureFeedforwardWindow) {
    DynamicCircuit c(2, 1);
    c.h(1).measure(0, 0).c_if(make_gate(GateKind::Z, 1), 0).h(1);
    DeviceTiming t;
    t.gate_ns["H"] = 0;
    const auto s = build_schedule(c, t);
    const auto* w = window_for(s, 1);
    ASSERT_NE(w, nullptr);
    EXPECT_EQ(w->start, 0);
    EXPECT_EQ(w->end, 1600);
    EXPECT_TRUE(w->context.during_mcm);
    EXPECT_EQ(w->context.ff_boundary, 1000);
    EXPECT_EQ(w->context.ff_slot, 1600);
    EXPECT_EQ(w->context.measured_qubit(), 0);
    EXPECT_EQ(s.events[2].start, 1600);
}

TEST(Schedule, EmptyCircuit) {
    const auto s = build_schedule(DynamicCircuit(3, 0), DeviceTiming{});
    EXPECT_TRUE(s.events.empty());
    EXPECT_TRUE(s.idle_windows.empty());
    EXPECT_EQ(s.total_duration, 0);
}

TEST(Schedule, CriticalPath) {
    DynamicCircuit c(2, 0);
    c.h(0).cx(0, 1).x(1);
    const auto s = build_schedule(c, DeviceTiming{});
    EXPECT_EQ(s.total_duration, 50 + 570 + 50);
    EXPECT_EQ(s.events[1].start, 50);
    EXPECT_EQ(s.events[2].start, 620);
}

TEST(Schedule, DelaysNeverShortenRemovalIncreases) {
    DynamicCircuit c(2, 1);
    c.h(0).delay(1, 300).measure(0, 0).delay(0, 120).x(1).c_if(make_gate(GateKind::X, 1), 0);
    DynamicCircuit stripped(2, 1);
    for (const auto& inst : c.instructions) {
        if (!std::holds_alternative<Delay>(inst)) stripped.append(inst);
    }
    EXPECT_LE(build_schedule(stripped, {}).total_duration, build_schedule(c, {}).total_duration);
}

TEST(Schedule, Deterministic) {
    DynamicCircuit c(3, 2);
    c.h(0).cx(0, 1).measure(1, 0).c_if(make_rz(2, 0.3), 0).measure(2, 1).h(0);
    EXPECT_EQ(build_schedule(c, {}), build_schedule(c, {}));
}

TEST(Schedule, NoOverlapPerQubit) {
    DynamicCircuit c(3, 2);
    c.h(0).cx(0, 1).measure(1, 0).c_if(make_gate(GateKind::X, 2), 0).cx(1, 2).measure(0, 1);
    const auto s = build_schedule(c, {});
    for (Qubit q = 0; q < 3; ++q) {
        Nanos last_end = -1;
        for (const auto& e : s.events) {
            const auto qs = instruction_qubits(s.instruction(e));
            if (std::find(qs.begin(), qs.end(), q) == qs.end() || e.duration == 0) continue;
            EXPECT_GE(e.start, last_end);
            last_end = e.end();
        }
    }
}

TEST(Schedule, ConditionalWaitsForFeedforward) {
    DynamicCircuit c(2, 1);
    c.measure(0, 0).c_if(make_gate(GateKind::X, 1), 0);
    DeviceTiming t;
    t.tau_m = 700;
    t.tau_ff = 250;
    const auto s = build_schedule(c, t);
    EXPECT_EQ(s.events[1].start, 950);
}

TEST(Schedule, UnwrittenClbitIsCyclic) {
    DynamicCircuit c(2, 4);
    c.c_if(make_gate(GateKind::Z, 1), 3);
    try {
        build_schedule(c, {});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::CyclicDependency);
    }
}

TEST(Schedule, UnknownGateDuration) {
    DynamicCircuit c(1, 0);
    c.h(0);
    DeviceTiming t;
    t.gate_ns.erase("H");
    try {
        build_schedule(c, t);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::UnknownGateDuration);
    }
}

TEST(Validate, Violations) {
    DynamicCircuit c(5, 4);
    c.x(7).c_if(make_gate(GateKind::Z, 1), 3);
    const auto v = validate(c);
    ASSERT_EQ(v.size(), 2u);
    EXPECT_NE(v[0].message.find("qubit out of range"), std::string::npos);
    EXPECT_NE(v[1].message.find("unwritten clbit"), std::string::npos);
}

TEST(Validate, WindowContextInvariant) {
    DynamicCircuit c(4, 2);
    c.h(1).h(2).h(3).measure(0, 0).c_if(make_gate(GateKind::X, 1), 0).measure(2, 1).h(3).h(1);
    const auto s = build_schedule(c, {});
    for (const auto& w : s.idle_windows) {
        EXPECT_LT(w.start, w.end);
        if (w.context.during_mcm) {
            ASSERT_TRUE(w.context.ff_boundary.has_value());
            EXPECT_GT(*w.context.ff_boundary, w.start);
            EXPECT_LE(*w.context.ff_boundary, w.end);
        }
    }
}

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "decoupler/timing.hpp"

namespace decoupler {

using Qubit = int;
using Clbit = int;

enum class GateKind { X, Y, Z, H, RZ, SX, CX, Rk };

const char* gate_name(GateKind kind) noexcept;
std::optional<GateKind> parse_gate_name(const std::string& name);

/// A unitary gate. `control` is used only by CX; `angle` only by RZ; `k` only
/// by Rk = diag(1, exp(2*pi*i / 2^k)).
struct Gate {
    GateKind kind = GateKind::X;
    Qubit target = 0;
    Qubit control = -1;
    double angle = 0.0;
    int k = 0;

    bool two_qubit() const noexcept { return kind == GateKind::CX; }
    bool diagonal() const noexcept {
        return kind == GateKind::Z || kind == GateKind::RZ || kind == GateKind::Rk;
    }
    bool operator==(const Gate&) const = default;
};

struct Measure {
    Qubit qubit = 0;
    Clbit clbit = 0;
    bool operator==(const Measure&) const = default;
};

/// Gate applied when clbit == value, after the feedforward latency.
struct Conditional {
    Gate gate;
    Clbit clbit = 0;
    int value = 1;
    bool operator==(const Conditional&) const = default;
};

struct Delay {
    Qubit qubit = 0;
    Nanos duration = 0;
    bool operator==(const Delay&) const = default;
};

struct Barrier {
    std::vector<Qubit> qubits;
    bool operator==(const Barrier&) const = default;
};

using Instruction = std::variant<Gate, Measure, Conditional, Delay, Barrier>;

/// Qubits an instruction acts on (for a barrier, the qubits it aligns).
std::vector<Qubit> instruction_qubits(const Instruction& inst);

struct DynamicCircuit {
    int n_qubits = 0;
    int n_clbits = 0;
    std::vector<Instruction> instructions;

    DynamicCircuit() = default;
    DynamicCircuit(int qubits, int clbits) : n_qubits(qubits), n_clbits(clbits) {}

    DynamicCircuit& gate(GateKind kind, Qubit q);
    DynamicCircuit& x(Qubit q) { return gate(GateKind::X, q); }
    DynamicCircuit& y(Qubit q) { return gate(GateKind::Y, q); }
    DynamicCircuit& z(Qubit q) { return gate(GateKind::Z, q); }
    DynamicCircuit& h(Qubit q) { return gate(GateKind::H, q); }
    DynamicCircuit& sx(Qubit q) { return gate(GateKind::SX, q); }
    DynamicCircuit& rz(Qubit q, double angle);
    DynamicCircuit& rk(Qubit q, int k);
    DynamicCircuit& cx(Qubit control, Qubit target);
    DynamicCircuit& measure(Qubit q, Clbit c);
    DynamicCircuit& c_if(const Gate& g, Clbit c, int value = 1);
    DynamicCircuit& delay(Qubit q, Nanos ns);
    DynamicCircuit& barrier(std::vector<Qubit> qubits);
    DynamicCircuit& append(const Instruction& inst);

    /// Qubits touched by at least one instruction, ascending.
    std::vector<Qubit> active_qubits() const;

    bool operator==(const DynamicCircuit&) const = default;
};

Gate make_gate(GateKind kind, Qubit target);
Gate make_rz(Qubit target, double angle);
Gate make_rk(Qubit target, int k);
Gate make_cx(Qubit control, Qubit target);

struct Violation {
    std::size_t instruction = 0;
    std::string message;
};

/// All invariant violations: index bounds, unknown gate parameters, and
/// conditionals reading clbits no earlier Measure wrote.
std::vector<Violation> validate(const DynamicCircuit& circuit);

/// A scheduled instruction. Conditional gates have zero duration and start at
/// measure end + tau_ff.
struct Event {
    Nanos start = 0;
    Nanos duration = 0;
    std::size_t instruction = 0;  // index into circuit.instructions

    Nanos end() const noexcept { return start + duration; }
    bool operator==(const Event&) const = default;
};

struct IdleContext {
    bool during_mcm = false;
    /// Qubits whose measurement overlaps the window; nearest-first is not
    /// implied, the list is ascending.
    std::vector<Qubit> measured;
    /// End of the overlapping measurement (clamped to the window end).
    std::optional<Nanos> ff_boundary;
    /// First instant after feedforward: min(ff_boundary + tau_ff, window end).
    std::optional<Nanos> ff_slot;

    std::optional<Qubit> measured_qubit() const {
        if (measured.empty()) return std::nullopt;
        return measured.front();
    }
    bool operator==(const IdleContext&) const = default;
};

struct IdleWindow {
    Qubit qubit = 0;
    Nanos start = 0;
    Nanos end = 0;
    IdleContext context;

    Nanos length() const noexcept { return end - start; }
    bool operator==(const IdleWindow&) const = default;
};

struct ScheduledCircuit {
    DynamicCircuit circuit;
    DeviceTiming timing;
    std::vector<Event> events;  // in instruction order
    std::vector<IdleWindow> idle_windows;  // sorted by (start, qubit)
    Nanos total_duration = 0;

    const Instruction& instruction(const Event& e) const { return circuit.instructions[e.instruction]; }
    bool operator==(const ScheduledCircuit&) const = default;
};

Nanos gate_duration(const Gate& gate, const DeviceTiming& timing);

/// As-soon-as-possible schedule. Measurements occupy tau_m on their qubit;
/// conditionals wait for measure end + tau_ff. Idle windows are the gaps
/// between consecutive events on each qubit (delays count as idle), split at
/// every feedforward slot so that each window hosts at most one DD sequence.
ScheduledCircuit build_schedule(const DynamicCircuit& circuit, const DeviceTiming& timing);

}  // namespace decoupler

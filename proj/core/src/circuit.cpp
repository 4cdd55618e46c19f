#include "decoupler/circuit.hpp"

#include <algorithm>
#include <set>

#include "decoupler/error.hpp"

namespace decoupler {

namespace {

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

std::vector<Qubit> gate_qubits(const Gate& g) {
    if (g.two_qubit()) return {g.control, g.target};
    return {g.target};
}

}  // namespace

const char* gate_name(GateKind kind) noexcept {
    switch (kind) {
        case GateKind::X: return "X";
        case GateKind::Y: return "Y";
        case GateKind::Z: return "Z";
        case GateKind::H: return "H";
        case GateKind::RZ: return "RZ";
        case GateKind::SX: return "SX";
        case GateKind::CX: return "CX";
        case GateKind::Rk: return "Rk";
    }
    return "?";
}

std::optional<GateKind> parse_gate_name(const std::string& name) {
    for (auto k : {GateKind::X, GateKind::Y, GateKind::Z, GateKind::H, GateKind::RZ, GateKind::SX,
                   GateKind::CX, GateKind::Rk}) {
        if (name == gate_name(k)) return k;
    }
    return std::nullopt;
}

Gate make_gate(GateKind kind, Qubit target) {
    Gate g;
    g.kind = kind;
    g.target = target;
    return g;
}

Gate make_rz(Qubit target, double angle) {
    Gate g = make_gate(GateKind::RZ, target);
    g.angle = angle;
    return g;
}

Gate make_rk(Qubit target, int k) {
    Gate g = make_gate(GateKind::Rk, target);
    g.k = k;
    return g;
}

Gate make_cx(Qubit control, Qubit target) {
    Gate g = make_gate(GateKind::CX, target);
    g.control = control;
    return g;
}

std::vector<Qubit> instruction_qubits(const Instruction& inst) {
    return std::visit(overloaded{
                          [](const Gate& g) { return gate_qubits(g); },
                          [](const Measure& m) { return std::vector<Qubit>{m.qubit}; },
                          [](const Conditional& c) { return gate_qubits(c.gate); },
                          [](const Delay& d) { return std::vector<Qubit>{d.qubit}; },
                          [](const Barrier& b) { return b.qubits; },
                      },
                      inst);
}

DynamicCircuit& DynamicCircuit::gate(GateKind kind, Qubit q) { return append(make_gate(kind, q)); }
DynamicCircuit& DynamicCircuit::rz(Qubit q, double angle) { return append(make_rz(q, angle)); }
DynamicCircuit& DynamicCircuit::rk(Qubit q, int k) { return append(make_rk(q, k)); }
DynamicCircuit& DynamicCircuit::cx(Qubit control, Qubit target) { return append(make_cx(control, target)); }
DynamicCircuit& DynamicCircuit::measure(Qubit q, Clbit c) { return append(Measure{q, c}); }
DynamicCircuit& DynamicCircuit::c_if(const Gate& g, Clbit c, int value) {
    return append(Conditional{g, c, value});
}
DynamicCircuit& DynamicCircuit::delay(Qubit q, Nanos ns) { return append(Delay{q, ns}); }
DynamicCircuit& DynamicCircuit::barrier(std::vector<Qubit> qubits) {
    return append(Barrier{std::move(qubits)});
}
DynamicCircuit& DynamicCircuit::append(const Instruction& inst) {
    instructions.push_back(inst);
    return *this;
}

std::vector<Qubit> DynamicCircuit::active_qubits() const {
    std::set<Qubit> qs;
    for (const auto& inst : instructions) {
        if (std::holds_alternative<Barrier>(inst)) continue;
        for (Qubit q : instruction_qubits(inst)) qs.insert(q);
    }
    return {qs.begin(), qs.end()};
}

std::vector<Violation> validate(const DynamicCircuit& circuit) {
    std::vector<Violation> out;
    std::vector<bool> written(static_cast<std::size_t>(std::max(circuit.n_clbits, 0)), false);

    auto check_qubit = [&](std::size_t i, Qubit q) {
        if (q < 0 || q >= circuit.n_qubits) {
            out.push_back({i, "qubit out of range: " + std::to_string(q)});
        }
    };
    auto check_gate = [&](std::size_t i, const Gate& g) {
        for (Qubit q : gate_qubits(g)) check_qubit(i, q);
        if (g.two_qubit() && g.control == g.target) out.push_back({i, "CX control equals target"});
        if (g.kind == GateKind::Rk && g.k < 1) out.push_back({i, "Rk requires k >= 1"});
    };
    auto check_clbit = [&](std::size_t i, Clbit c) {
        if (c < 0 || c >= circuit.n_clbits) {
            out.push_back({i, "clbit out of range: " + std::to_string(c)});
            return false;
        }
        return true;
    };

    for (std::size_t i = 0; i < circuit.instructions.size(); ++i) {
        std::visit(overloaded{
                       [&](const Gate& g) { check_gate(i, g); },
                       [&](const Measure& m) {
                           check_qubit(i, m.qubit);
                           if (check_clbit(i, m.clbit)) written[static_cast<std::size_t>(m.clbit)] = true;
                       },
                       [&](const Conditional& c) {
                           check_gate(i, c.gate);
                           if (check_clbit(i, c.clbit) && !written[static_cast<std::size_t>(c.clbit)]) {
                               out.push_back({i, "unwritten clbit: " + std::to_string(c.clbit)});
                           }
                           if (c.value != 0 && c.value != 1) out.push_back({i, "trigger value must be 0 or 1"});
                       },
                       [&](const Delay& d) {
                           check_qubit(i, d.qubit);
                           if (d.duration < 0) out.push_back({i, "negative delay"});
                       },
                       [&](const Barrier& b) {
                           for (Qubit q : b.qubits) check_qubit(i, q);
                       },
                   },
                   circuit.instructions[i]);
    }
    return out;
}

Nanos gate_duration(const Gate& gate, const DeviceTiming& timing) {
    auto it = timing.gate_ns.find(gate_name(gate.kind));
    if (it == timing.gate_ns.end()) {
        throw Error(Errc::UnknownGateDuration, std::string("no duration for gate ") + gate_name(gate.kind));
    }
    return it->second;
}

namespace {

struct MeasureSpan {
    Qubit qubit;
    Nanos start;
    Nanos end;
};

void collect_windows(ScheduledCircuit& sched, const std::vector<MeasureSpan>& measures) {
    const auto& circuit = sched.circuit;
    std::vector<std::vector<std::pair<Nanos, Nanos>>> busy(static_cast<std::size_t>(circuit.n_qubits));
    for (const auto& e : sched.events) {
        const auto& inst = circuit.instructions[e.instruction];
        if (std::holds_alternative<Delay>(inst) || std::holds_alternative<Barrier>(inst)) continue;
        for (Qubit q : instruction_qubits(inst)) busy[static_cast<std::size_t>(q)].push_back({e.start, e.end()});
    }

    std::vector<Nanos> slots;
    for (const auto& m : measures) slots.push_back(m.end + sched.timing.tau_ff);
    std::sort(slots.begin(), slots.end());
    slots.erase(std::unique(slots.begin(), slots.end()), slots.end());

    for (Qubit q = 0; q < circuit.n_qubits; ++q) {
        auto& spans = busy[static_cast<std::size_t>(q)];
        std::stable_sort(spans.begin(), spans.end());
        for (std::size_t i = 1; i < spans.size(); ++i) {
            const Nanos gap_start = spans[i - 1].second;
            const Nanos gap_end = spans[i].first;
            if (gap_end <= gap_start) continue;

            std::vector<Nanos> cuts{gap_start};
            for (Nanos s : slots) {
                if (s > gap_start && s < gap_end) cuts.push_back(s);
            }
            cuts.push_back(gap_end);

            for (std::size_t c = 1; c < cuts.size(); ++c) {
                IdleWindow w;
                w.qubit = q;
                w.start = cuts[c - 1];
                w.end = cuts[c];
                Nanos boundary = -1;
                for (const auto& m : measures) {
                    if (m.qubit == q) continue;
                    if (m.start < w.end && m.end > w.start) {
                        w.context.measured.push_back(m.qubit);
                        boundary = std::max(boundary, m.end);
                    }
                }
                if (!w.context.measured.empty()) {
                    std::sort(w.context.measured.begin(), w.context.measured.end());
                    w.context.measured.erase(
                        std::unique(w.context.measured.begin(), w.context.measured.end()),
                        w.context.measured.end());
                    w.context.during_mcm = true;
                    boundary = std::min(boundary, w.end);
                    w.context.ff_boundary = boundary;
                    w.context.ff_slot = std::min(boundary + sched.timing.tau_ff, w.end);
                }
                sched.idle_windows.push_back(std::move(w));
            }
        }
    }
    std::sort(sched.idle_windows.begin(), sched.idle_windows.end(), [](const auto& a, const auto& b) {
        return std::tie(a.start, a.qubit) < std::tie(b.start, b.qubit);
    });
}

}  // namespace

ScheduledCircuit build_schedule(const DynamicCircuit& circuit, const DeviceTiming& timing) {
    const auto violations = validate(circuit);
    for (const auto& v : violations) {
        if (v.message.rfind("unwritten clbit", 0) == 0) {
            throw Error(Errc::CyclicDependency,
                        "instruction " + std::to_string(v.instruction) + " reads " + v.message);
        }
    }
    if (!violations.empty()) {
        throw Error(Errc::InvalidArgument,
                    "instruction " + std::to_string(violations.front().instruction) + ": " +
                        violations.front().message);
    }

    ScheduledCircuit sched;
    sched.circuit = circuit;
    sched.timing = timing;
    sched.events.reserve(circuit.instructions.size());

    std::vector<Nanos> qubit_free(static_cast<std::size_t>(circuit.n_qubits), 0);
    std::vector<Nanos> clbit_ready(static_cast<std::size_t>(circuit.n_clbits), 0);
    std::vector<MeasureSpan> measures;

    auto ready_at = [&](const std::vector<Qubit>& qs) {
        Nanos t = 0;
        for (Qubit q : qs) t = std::max(t, qubit_free[static_cast<std::size_t>(q)]);
        return t;
    };
    auto occupy = [&](const std::vector<Qubit>& qs, Nanos until) {
        for (Qubit q : qs) qubit_free[static_cast<std::size_t>(q)] = until;
    };

    for (std::size_t i = 0; i < circuit.instructions.size(); ++i) {
        const auto& inst = circuit.instructions[i];
        const auto qs = instruction_qubits(inst);
        Event e;
        e.instruction = i;
        std::visit(overloaded{
                       [&](const Gate& g) {
                           e.start = ready_at(qs);
                           e.duration = gate_duration(g, timing);
                       },
                       [&](const Measure& m) {
                           e.start = ready_at(qs);
                           e.duration = timing.tau_m;
                           clbit_ready[static_cast<std::size_t>(m.clbit)] = e.start + timing.tau_m + timing.tau_ff;
                           measures.push_back({m.qubit, e.start, e.start + timing.tau_m});
                       },
                       [&](const Conditional& c) {
                           gate_duration(c.gate, timing);
                           e.start = std::max(ready_at(qs), clbit_ready[static_cast<std::size_t>(c.clbit)]);
                           e.duration = 0;
                       },
                       [&](const Delay& d) {
                           e.start = ready_at(qs);
                           e.duration = d.duration;
                       },
                       [&](const Barrier&) {
                           e.start = ready_at(qs);
                           e.duration = 0;
                       },
                   },
                   inst);
        occupy(qs, e.end());
        sched.total_duration = std::max(sched.total_duration, e.end());
        sched.events.push_back(e);
    }

    collect_windows(sched, measures);
    return sched;
}

}  // namespace decoupler

#include "decoupler/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <utility>

#include "decoupler/error.hpp"
#include "decoupler/parallel.hpp"

namespace decoupler {

namespace {

constexpr double kProbEps = 1e-14;

double rk_angle(int k) { return 2.0 * std::numbers::pi / std::ldexp(1.0, k); }

enum class OpKind { Gate, Measure, Conditional, Pulse, Noise, Flip, Depolarize };

struct ZTerm {
    int q;
    double theta;
};
struct ZZTerm {
    int edge;
    double phi;
};
struct CollisionTerm {
    int m;
    int u;
    Mat4 unitary;
};

struct NoiseOp {
    std::vector<ZTerm> z;
    std::vector<ZZTerm> zz;
    std::vector<CollisionTerm> collisions;
};

struct Op {
    OpKind kind = OpKind::Gate;
    Gate gate;          // Gate, Conditional (local indices)
    int q = 0;          // Measure, Pulse, Flip, Depolarize
    int clbit = 0;      // Measure, Conditional
    int value = 1;      // Conditional
    double p = 0.0;     // readout / flip / depolarizing probability
    bool branch_readout = false;
    Pauli pauli = Pauli::I;
    std::size_t noise = 0;
};

struct Program {
    int n_local = 0;
    int n_clbits = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::vector<int>> edges_of;
    std::vector<Op> ops;
    std::vector<NoiseOp> noise;
    std::vector<double> final_eps;
};

struct LazyState {
    StateVector psi;
    std::vector<double> z;
    std::vector<double> zz;
    std::vector<unsigned char> frame;

    LazyState(const Program& prog)
        : psi(prog.n_local),
          z(static_cast<std::size_t>(prog.n_local), 0.0),
          zz(prog.edges.size(), 0.0),
          frame(static_cast<std::size_t>(prog.n_local), 0) {}

    bool fx(int q) const { return has_x(static_cast<Pauli>(frame[static_cast<std::size_t>(q)])); }

    void pauli(int q, Pauli p) { frame[static_cast<std::size_t>(q)] ^= static_cast<unsigned char>(p); }

    // Diagonal terms arriving after the frame are conjugated through it.
    void add_z(int q, double theta) { z[static_cast<std::size_t>(q)] += fx(q) ? -theta : theta; }

    void add_zz(const Program& prog, int e, double phi) {
        const auto [a, b] = prog.edges[static_cast<std::size_t>(e)];
        zz[static_cast<std::size_t>(e)] += (fx(a) != fx(b)) ? -phi : phi;
    }

    void materialize(const Program& prog, int q) {
        auto& zq = z[static_cast<std::size_t>(q)];
        if (zq != 0.0) {
            psi.apply_rz(q, zq);
            zq = 0.0;
        }
        for (int e : prog.edges_of[static_cast<std::size_t>(q)]) {
            auto& phi = zz[static_cast<std::size_t>(e)];
            if (phi != 0.0) {
                const auto [a, b] = prog.edges[static_cast<std::size_t>(e)];
                psi.apply_rzz(a, b, phi);
                phi = 0.0;
            }
        }
        const auto f = static_cast<Pauli>(frame[static_cast<std::size_t>(q)]);
        if (has_z(f)) psi.apply_z(q);
        if (has_x(f)) psi.apply_x(q);
        frame[static_cast<std::size_t>(q)] = 0;
    }

    void gate(const Program& prog, const Gate& g) {
        switch (g.kind) {
            case GateKind::X: pauli(g.target, Pauli::X); break;
            case GateKind::Y: pauli(g.target, Pauli::Y); break;
            case GateKind::Z: pauli(g.target, Pauli::Z); break;
            case GateKind::RZ: add_z(g.target, g.angle); break;
            case GateKind::Rk: add_z(g.target, rk_angle(g.k)); break;
            case GateKind::H:
                materialize(prog, g.target);
                psi.apply_1q(g.target, gate_h());
                break;
            case GateKind::SX:
                materialize(prog, g.target);
                psi.apply_1q(g.target, gate_sx());
                break;
            case GateKind::CX:
                materialize(prog, g.control);
                materialize(prog, g.target);
                psi.apply_cx(g.control, g.target);
                break;
        }
    }

    void noise(const Program& prog, const NoiseOp& n) {
        for (const auto& t : n.z) add_z(t.q, t.theta);
        for (const auto& t : n.zz) add_zz(prog, t.edge, t.phi);
        for (const auto& c : n.collisions) {
            materialize(prog, c.m);
            materialize(prog, c.u);
            psi.apply_2q(c.m, c.u, c.unitary);
        }
    }

    double measure_prob(const Program& prog, int q) {
        materialize(prog, q);
        const double p1 = psi.prob_one(q);
        if (p1 < kProbEps) return 0.0;
        if (p1 > 1.0 - kProbEps) return 1.0;
        return p1;
    }
};

Gate localize(Gate g, const std::vector<int>& local) {
    g.target = local[static_cast<std::size_t>(g.target)];
    if (g.control >= 0) g.control = local[static_cast<std::size_t>(g.control)];
    return g;
}

bool in_window(const IdleWindow& w, Nanos t) { return w.start <= t && t <= w.end; }

Program compile(const ScheduledCircuit& sched, const std::vector<PulseEvent>& pulses, const DeviceModel& device,
                bool noiseless) {
    const auto& circ = sched.circuit;
    if (circ.n_qubits > device.n_qubits) {
        throw Error(Errc::QubitCountMismatch, "circuit uses " + std::to_string(circ.n_qubits) +
                                                  " qubits but device has " + std::to_string(device.n_qubits));
    }
    check_pulses(sched, pulses);

    Program prog;
    prog.n_clbits = circ.n_clbits;
    std::set<Qubit> active_set;
    for (Qubit q : circ.active_qubits()) active_set.insert(q);
    for (const auto& p : pulses) active_set.insert(p.qubit);
    const std::vector<Qubit> active(active_set.begin(), active_set.end());
    std::vector<int> local(static_cast<std::size_t>(std::max(device.n_qubits, circ.n_qubits)), -1);
    for (std::size_t i = 0; i < active.size(); ++i) local[static_cast<std::size_t>(active[i])] = static_cast<int>(i);
    prog.n_local = static_cast<int>(active.size());
    if (prog.n_local > 26) throw Error(Errc::InvalidArgument, "too many active qubits for statevector simulation");

    prog.edges_of.assign(active.size(), {});
    std::vector<std::size_t> device_edge;  // local edge -> device edge index
    for (std::size_t e = 0; e < device.edges.size(); ++e) {
        const int a = local[static_cast<std::size_t>(device.edges[e].a)];
        const int b = local[static_cast<std::size_t>(device.edges[e].b)];
        if (a < 0 || b < 0) continue;
        const int id = static_cast<int>(prog.edges.size());
        prog.edges.push_back({a, b});
        prog.edges_of[static_cast<std::size_t>(a)].push_back(id);
        prog.edges_of[static_cast<std::size_t>(b)].push_back(id);
        device_edge.push_back(e);
    }

    const auto& nz = device.noise;
    const auto N = static_cast<std::size_t>(device.n_qubits);
    std::vector<double> zrate(N * N, 0.0);
    for (const auto& z : nz.zphase_rate) {
        if (z.measured < device.n_qubits && z.unitary < device.n_qubits) {
            zrate[static_cast<std::size_t>(z.measured) * N + static_cast<std::size_t>(z.unitary)] += z.rad_per_ns;
        }
    }
    auto per_qubit = [&](const std::vector<double>& v, Qubit q) {
        return static_cast<std::size_t>(q) < v.size() ? v[static_cast<std::size_t>(q)] : 0.0;
    };

    // Time-ordered items.
    std::vector<std::size_t> event_order(sched.events.size());
    for (std::size_t i = 0; i < event_order.size(); ++i) event_order[i] = i;
    std::stable_sort(event_order.begin(), event_order.end(), [&](std::size_t a, std::size_t b) {
        return sched.events[a].start < sched.events[b].start;
    });
    std::vector<std::size_t> pulse_order(pulses.size());
    for (std::size_t i = 0; i < pulse_order.size(); ++i) pulse_order[i] = i;
    std::stable_sort(pulse_order.begin(), pulse_order.end(), [&](std::size_t a, std::size_t b) {
        return std::tie(pulses[a].time, pulses[a].qubit) < std::tie(pulses[b].time, pulses[b].qubit);
    });

    std::set<Nanos> breaks{0, sched.total_duration};
    for (const auto& e : sched.events) {
        breaks.insert(e.start);
        breaks.insert(e.end());
    }
    for (const auto& p : pulses) breaks.insert(p.time);
    for (const auto& w : sched.idle_windows) {
        breaks.insert(w.start);
        breaks.insert(w.end);
    }
    const std::vector<Nanos> times(breaks.begin(), breaks.end());

    std::vector<std::size_t> measure_events;
    for (std::size_t i = 0; i < sched.events.size(); ++i) {
        if (std::holds_alternative<Measure>(sched.instruction(sched.events[i]))) measure_events.push_back(i);
    }

    std::size_t ei = 0;
    std::size_t pi = 0;
    const double pulse_error = noiseless ? 0.0 : nz.pulse_error;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const Nanos t = times[k];
        for (; pi < pulse_order.size() && pulses[pulse_order[pi]].time == t; ++pi) {
            const auto& p = pulses[pulse_order[pi]];
            Op op;
            op.kind = OpKind::Pulse;
            op.q = local[static_cast<std::size_t>(p.qubit)];
            op.pauli = pauli_of(p.pulse);
            prog.ops.push_back(op);
            if (pulse_error > 0.0) {
                op.kind = OpKind::Depolarize;
                op.p = pulse_error;
                prog.ops.push_back(op);
            }
        }
        for (; ei < event_order.size() && sched.events[event_order[ei]].start == t; ++ei) {
            const auto& inst = sched.instruction(sched.events[event_order[ei]]);
            Op op;
            if (const auto* g = std::get_if<Gate>(&inst)) {
                op.kind = OpKind::Gate;
                op.gate = localize(*g, local);
            } else if (const auto* m = std::get_if<Measure>(&inst)) {
                op.kind = OpKind::Measure;
                op.q = local[static_cast<std::size_t>(m->qubit)];
                op.clbit = m->clbit;
                op.p = noiseless ? 0.0 : readout_error(device, m->qubit);
            } else if (const auto* c = std::get_if<Conditional>(&inst)) {
                op.kind = OpKind::Conditional;
                op.gate = localize(c->gate, local);
                op.clbit = c->clbit;
                op.value = c->value;
            } else {
                continue;
            }
            prog.ops.push_back(op);
        }
        if (noiseless || k + 1 == times.size()) continue;

        const Nanos t1 = times[k + 1];
        const double dt = static_cast<double>(t1 - t);
        std::vector<char> idle(active.size(), 0);
        for (const auto& w : sched.idle_windows) {
            if (w.start <= t && t1 <= w.end) idle[static_cast<std::size_t>(local[static_cast<std::size_t>(w.qubit)])] = 1;
        }
        std::vector<Qubit> measuring;
        for (std::size_t idx : measure_events) {
            const auto& e = sched.events[idx];
            if (e.start <= t && t1 <= e.end()) measuring.push_back(std::get<Measure>(sched.instruction(e)).qubit);
        }

        NoiseOp n;
        std::vector<double> theta(active.size(), 0.0);
        for (std::size_t li = 0; li < active.size(); ++li) {
            if (!idle[li]) continue;
            const Qubit u = active[li];
            double rate = per_qubit(nz.static_z_rate, u);
            for (Qubit m : measuring) rate += zrate[static_cast<std::size_t>(m) * N + static_cast<std::size_t>(u)];
            theta[li] = rate * dt;
        }
        for (std::size_t le = 0; le < prog.edges.size(); ++le) {
            const auto [a, b] = prog.edges[le];
            const double zeta = per_qubit(nz.zz_rate, static_cast<Qubit>(device_edge[le]));
            if (!idle[static_cast<std::size_t>(a)] || !idle[static_cast<std::size_t>(b)] || zeta == 0.0) continue;
            // exp(-i zeta dt |11><11|) = exp(-i zeta dt/4 (I - Z_a - Z_b + Z_a Z_b))
            theta[static_cast<std::size_t>(a)] -= zeta * dt / 2;
            theta[static_cast<std::size_t>(b)] -= zeta * dt / 2;
            n.zz.push_back({static_cast<int>(le), zeta * dt / 2});
        }
        for (std::size_t li = 0; li < active.size(); ++li) {
            if (theta[li] != 0.0) n.z.push_back({static_cast<int>(li), theta[li]});
        }
        for (const auto& c : nz.collision_pairs) {
            const int lu = local[static_cast<std::size_t>(c.unitary)];
            const int lm = local[static_cast<std::size_t>(c.measured)];
            if (lu < 0 || lm < 0 || !idle[static_cast<std::size_t>(lu)]) continue;
            if (std::find(measuring.begin(), measuring.end(), c.measured) == measuring.end()) continue;
            n.collisions.push_back(
                {lm, lu, collision_unitary(mhz_to_rad_per_ns(c.delta_mhz), mhz_to_rad_per_ns(c.j_eff_mhz), dt)});
        }
        if (!n.z.empty() || !n.zz.empty() || !n.collisions.empty()) {
            Op op;
            op.kind = OpKind::Noise;
            op.noise = prog.noise.size();
            prog.noise.push_back(std::move(n));
            prog.ops.push_back(op);
        }
        for (std::size_t li = 0; li < active.size(); ++li) {
            const double rate = per_qubit(nz.t2_dephasing_rate, active[li]);
            if (!idle[li] || rate <= 0.0) continue;
            Op op;
            op.kind = OpKind::Flip;
            op.q = static_cast<int>(li);
            op.p = 1.0 - std::exp(-rate * dt);
            prog.ops.push_back(op);
        }
    }

    // Readout flips only need their own branch when a later conditional reads
    // the recorded bit; otherwise they are applied to the final record.
    prog.final_eps.assign(static_cast<std::size_t>(prog.n_clbits), 0.0);
    std::vector<char> read_later(static_cast<std::size_t>(prog.n_clbits), 0);
    std::vector<char> seen_write(static_cast<std::size_t>(prog.n_clbits), 0);
    for (auto it = prog.ops.rbegin(); it != prog.ops.rend(); ++it) {
        const auto c = static_cast<std::size_t>(it->clbit);
        if (it->kind == OpKind::Conditional) {
            read_later[c] = 1;
        } else if (it->kind == OpKind::Measure) {
            it->branch_readout = read_later[c] && it->p > 0.0;
            if (!seen_write[c] && !it->branch_readout) prog.final_eps[c] = it->p;
            seen_write[c] = 1;
            read_later[c] = 0;
        }
    }
    return prog;
}

struct Node {
    LazyState st;
    std::size_t pc = 0;
    std::vector<signed char> cl;
    std::vector<std::uint32_t> shots;  // shot mode
    double weight = 1.0;                 // exact mode
};

// Runs deterministic ops; stops at the first branching op (returns true) or
// the end of the program (returns false).
bool advance(const Program& prog, Node& node) {
    while (node.pc < prog.ops.size()) {
        const Op& op = prog.ops[node.pc];
        switch (op.kind) {
            case OpKind::Gate: node.st.gate(prog, op.gate); break;
            case OpKind::Conditional:
                if (node.cl[static_cast<std::size_t>(op.clbit)] == op.value) node.st.gate(prog, op.gate);
                break;
            case OpKind::Pulse: node.st.pauli(op.q, op.pauli); break;
            case OpKind::Noise: node.st.noise(prog, prog.noise[op.noise]); break;
            case OpKind::Measure:
            case OpKind::Flip:
            case OpKind::Depolarize: return true;
        }
        ++node.pc;
    }
    return false;
}

constexpr Pauli kPaulis[3] = {Pauli::X, Pauli::Y, Pauli::Z};

void run_chunk(const Program& prog, std::uint64_t seed, std::uint32_t first, std::uint32_t last,
               std::vector<signed char>& records) {
    const auto nc = static_cast<std::size_t>(prog.n_clbits);
    std::vector<Rng> rng;
    rng.reserve(last - first);
    for (std::uint32_t s = first; s < last; ++s) rng.push_back(substream(seed, "shot", {s}));
    auto R = [&](std::uint32_t s) -> Rng& { return rng[s - first]; };

    std::vector<Node> stack;
    {
        Node root{LazyState(prog), 0, std::vector<signed char>(nc, 0), {}, 1.0};
        for (std::uint32_t s = first; s < last; ++s) root.shots.push_back(s);
        stack.push_back(std::move(root));
    }
    while (!stack.empty()) {
        Node node = std::move(stack.back());
        stack.pop_back();
        if (!advance(prog, node)) continue;
        const Op& op = prog.ops[node.pc];
        ++node.pc;

        // Group shots by branch key; keys are small integers.
        std::vector<std::vector<std::uint32_t>> groups(4);
        double p1 = 0.0;
        if (op.kind == OpKind::Measure) p1 = node.st.measure_prob(prog, op.q);
        for (std::uint32_t s : node.shots) {
            Rng& r = R(s);
            std::size_t key = 0;
            if (op.kind == OpKind::Measure) {
                const int outcome = r.uniform() < p1 ? 1 : 0;
                int recorded = outcome;
                if (op.p > 0.0 && r.uniform() < op.p) recorded ^= 1;
                records[static_cast<std::size_t>(s) * nc + static_cast<std::size_t>(op.clbit)] =
                    static_cast<signed char>(recorded);
                key = static_cast<std::size_t>(outcome) * 2 + (op.branch_readout ? static_cast<std::size_t>(recorded) : 0);
            } else if (op.kind == OpKind::Flip) {
                key = r.uniform() < op.p ? 1 : 0;
            } else {
                key = r.uniform() < op.p ? 1 + r.below(3) : 0;
            }
            groups[key].push_back(s);
        }
        std::size_t remaining = 0;
        for (const auto& g : groups) remaining += g.empty() ? 0 : 1;
        for (std::size_t key = 0; key < groups.size(); ++key) {
            if (groups[key].empty()) continue;
            --remaining;
            Node child = remaining == 0 ? std::move(node) : node;
            child.shots = std::move(groups[key]);
            if (op.kind == OpKind::Measure) {
                const int outcome = static_cast<int>(key / 2);
                child.st.psi.collapse(op.q, outcome);
                child.cl[static_cast<std::size_t>(op.clbit)] =
                    static_cast<signed char>(op.branch_readout ? static_cast<int>(key % 2) : outcome);
            } else if (op.kind == OpKind::Flip) {
                if (key == 1) child.st.pauli(op.q, Pauli::Z);
            } else if (key > 0) {
                child.st.pauli(op.q, kPaulis[key - 1]);
            }
            stack.push_back(std::move(child));
        }
    }
}

std::string record_key(const signed char* bits, int n) {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int i = 0; i < n; ++i) {
        if (bits[i]) s[static_cast<std::size_t>(n - 1 - i)] = '1';
    }
    return s;
}

ProbabilityMap exact_impl(const Program& prog, const SimOptions& opt) {
    const auto nc = static_cast<std::size_t>(prog.n_clbits);
    ProbabilityMap out;
    std::vector<Node> stack;
    stack.push_back(Node{LazyState(prog), 0, std::vector<signed char>(nc, 0), {}, 1.0});
    std::size_t created = 1;
    while (!stack.empty()) {
        Node node = std::move(stack.back());
        stack.pop_back();
        if (!advance(prog, node)) {
            out[record_key(node.cl.data(), prog.n_clbits)] += node.weight;
            continue;
        }
        const Op& op = prog.ops[node.pc];
        ++node.pc;

        struct Branch {
            int key;
            double w;
        };
        std::vector<Branch> branches;
        if (op.kind == OpKind::Measure) {
            const double p1 = node.st.measure_prob(prog, op.q);
            for (int o = 0; o < 2; ++o) {
                const double po = o ? p1 : 1.0 - p1;
                if (po < opt.prune_below) continue;
                if (op.branch_readout) {
                    branches.push_back({o * 2 + o, po * (1.0 - op.p)});
                    branches.push_back({o * 2 + (1 - o), po * op.p});
                } else {
                    branches.push_back({o * 2 + o, po});
                }
            }
        } else if (op.kind == OpKind::Flip) {
            branches.push_back({0, 1.0 - op.p});
            branches.push_back({1, op.p});
        } else {
            branches.push_back({0, 1.0 - op.p});
            for (int k = 1; k <= 3; ++k) branches.push_back({k, op.p / 3});
        }
        std::erase_if(branches, [&](const Branch& b) { return b.w <= 0.0; });
        created += branches.size();
        if (created > opt.max_branches) {
            throw Error(Errc::BranchExplosion, "more than " + std::to_string(opt.max_branches) + " branches");
        }
        for (std::size_t i = 0; i < branches.size(); ++i) {
            const auto& b = branches[i];
            Node child = i + 1 == branches.size() ? std::move(node) : node;
            child.weight *= b.w;
            if (op.kind == OpKind::Measure) {
                child.st.psi.collapse(op.q, b.key / 2);
                child.cl[static_cast<std::size_t>(op.clbit)] = static_cast<signed char>(b.key % 2);
            } else if (op.kind == OpKind::Flip) {
                if (b.key == 1) child.st.pauli(op.q, Pauli::Z);
            } else if (b.key > 0) {
                child.st.pauli(op.q, kPaulis[b.key - 1]);
            }
            stack.push_back(std::move(child));
        }
    }
    for (std::size_t c = 0; c < nc; ++c) {
        const double eps = prog.final_eps[c];
        if (eps <= 0.0) continue;
        ProbabilityMap next;
        const std::size_t pos = nc - 1 - c;
        for (const auto& [k, w] : out) {
            std::string flipped = k;
            flipped[pos] = k[pos] == '1' ? '0' : '1';
            next[k] += w * (1.0 - eps);
            next[flipped] += w * eps;
        }
        out = std::move(next);
    }
    return out;
}

}  // namespace

void check_pulses(const ScheduledCircuit& sched, const std::vector<PulseEvent>& pulses) {
    for (const auto& p : pulses) {
        const bool ok = std::any_of(sched.idle_windows.begin(), sched.idle_windows.end(), [&](const IdleWindow& w) {
            return w.qubit == p.qubit && in_window(w, p.time);
        });
        if (!ok) {
            throw Error(Errc::PulseOutsideWindow, std::string(to_string(p.pulse)) + " on qubit " +
                                                      std::to_string(p.qubit) + " at t=" + std::to_string(p.time));
        }
    }
}

OutcomeDistribution run_shots(const ScheduledCircuit& sched, const std::vector<PulseEvent>& pulses,
                              const DeviceModel& device, std::uint64_t shots, std::uint64_t seed,
                              const SimOptions& options) {
    if (shots == 0) throw Error(Errc::ShotCountZero, "run_shots needs at least one shot");
    if (shots > std::uint64_t{1} << 31) throw Error(Errc::InvalidArgument, "too many shots");
    const Program prog = compile(sched, pulses, device, options.noiseless);
    const auto nc = static_cast<std::size_t>(prog.n_clbits);
    std::vector<signed char> records(static_cast<std::size_t>(shots) * nc, 0);

    const auto total = static_cast<std::uint32_t>(shots);
    const std::uint32_t chunks = std::max<std::uint32_t>(1, std::min<std::uint32_t>(
                                                                static_cast<std::uint32_t>(std::max(1, options.threads)), total));
    parallel_for(chunks, options.threads, [&](std::size_t c) {
        const auto first = static_cast<std::uint32_t>(static_cast<std::uint64_t>(total) * c / chunks);
        const auto last = static_cast<std::uint32_t>(static_cast<std::uint64_t>(total) * (c + 1) / chunks);
        run_chunk(prog, seed, first, last, records);
    });

    OutcomeDistribution d;
    d.n_bits = prog.n_clbits;
    d.shots = shots;
    for (std::uint64_t s = 0; s < shots; ++s) {
        ++d.counts[record_key(records.data() + s * nc, prog.n_clbits)];
    }
    return d;
}

ProbabilityMap exact_distribution(const ScheduledCircuit& sched, const SimOptions& options) {
    DeviceModel ideal;
    ideal.n_qubits = sched.circuit.n_qubits;
    ideal.timing = sched.timing;
    SimOptions opt = options;
    opt.noiseless = true;
    return exact_impl(compile(sched, {}, ideal, true), opt);
}

ProbabilityMap exact_distribution(const ScheduledCircuit& sched, const std::vector<PulseEvent>& pulses,
                                  const DeviceModel& device, const SimOptions& options) {
    return exact_impl(compile(sched, pulses, device, options.noiseless), options);
}

void apply_gate(StateVector& state, const Gate& g) {
    switch (g.kind) {
        case GateKind::X: state.apply_x(g.target); break;
        case GateKind::Y: state.apply_y(g.target); break;
        case GateKind::Z: state.apply_z(g.target); break;
        case GateKind::H: state.apply_1q(g.target, gate_h()); break;
        case GateKind::SX: state.apply_1q(g.target, gate_sx()); break;
        case GateKind::RZ: state.apply_rz(g.target, g.angle); break;
        case GateKind::Rk: state.apply_1q(g.target, {1.0, 0.0, 0.0, std::polar(1.0, rk_angle(g.k))}); break;
        case GateKind::CX: state.apply_cx(g.control, g.target); break;
    }
}

StateVector simulate_unitary(const DynamicCircuit& circuit) {
    StateVector sv(circuit.n_qubits);
    for (const auto& inst : circuit.instructions) {
        if (const auto* g = std::get_if<Gate>(&inst)) {
            apply_gate(sv, *g);
        } else if (std::holds_alternative<Measure>(inst) || std::holds_alternative<Conditional>(inst)) {
            throw Error(Errc::InvalidArgument, "simulate_unitary requires a measurement-free circuit");
        }
    }
    return sv;
}

Mat4 collision_unitary(double delta, double j, double t) {
    Mat4 u{};
    u[0] = std::polar(1.0, -delta * t / 2);
    u[15] = std::polar(1.0, delta * t / 2);
    u[5] = u[0];   // |m=1,u=0>: sigma_z,u = +1
    u[10] = u[15]; // |m=0,u=1>: sigma_z,u = -1
    const double omega = std::hypot(delta / 2, j);
    if (omega > 0.0) {
        const double c = std::cos(omega * t);
        const double s = std::sin(omega * t) / omega;
        const cplx I{0.0, 1.0};
        u[5] = c - I * s * (delta / 2);
        u[10] = c + I * s * (delta / 2);
        u[6] = -I * s * j;  // row 1, col 2
        u[9] = -I * s * j;  // row 2, col 1
    }
    return u;
}

void apply_pulse(StateVector& state, Qubit qubit, PulseLabel pulse, double pulse_error, Rng& rng) {
    auto apply = [&](Pauli p) {
        if (p == Pauli::X) state.apply_x(qubit);
        if (p == Pauli::Y) state.apply_y(qubit);
        if (p == Pauli::Z) state.apply_z(qubit);
    };
    apply(pauli_of(pulse));
    if (pulse_error > 0.0 && rng.uniform() < pulse_error) apply(kPaulis[rng.below(3)]);
}

void evolve_idle_noise(StateVector& state, const std::vector<Qubit>& idle, Nanos t0, Nanos t1,
                       const DeviceModel& device, const std::vector<Qubit>& measuring, Rng* rng) {
    const double dt = static_cast<double>(t1 - t0);
    const auto& nz = device.noise;
    auto is_idle = [&](Qubit q) { return std::find(idle.begin(), idle.end(), q) != idle.end(); };
    for (Qubit u : idle) {
        double rate = static_cast<std::size_t>(u) < nz.static_z_rate.size() ? nz.static_z_rate[static_cast<std::size_t>(u)] : 0.0;
        for (Qubit m : measuring) rate += zphase_rate(device, m, u);
        if (rate != 0.0) state.apply_rz(u, rate * dt);
    }
    for (std::size_t e = 0; e < device.edges.size() && e < nz.zz_rate.size(); ++e) {
        const auto& edge = device.edges[e];
        if (!is_idle(edge.a) || !is_idle(edge.b) || nz.zz_rate[e] == 0.0) continue;
        const double a = nz.zz_rate[e] * dt;
        state.apply_rz(edge.a, -a / 2);
        state.apply_rz(edge.b, -a / 2);
        state.apply_rzz(edge.a, edge.b, a / 2);
    }
    for (const auto& c : nz.collision_pairs) {
        if (!is_idle(c.unitary) || std::find(measuring.begin(), measuring.end(), c.measured) == measuring.end()) continue;
        state.apply_2q(c.measured, c.unitary,
                       collision_unitary(mhz_to_rad_per_ns(c.delta_mhz), mhz_to_rad_per_ns(c.j_eff_mhz), dt));
    }
    if (rng == nullptr) return;
    for (Qubit u : idle) {
        const double rate = static_cast<std::size_t>(u) < nz.t2_dephasing_rate.size()
                                ? nz.t2_dephasing_rate[static_cast<std::size_t>(u)]
                                : 0.0;
        if (rate > 0.0 && rng->uniform() < 1.0 - std::exp(-rate * dt)) state.apply_z(u);
    }
}

}  // namespace decoupler

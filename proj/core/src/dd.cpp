#include "decoupler/dd.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "decoupler/error.hpp"
#include "decoupler/rng.hpp"
#include "json_util.hpp"

namespace decoupler {

DdSequence make_sequence(const std::vector<std::string>& labels) {
    DdSequence s;
    for (const auto& l : labels) {
        const auto p = parse_pulse_label(l);
        if (!p) throw Error(Errc::InvalidArgument, "unknown pulse label '" + l + "'");
        s.pulses.push_back(*p);
    }
    return s;
}

std::string to_string(const DdSequence& seq) {
    std::string out;
    for (PulseLabel p : seq.pulses) {
        if (!out.empty()) out += ' ';
        out += to_string(p);
    }
    return out;
}

Pauli sequence_product(const DdSequence& seq) {
    Pauli p = Pauli::I;
    for (PulseLabel l : seq.pulses) p = p * pauli_of(l);
    return p;
}

DdSequence frame_corrected(const DdSequence& seq) {
    if (seq.pulses.empty()) return seq;
    DdSequence out = seq;
    Pauli prefix = Pauli::I;
    for (std::size_t i = 0; i + 1 < seq.pulses.size(); ++i) prefix = prefix * pauli_of(seq.pulses[i]);
    if (pauli_of(out.pulses.back()) != prefix) out.pulses.back() = plus_label(prefix);
    return out;
}

DdSequence constrained_collision_sequence() {
    DdSequence s;
    s.pulses.assign(6, PulseLabel::I_p);
    s.pulses.push_back(PulseLabel::X_p);
    s.pulses.push_back(PulseLabel::X_p);
    return s;
}

DdSequence identity_sequence(int L) {
    DdSequence s;
    s.pulses.assign(static_cast<std::size_t>(L), PulseLabel::I_p);
    return s;
}

std::vector<PulseEvent> schedule_sequence(const IdleWindow& window, const DdSequence& seq,
                                          const ScheduleOptions& options) {
    if (!window.context.during_mcm || !window.context.ff_boundary) {
        throw Error(Errc::InvalidArgument, "DD sequences are scheduled only in windows overlapping a measurement");
    }
    const int L = seq.length();
    if (L < 1) throw Error(Errc::InvalidArgument, "empty DD sequence");
    const Nanos boundary = *window.context.ff_boundary;
    const Nanos span = boundary - window.start;
    if (L > 1 && span < L) {
        throw Error(Errc::WindowTooShort, "window of " + std::to_string(span) + " ns cannot host " +
                                              std::to_string(L - 1) + " grid pulses");
    }
    const DdSequence applied = options.frame_correction ? frame_corrected(seq) : seq;
    std::vector<PulseEvent> out;
    out.reserve(static_cast<std::size_t>(L));
    for (int i = 1; i < L; ++i) {
        out.push_back({window.qubit, window.start + i * span / L, applied.pulses[static_cast<std::size_t>(i - 1)]});
    }
    const Nanos last = options.final_slot == FinalSlot::AfterFeedforward
                           ? window.context.ff_slot.value_or(boundary)
                           : boundary;
    out.push_back({window.qubit, last, applied.pulses.back()});
    return out;
}

Coloring color_windows(const ScheduledCircuit& sched, const DeviceModel& device, int k) {
    if (k < 1) throw Error(Errc::InvalidArgument, "k must be at least 1");
    const DistanceTable dist(device);
    Coloring colors(sched.idle_windows.size(), -1);
    for (std::size_t i = 0; i < sched.idle_windows.size(); ++i) {
        const auto& w = sched.idle_windows[i];
        if (!w.context.during_mcm) continue;
        int d = kUnreachable;
        for (Qubit m : w.context.measured) d = std::min(d, dist(w.qubit, m));
        colors[i] = d == kUnreachable ? 0 : d % k;
    }
    return colors;
}

const char* to_string(Baseline b) noexcept {
    switch (b) {
        case Baseline::NoDD: return "none";
        case Baseline::XpXmStaggered: return "xpxm";
        case Baseline::MDD: return "mdd";
        case Baseline::FFDD: return "ffdd";
    }
    return "?";
}

std::optional<Baseline> parse_baseline(const std::string& name) {
    for (Baseline b : {Baseline::NoDD, Baseline::XpXmStaggered, Baseline::MDD, Baseline::FFDD}) {
        if (name == to_string(b)) return b;
    }
    return std::nullopt;
}

namespace {

Nanos at_fraction(Nanos a, Nanos b, double f) {
    return a + static_cast<Nanos>(std::llround(f * static_cast<double>(b - a)));
}

void push_pair(std::vector<PulseEvent>& out, Qubit q, Nanos a, Nanos b, std::pair<double, double> f) {
    if (b <= a) return;
    out.push_back({q, at_fraction(a, b, f.first), PulseLabel::X_p});
    out.push_back({q, at_fraction(a, b, f.second), PulseLabel::X_m});
}

}  // namespace

std::vector<PulseEvent> baseline_pulses(const ScheduledCircuit& sched, const Coloring& coloring, Baseline kind,
                                        const BaselineOptions& opt) {
    std::vector<PulseEvent> out;
    if (kind == Baseline::NoDD) return out;
    for (std::size_t i = 0; i < sched.idle_windows.size(); ++i) {
        if (coloring[i] < 0) continue;
        const auto& w = sched.idle_windows[i];
        const Nanos boundary = *w.context.ff_boundary;
        switch (kind) {
            case Baseline::MDD: push_pair(out, w.qubit, w.start, boundary, opt.mdd); break;
            case Baseline::FFDD:
                push_pair(out, w.qubit, w.start, boundary, opt.mdd);
                push_pair(out, w.qubit, boundary, w.context.ff_slot.value_or(boundary), opt.mdd);
                break;
            case Baseline::XpXmStaggered:
                push_pair(out, w.qubit, w.start, w.end, coloring[i] % 2 == 0 ? opt.xpxm_even : opt.xpxm_odd);
                break;
            case Baseline::NoDD: break;
        }
    }
    return out;
}

std::string to_string(const MotifId& id) {
    return "M(" + std::to_string(id.interval) + "," + std::to_string(id.reg) + ")";
}

int Partition::interval_of(Nanos t) const {
    const auto it = std::upper_bound(boundaries.begin(), boundaries.end(), t);
    const int idx = static_cast<int>(it - boundaries.begin()) - 1;
    return std::clamp(idx, 0, std::max(0, n_intervals() - 1));
}

int Partition::register_of(Qubit q) const {
    for (std::size_t r = 0; r < registers.size(); ++r) {
        if (std::find(registers[r].begin(), registers[r].end(), q) != registers[r].end()) return static_cast<int>(r);
    }
    return -1;
}

namespace {

struct MeasureSpan {
    Qubit qubit;
    Nanos start;
    Nanos end;
};

std::vector<MeasureSpan> measure_spans(const ScheduledCircuit& sched) {
    std::vector<MeasureSpan> out;
    for (const auto& e : sched.events) {
        if (const auto* m = std::get_if<Measure>(&sched.instruction(e))) out.push_back({m->qubit, e.start, e.end()});
    }
    return out;
}

}  // namespace

Partition make_partition(const ScheduledCircuit& sched, int n_intervals, const std::vector<std::vector<Qubit>>& registers) {
    if (n_intervals < 1) throw Error(Errc::InvalidArgument, "need at least one interval");
    std::set<Qubit> seen;
    for (const auto& reg : registers) {
        for (Qubit q : reg) {
            if (q < 0 || q >= sched.circuit.n_qubits) {
                throw Error(Errc::InvalidArgument, "register qubit " + std::to_string(q) + " out of range");
            }
            if (!seen.insert(q).second) {
                throw Error(Errc::OverlappingRegisters, "qubit " + std::to_string(q) + " appears in two registers");
            }
        }
    }
    Partition p;
    p.registers = registers;
    const auto spans = measure_spans(sched);
    std::vector<Nanos> layers;
    for (const auto& s : spans) layers.push_back(s.start);
    std::sort(layers.begin(), layers.end());
    layers.erase(std::unique(layers.begin(), layers.end()), layers.end());

    const Nanos total = sched.total_duration;
    p.boundaries.push_back(0);
    if (layers.empty()) {
        for (int i = 1; i < n_intervals; ++i) p.boundaries.push_back(total * i / n_intervals);
        p.boundaries.push_back(total);
        return p;
    }
    const int A = std::min<int>(n_intervals, static_cast<int>(layers.size()));
    const auto n_layers = static_cast<std::size_t>(layers.size());
    for (int g = 0; g + 1 < A; ++g) {
        const std::size_t last = n_layers * static_cast<std::size_t>(g + 1) / static_cast<std::size_t>(A) - 1;
        Nanos last_end = 0;
        for (const auto& s : spans) {
            if (s.start <= layers[last]) last_end = std::max(last_end, s.end);
        }
        const Nanos next_start = layers[last + 1];
        Nanos b = std::max(last_end, std::min(next_start, last_end + sched.timing.tau_ff));
        b = std::max(b, p.boundaries.back());
        p.boundaries.push_back(std::min(b, total));
    }
    p.boundaries.push_back(total);
    return p;
}

std::vector<std::vector<Qubit>> contiguous_registers(int n_qubits, int size) {
    if (size < 1) throw Error(Errc::InvalidArgument, "register size must be positive");
    std::vector<std::vector<Qubit>> regs;
    for (Qubit q = 0; q < n_qubits; ++q) {
        if (q % size == 0) regs.emplace_back();
        regs.back().push_back(q);
    }
    return regs;
}

std::vector<Motif> partition_motifs(const ScheduledCircuit& sched, const Partition& partition) {
    std::vector<Motif> motifs;
    const auto spans = measure_spans(sched);
    const auto& circ = sched.circuit;
    for (int i = 0; i < partition.n_intervals(); ++i) {
        const Nanos t0 = partition.boundaries[static_cast<std::size_t>(i)];
        const Nanos t1 = partition.boundaries[static_cast<std::size_t>(i + 1)];
        for (std::size_t r = 0; r < partition.registers.size(); ++r) {
            const auto& reg = partition.registers[r];
            auto in_reg = [&](Qubit q) { return std::find(reg.begin(), reg.end(), q) != reg.end(); };
            const bool has_mcm = std::any_of(spans.begin(), spans.end(), [&](const MeasureSpan& s) {
                return in_reg(s.qubit) && s.start < t1 && s.end > t0;
            });
            if (!has_mcm) continue;

            Motif m;
            m.id = {i, static_cast<int>(r)};
            m.t_start = t0;
            m.t_end = t1;
            m.qubits = reg;
            std::sort(m.qubits.begin(), m.qubits.end());
            m.has_mcm = true;
            m.subcircuit = DynamicCircuit(circ.n_qubits, circ.n_clbits);
            std::set<Clbit> written;
            for (const auto& e : sched.events) {
                if (e.start < t0 || e.start >= t1) continue;
                const auto& inst = sched.instruction(e);
                const auto qs = instruction_qubits(inst);
                if (const auto* b = std::get_if<Barrier>(&inst)) {
                    Barrier kept;
                    for (Qubit q : b->qubits) {
                        if (in_reg(q)) kept.qubits.push_back(q);
                    }
                    if (!kept.qubits.empty()) m.subcircuit.append(kept);
                    continue;
                }
                if (!std::all_of(qs.begin(), qs.end(), in_reg)) continue;
                if (const auto* c = std::get_if<Conditional>(&inst)) {
                    if (!written.count(c->clbit)) continue;
                }
                if (const auto* ms = std::get_if<Measure>(&inst)) written.insert(ms->clbit);
                m.subcircuit.append(inst);
            }
            motifs.push_back(std::move(m));
        }
    }
    return motifs;
}

std::vector<Motif> partition_motifs(const ScheduledCircuit& sched, int n_intervals,
                                    const std::vector<std::vector<Qubit>>& registers) {
    return partition_motifs(sched, make_partition(sched, n_intervals, registers));
}

std::vector<std::vector<std::size_t>> parallel_groups(const std::vector<Motif>& motifs, const DeviceModel& device,
                                                      int d_corr) {
    const DistanceTable dist(device);
    auto separation = [&](const Motif& a, const Motif& b) {
        int d = kUnreachable;
        for (Qubit x : a.qubits) {
            for (Qubit y : b.qubits) d = std::min(d, dist(x, y));
        }
        return d;
    };
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < motifs.size(); ++i) {
        bool placed = false;
        for (auto& g : groups) {
            const bool ok = std::all_of(g.begin(), g.end(), [&](std::size_t j) {
                return separation(motifs[i], motifs[j]) > 2 * d_corr;
            });
            if (ok) {
                g.push_back(i);
                placed = true;
                break;
            }
        }
        if (!placed) groups.push_back({i});
    }
    return groups;
}

StrategyMap remap_strategies(const StrategyMap& strategies, const PadOptions& options) {
    switch (options.mode) {
        case PadMode::Matched: return strategies;
        case PadMode::Unaware: {
            if (!options.unaware_source) throw Error(Errc::InvalidArgument, "Unaware mode needs a source motif");
            const auto it = strategies.find(*options.unaware_source);
            if (it == strategies.end()) {
                throw Error(Errc::MissingStrategy, "no strategy for " + to_string(*options.unaware_source));
            }
            StrategyMap out;
            for (const auto& [id, s] : strategies) out[id] = it->second;
            return out;
        }
        case PadMode::Scrambled: {
            std::vector<MotifId> keys;
            for (const auto& [id, s] : strategies) keys.push_back(id);
            std::vector<std::size_t> perm(keys.size());
            for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
            if (keys.size() >= 2) {
                Rng rng = substream(options.scramble_seed, "dd.scramble");
                auto fixed_point = [&] {
                    for (std::size_t i = 0; i < perm.size(); ++i) {
                        if (perm[i] == i) return true;
                    }
                    return false;
                };
                do {
                    rng.shuffle(perm.begin(), perm.end());
                } while (fixed_point());
            }
            StrategyMap out;
            for (std::size_t i = 0; i < keys.size(); ++i) out[keys[i]] = strategies.at(keys[perm[i]]);
            return out;
        }
    }
    return strategies;
}

std::optional<MotifId> window_motif(const IdleWindow& window, const Partition& partition, const StrategyMap& strategies,
                                    MotifLookup lookup) {
    if (!window.context.during_mcm || !window.context.ff_boundary) return std::nullopt;
    if (lookup == MotifLookup::MeasuredRegister) {
        for (Qubit m : window.context.measured) {
            const int r = partition.register_of(m);
            for (const auto& [id, strat] : strategies) {
                if (id.reg == r) return id;
            }
        }
        return std::nullopt;
    }
    const int interval = partition.interval_of(*window.context.ff_boundary - 1);
    const int reg = partition.register_of(window.qubit);
    if (reg >= 0 && strategies.count({interval, reg})) return MotifId{interval, reg};
    for (Qubit m : window.context.measured) {
        const int r = partition.register_of(m);
        if (r >= 0 && strategies.count({interval, r})) return MotifId{interval, r};
    }
    return std::nullopt;
}

namespace {

template <class Lookup>
std::vector<PulseEvent> pad_with(const ScheduledCircuit& sched, const Coloring& coloring, const DeviceModel& device,
                                 const std::vector<CollisionFlag>& collisions, const ScheduleOptions& options,
                                 int L, Lookup&& lookup) {
    const auto adj = adjacency(device);
    auto adjacent = [&](Qubit a, Qubit b) {
        if (a < 0 || static_cast<std::size_t>(a) >= adj.size()) return false;
        const auto& row = adj[static_cast<std::size_t>(a)];
        return std::find(row.begin(), row.end(), b) != row.end();
    };
    std::vector<PulseEvent> out;
    for (std::size_t i = 0; i < sched.idle_windows.size(); ++i) {
        if (coloring[i] < 0) continue;
        const auto& w = sched.idle_windows[i];
        const auto& measured = w.context.measured;
        auto measuring = [&](Qubit m) { return std::find(measured.begin(), measured.end(), m) != measured.end(); };

        bool flagged = false;
        bool neighbour = false;
        for (const auto& f : collisions) {
            if (!measuring(f.measured)) continue;
            if (f.unitary == w.qubit) flagged = true;
            else if (w.qubit != f.measured && adjacent(f.unitary, w.qubit)) neighbour = true;
        }
        DdSequence seq;
        if (flagged) {
            seq = constrained_collision_sequence();
        } else if (neighbour) {
            seq = identity_sequence(L);
        } else {
            seq = lookup(w, coloring[i]);
        }
        try {
            const auto ev = schedule_sequence(w, seq, options);
            out.insert(out.end(), ev.begin(), ev.end());
        } catch (const Error& e) {
            if (e.code() != Errc::WindowTooShort) throw;
        }
    }
    return out;
}

const DdSequence& color_sequence(const DdStrategy& s, int color) {
    if (s.sequences.empty()) throw Error(Errc::InvalidArgument, "strategy has no sequences");
    return s.sequences[static_cast<std::size_t>(color % s.k())];
}

}  // namespace

std::vector<PulseEvent> pad_strategy(const ScheduledCircuit& sched, const Coloring& coloring, const Partition& partition,
                                     const StrategyMap& strategies, const DeviceModel& device,
                                     const std::vector<CollisionFlag>& collisions, const PadOptions& options) {
    const StrategyMap mapped = remap_strategies(strategies, options);
    const int L = mapped.empty() ? 8 : mapped.begin()->second.L();
    return pad_with(sched, coloring, device, collisions, options.schedule, L, [&](const IdleWindow& w, int color) {
        const auto id = window_motif(w, partition, mapped, options.lookup);
        if (!id) {
            throw Error(Errc::MissingStrategy, "no strategy for window on qubit " + std::to_string(w.qubit) +
                                                   " at t=" + std::to_string(w.start));
        }
        return color_sequence(mapped.at(*id), color);
    });
}

std::vector<PulseEvent> pad_uniform(const ScheduledCircuit& sched, const Coloring& coloring, const DdStrategy& strategy,
                                    const DeviceModel& device, const std::vector<CollisionFlag>& collisions,
                                    const ScheduleOptions& options) {
    return pad_with(sched, coloring, device, collisions, options, strategy.L(),
                    [&](const IdleWindow&, int color) { return color_sequence(strategy, color); });
}

std::string DdMode::name() const {
    switch (kind) {
        case Kind::Baseline: return to_string(baseline);
        case Kind::Uniform: return "uniform";
        case Kind::Learned:
            switch (pad.mode) {
                case PadMode::Matched: return "gadd";
                case PadMode::Unaware: return "unaware";
                case PadMode::Scrambled: return "scrambled";
            }
    }
    return "?";
}

std::vector<PulseEvent> dd_pulses(const ScheduledCircuit& sched, const DeviceModel& device, const DdMode& mode) {
    if (mode.kind == DdMode::Kind::Baseline) {
        if (mode.baseline == Baseline::NoDD) return {};
        return baseline_pulses(sched, color_windows(sched, device, 2), mode.baseline, mode.baseline_options);
    }
    std::vector<CollisionFlag> flags;
    if (mode.collision_aware) flags = detect_all_collisions(device, mode.thresholds);
    if (mode.kind == DdMode::Kind::Uniform) {
        return pad_uniform(sched, color_windows(sched, device, mode.uniform.k()), mode.uniform, device, flags,
                           mode.pad.schedule);
    }
    if (mode.strategies.empty()) throw Error(Errc::MissingStrategy, "learned DD mode without strategies");
    auto registers = mode.registers;
    if (registers.empty()) registers = {sched.circuit.active_qubits()};
    // Strategies learned on a wider circuit transfer to a narrower one.
    for (auto& reg : registers) {
        std::erase_if(reg, [&](Qubit q) { return q >= sched.circuit.n_qubits; });
    }
    const Partition partition = make_partition(sched, mode.n_intervals, registers);
    const int k = mode.strategies.begin()->second.k();
    return pad_strategy(sched, color_windows(sched, device, k), partition, mode.strategies, device, flags, mode.pad);
}

namespace {

using detail::json;

json sequences_json(const DdStrategy& s) {
    json seqs = json::array();
    for (const auto& seq : s.sequences) {
        json row = json::array();
        for (PulseLabel p : seq.pulses) row.push_back(to_string(p));
        seqs.push_back(row);
    }
    return seqs;
}

DdStrategy sequences_from(const json& j, const std::string& where) {
    DdStrategy s;
    const auto rows = detail::get_as<std::vector<std::vector<std::string>>>(j, where);
    for (const auto& r : rows) s.sequences.push_back(make_sequence(r));
    if (s.sequences.empty()) throw Error(Errc::ParseError, where + " is empty");
    for (const auto& seq : s.sequences) {
        if (seq.length() != s.L()) throw Error(Errc::ParseError, "sequences of different lengths in " + where);
    }
    return s;
}

void check_shape(const DdStrategy& s, int L, int k, const std::string& where) {
    if (L > 0 && s.L() != L) {
        throw Error(Errc::InvalidArgument, where + ": sequence length " + std::to_string(s.L()) + ", expected L=" + std::to_string(L));
    }
    if (k > 0 && s.k() != k) {
        throw Error(Errc::InvalidArgument, where + ": " + std::to_string(s.k()) + " colors, expected k=" + std::to_string(k));
    }
}

}  // namespace

std::string strategy_to_json(const DdStrategy& s, int indent) {
    json j{{"L", s.L()}, {"k", s.k()}, {"sequences", sequences_json(s)}};
    return j.dump(indent) + "\n";
}

DdStrategy strategy_from_json(const std::string& text) {
    const json j = detail::parse_json(text);
    DdStrategy s = sequences_from(detail::field(j, "sequences", "strategy"), "sequences");
    check_shape(s, j.contains("L") ? j["L"].get<int>() : 0, j.contains("k") ? j["k"].get<int>() : 0, "strategy");
    return s;
}

std::string strategy_set_to_json(const StrategyMap& strategies, const Partition& partition, int indent,
                                 std::optional<MotifId> best) {
    json motifs = json::array();
    int L = 0;
    int k = 0;
    for (const auto& [id, s] : strategies) {
        L = s.L();
        k = s.k();
        json qubits = json::array();
        if (id.reg >= 0 && static_cast<std::size_t>(id.reg) < partition.registers.size()) {
            qubits = partition.registers[static_cast<std::size_t>(id.reg)];
        }
        motifs.push_back({{"interval", id.interval}, {"register", id.reg}, {"qubits", qubits},
                          {"sequences", sequences_json(s)}});
    }
    json j{{"L", L}, {"k", k}, {"n_intervals", partition.n_intervals()}, {"registers", partition.registers},
           {"motifs", motifs}};
    if (best) j["best"] = {{"interval", best->interval}, {"register", best->reg}};
    return j.dump(indent) + "\n";
}

StrategyMap strategy_set_from_json(const std::string& text, int expect_L, int expect_k) {
    const json j = detail::parse_json(text);
    StrategyMap out;
    if (!j.contains("motifs")) {
        // A bare strategy serves motif (0, 0).
        DdStrategy s = sequences_from(detail::field(j, "sequences", "strategy"), "sequences");
        check_shape(s, expect_L, expect_k, "strategy");
        out[{0, 0}] = std::move(s);
        return out;
    }
    const auto& motifs = j["motifs"];
    for (std::size_t i = 0; i < motifs.size(); ++i) {
        const std::string where = "motifs[" + std::to_string(i) + "]";
        MotifId id{detail::field_as<int>(motifs[i], "interval", where), detail::field_as<int>(motifs[i], "register", where)};
        DdStrategy s = sequences_from(detail::field(motifs[i], "sequences", where), where + ".sequences");
        check_shape(s, expect_L, expect_k, where);
        out[id] = std::move(s);
    }
    return out;
}

StrategySet strategy_set_read(const std::string& text, int expect_L, int expect_k) {
    StrategySet set;
    set.strategies = strategy_set_from_json(text, expect_L, expect_k);
    const json j = detail::parse_json(text);
    if (auto it = j.find("registers"); it != j.end()) {
        set.registers = detail::get_as<std::vector<std::vector<Qubit>>>(*it, "registers");
    } else if (auto m = j.find("motifs"); m != j.end()) {
        for (const auto& motif : *m) {
            const auto reg = detail::field_as<std::size_t>(motif, "register", "motif");
            if (set.registers.size() <= reg) set.registers.resize(reg + 1);
            set.registers[reg] = detail::field_as<std::vector<Qubit>>(motif, "qubits", "motif");
        }
    }
    if (auto it = j.find("n_intervals"); it != j.end()) {
        set.n_intervals = detail::get_as<int>(*it, "n_intervals");
    } else {
        for (const auto& [id, s] : set.strategies) set.n_intervals = std::max(set.n_intervals, id.interval + 1);
    }
    if (auto it = j.find("best"); it != j.end()) {
        set.best = MotifId{detail::field_as<int>(*it, "interval", "best"), detail::field_as<int>(*it, "register", "best")};
    }
    for (const auto& [id, s] : set.strategies) {
        if (id.interval < 0 || id.interval >= set.n_intervals || id.reg < 0 ||
            static_cast<std::size_t>(id.reg) >= set.registers.size()) {
            throw Error(Errc::ParseError, "strategy set motif " + to_string(id) + " lies outside its grid");
        }
    }
    return set;
}

}  // namespace decoupler

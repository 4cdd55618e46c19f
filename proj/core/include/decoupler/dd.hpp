#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "decoupler/circuit.hpp"
#include "decoupler/device.hpp"
#include "decoupler/pulse.hpp"
#include "decoupler/simulator.hpp"

namespace decoupler {

struct DdSequence {
    std::vector<PulseLabel> pulses;

    int length() const noexcept { return static_cast<int>(pulses.size()); }
    bool operator==(const DdSequence&) const = default;
    auto operator<=>(const DdSequence&) const = default;
};

/// k sequences indexed by color.
struct DdStrategy {
    std::vector<DdSequence> sequences;

    int k() const noexcept { return static_cast<int>(sequences.size()); }
    int L() const noexcept { return sequences.empty() ? 0 : sequences.front().length(); }
    bool operator==(const DdStrategy&) const = default;
    auto operator<=>(const DdStrategy&) const = default;
};

DdSequence make_sequence(const std::vector<std::string>& labels);
std::string to_string(const DdSequence& seq);

/// Product of the sequence's Paulis modulo phase.
Pauli sequence_product(const DdSequence& seq);

/// Replaces the last pulse by the product of the preceding ones, so the whole
/// sequence multiplies to the identity. The original label is kept when it
/// already has the right Pauli.
DdSequence frame_corrected(const DdSequence& seq);

/// I_p x 6 then X_p, X_p.
DdSequence constrained_collision_sequence();
DdSequence identity_sequence(int L);

enum class FinalSlot {
    /// P_L fires when the feedforward latency has elapsed (first instant of
    /// the classical branch).
    AfterFeedforward,
    /// P_L fires at the end of the measurement.
    AtBoundary,
};

struct ScheduleOptions {
    FinalSlot final_slot = FinalSlot::AfterFeedforward;
    bool frame_correction = true;
};

/// P_1..P_{L-1} on the uniform grid start + i*(ff_boundary - start)/L and P_L
/// at the feedforward slot. Throws WindowTooShort when the grid has fewer
/// than L-1 distinct nanosecond slots and InvalidArgument outside MCM windows.
std::vector<PulseEvent> schedule_sequence(const IdleWindow& window, const DdSequence& seq,
                                          const ScheduleOptions& options = {});

/// Color of each idle window (indexed like sched.idle_windows); -1 for windows
/// not overlapping a measurement. Color = min distance to a measured qubit mod k.
using Coloring = std::vector<int>;
Coloring color_windows(const ScheduledCircuit& sched, const DeviceModel& device, int k);

enum class Baseline { NoDD, XpXmStaggered, MDD, FFDD };

const char* to_string(Baseline b) noexcept;
std::optional<Baseline> parse_baseline(const std::string& name);

struct BaselineOptions {
    std::pair<double, double> mdd{0.25, 0.75};
    std::pair<double, double> xpxm_even{0.25, 0.75};
    std::pair<double, double> xpxm_odd{0.5, 1.0};
};

/// Baseline pulses on every MCM window. MDD places two X pulses in
/// [start, ff_boundary); FFDD adds a second pair in [ff_boundary, ff_slot);
/// XpXm places X_p, X_m at color-dependent fractions of the whole window.
std::vector<PulseEvent> baseline_pulses(const ScheduledCircuit& sched, const Coloring& coloring, Baseline kind,
                                        const BaselineOptions& options = {});

/// Motif (T_i, R_j); ids are zero-based.
struct MotifId {
    int interval = 0;
    int reg = 0;
    auto operator<=>(const MotifId&) const = default;
};

std::string to_string(const MotifId& id);

/// Time intervals and qubit registers of a motif grid.
struct Partition {
    std::vector<Nanos> boundaries;  // size A+1, boundaries.front() == 0
    std::vector<std::vector<Qubit>> registers;

    int n_intervals() const noexcept { return static_cast<int>(boundaries.size()) - 1; }
    int interval_of(Nanos t) const;
    /// -1 when the qubit belongs to no register.
    int register_of(Qubit q) const;
};

/// Splits the measurement layers (distinct measure start times) into
/// `n_intervals` consecutive groups of near-equal size. A boundary sits after
/// the last measurement of a group and its feedforward latency, or at the next
/// measurement if that comes first. Throws OverlappingRegisters.
Partition make_partition(const ScheduledCircuit& sched, int n_intervals, const std::vector<std::vector<Qubit>>& registers);

/// Registers of consecutive qubits of the given size (the last may be shorter).
std::vector<std::vector<Qubit>> contiguous_registers(int n_qubits, int size);

struct Motif {
    MotifId id;
    Nanos t_start = 0;
    Nanos t_end = 0;
    std::vector<Qubit> qubits;
    bool has_mcm = false;
    /// Instructions of the register scheduled inside the interval; conditionals
    /// whose clbit is written outside the motif are dropped.
    DynamicCircuit subcircuit;
};

/// Motifs containing a measurement on one of their register qubits.
std::vector<Motif> partition_motifs(const ScheduledCircuit& sched, const Partition& partition);
std::vector<Motif> partition_motifs(const ScheduledCircuit& sched, int n_intervals,
                                    const std::vector<std::vector<Qubit>>& registers);

/// Greedy grouping: a motif joins the first group whose members' registers are
/// all farther than 2*d_corr apart from its own.
std::vector<std::vector<std::size_t>> parallel_groups(const std::vector<Motif>& motifs, const DeviceModel& device,
                                                      int d_corr = 4);

using StrategyMap = std::map<MotifId, DdStrategy>;

enum class PadMode { Matched, Unaware, Scrambled };

/// How a window finds its motif.
enum class MotifLookup {
    /// (interval, register of the window qubit), falling back to the
    /// register of the measured qubit.
    WindowRegister,
    /// The strategy learned for the measured qubit's register, whatever the
    /// time; used to carry strategies to circuits other than the training
    /// target.
    MeasuredRegister,
};

struct PadOptions {
    PadMode mode = PadMode::Matched;
    /// Unaware: the motif whose strategy is applied everywhere.
    std::optional<MotifId> unaware_source;
    std::uint64_t scramble_seed = 0;
    MotifLookup lookup = MotifLookup::WindowRegister;
    ScheduleOptions schedule;
};

/// The strategy each motif's windows use under a counterfactual mode.
/// Scrambled is a seeded derangement of the motif set.
StrategyMap remap_strategies(const StrategyMap& strategies, const PadOptions& options);

/// Motif serving a window. WindowRegister: (interval, register of the window
/// qubit) when present in `strategies`, otherwise the motif of the measured
/// qubit's register. MeasuredRegister: the lowest-interval motif of the first
/// measured qubit's register that has one.
std::optional<MotifId> window_motif(const IdleWindow& window, const Partition& partition, const StrategyMap& strategies,
                                    MotifLookup lookup = MotifLookup::WindowRegister);

/// DD pulses for every colored window. Windows on a collision-flagged
/// (measured, unitary) pair get IIIIIIX_pX_p; neighbours of the flagged qubit
/// idling in the same measurement get all-identity. Windows too short for the
/// grid are left empty. Throws MissingStrategy.
std::vector<PulseEvent> pad_strategy(const ScheduledCircuit& sched, const Coloring& coloring, const Partition& partition,
                                     const StrategyMap& strategies, const DeviceModel& device,
                                     const std::vector<CollisionFlag>& collisions, const PadOptions& options = {});

/// Same strategy on every colored window.
std::vector<PulseEvent> pad_uniform(const ScheduledCircuit& sched, const Coloring& coloring, const DdStrategy& strategy,
                                    const DeviceModel& device, const std::vector<CollisionFlag>& collisions,
                                    const ScheduleOptions& options = {});

/// How an experiment decouples its idle windows.
struct DdMode {
    enum class Kind { Baseline, Learned, Uniform };
    Kind kind = Kind::Baseline;
    Baseline baseline = Baseline::NoDD;
    BaselineOptions baseline_options;
    /// Learned: strategies per motif of the grid (n_intervals x registers).
    StrategyMap strategies;
    int n_intervals = 1;
    std::vector<std::vector<Qubit>> registers;
    PadOptions pad;
    /// Uniform: one strategy everywhere.
    DdStrategy uniform;
    /// Learned and Uniform substitute the constrained sequences on
    /// collision-flagged windows.
    bool collision_aware = true;
    CollisionThresholds thresholds;

    static DdMode none() { return {}; }
    static DdMode of(Baseline b) {
        DdMode m;
        m.baseline = b;
        return m;
    }
    std::string name() const;
};

std::vector<PulseEvent> dd_pulses(const ScheduledCircuit& sched, const DeviceModel& device, const DdMode& mode);

/// Strategy JSON: {"L": 8, "k": 2, "sequences": [["X_m", ...], ...]}
std::string strategy_to_json(const DdStrategy& s, int indent = 2);
DdStrategy strategy_from_json(const std::string& text);

/// Learned strategies with the grid they were learned on.
struct StrategySet {
    StrategyMap strategies;
    int n_intervals = 1;
    std::vector<std::vector<Qubit>> registers;
    /// Motif with the best final utility, when known.
    std::optional<MotifId> best;
};

/// Learned strategy set: {"L", "k", "n_intervals", "registers", "best",
/// "motifs": [{"interval", "register", "qubits", "sequences"}]}
std::string strategy_set_to_json(const StrategyMap& strategies, const Partition& partition, int indent = 2,
                                 std::optional<MotifId> best = std::nullopt);
StrategyMap strategy_set_from_json(const std::string& text, int expect_L = 0, int expect_k = 0);
/// Full set; the grid defaults to one interval and the motifs' registers when
/// the file does not carry it.
StrategySet strategy_set_read(const std::string& text, int expect_L = 0, int expect_k = 0);

}  // namespace decoupler

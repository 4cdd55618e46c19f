#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "decoupler/circuit.hpp"
#include "decoupler/timing.hpp"

namespace decoupler {

struct Edge {
    Qubit a = 0;
    Qubit b = 0;
    double coupling_mhz = 0.0;
    bool operator==(const Edge&) const = default;
};

/// Measurement-induced Z rotation on `unitary` while `measured` is read out.
struct ZPhaseRate {
    Qubit measured = 0;
    Qubit unitary = 0;
    double rad_per_ns = 0.0;
    bool operator==(const ZPhaseRate&) const = default;
};

/// Stark-shifted near-resonant pair; exchange dynamics run while `measured`
/// is being read out.
struct CollisionPair {
    Qubit measured = 0;
    Qubit unitary = 0;
    double delta_mhz = 0.0;
    double j_eff_mhz = 0.0;
    bool operator==(const CollisionPair&) const = default;
};

struct NoiseParams {
    std::vector<ZPhaseRate> zphase_rate;
    /// Conditional |11> phase rate per edge (indexed like DeviceModel::edges).
    std::vector<double> zz_rate;
    std::vector<double> readout_error;
    std::vector<CollisionPair> collision_pairs;
    /// Depolarizing probability applied after every DD pulse.
    double pulse_error = 0.0;
    /// Per-qubit stochastic dephasing rate (1/ns); empty means zero.
    std::vector<double> t2_dephasing_rate;
    /// Per-qubit always-on Z rotation rate (rad/ns) on idle qubits; empty means zero.
    std::vector<double> static_z_rate;

    bool operator==(const NoiseParams&) const = default;
};

struct DeviceModel {
    int n_qubits = 0;
    std::vector<Edge> edges;
    std::vector<double> omega01;  // MHz
    std::vector<double> omega12;  // MHz
    DeviceTiming timing;
    NoiseParams noise;

    bool operator==(const DeviceModel&) const = default;
};

/// Structural problems with a device description (empty when valid).
std::vector<std::string> validate(const DeviceModel& device);

/// Resizes per-qubit and per-edge noise vectors to the device size, filling zeros.
void normalize_noise(DeviceModel& device);

inline constexpr int kUnreachable = std::numeric_limits<int>::max();

std::vector<std::vector<Qubit>> adjacency(const DeviceModel& device);

/// Hop distance on the coupling graph, kUnreachable when disconnected.
int graph_distance(const DeviceModel& device, Qubit a, Qubit b);

/// All-pairs hop distances (BFS from every qubit).
class DistanceTable {
public:
    DistanceTable() = default;
    explicit DistanceTable(const DeviceModel& device);

    int operator()(Qubit a, Qubit b) const {
        return dist_[static_cast<std::size_t>(a) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(b)];
    }
    int size() const noexcept { return n_; }

private:
    int n_ = 0;
    std::vector<int> dist_;
};

/// Noise rate lookups used by the simulator.
double zphase_rate(const DeviceModel& device, Qubit measured, Qubit unitary);
double readout_error(const DeviceModel& device, Qubit q);
std::optional<std::size_t> edge_index(const DeviceModel& device, Qubit a, Qubit b);

enum class CollisionKind { Type1, Type3 };

const char* to_string(CollisionKind kind) noexcept;

struct CollisionFlag {
    Qubit measured = 0;
    Qubit unitary = 0;
    CollisionKind kind = CollisionKind::Type1;
    double delta1 = 0.0;
    double delta3 = 0.0;
    bool operator==(const CollisionFlag&) const = default;
};

struct CollisionThresholds {
    double stark_shift_mhz = -25.0;
    double type1_mhz = 17.0;
    double type3_mhz = 30.0;
    int max_distance = 4;
};

/// Frequency-collision check of every unitary qubit within `max_distance` of
/// the measured qubit against the Stark-shifted measured frequency:
///   delta1 = |omega01(m) + shift - omega01(u)|  (Type1 if <= type1_mhz)
///   delta3 = |omega01(m) + shift - omega12(u)|  (Type3 if <= type3_mhz)
std::vector<CollisionFlag> detect_collisions(const DeviceModel& device, Qubit measured,
                                             const CollisionThresholds& thresholds = {});

/// Flags for every qubit taken as the measured one.
std::vector<CollisionFlag> detect_all_collisions(const DeviceModel& device,
                                                 const CollisionThresholds& thresholds = {});

enum class Topology { Chain, HeavyHexPatch };

struct InjectedCollision {
    Qubit measured = 0;
    Qubit unitary = 0;
    CollisionKind kind = CollisionKind::Type1;
};

struct SynthesisOptions {
    double omega01_min = 4900.0;
    double omega01_max = 5100.0;
    double anharmonicity_mhz = -330.0;
    double coupling_min_mhz = 1.5;
    double coupling_max_mhz = 3.0;
    double zphase_min = 1e-4;  // rad/ns, log-uniform
    double zphase_max = 2e-3;
    int zphase_range = 2;      // hops
    double zz_min = 2e-5;      // rad/ns, log-uniform
    double zz_max = 1e-4;
    double readout_min = 0.005;
    double readout_max = 0.02;
    double collision_j_min_mhz = 1.0;
    double collision_j_max_mhz = 5.0;
    double collision_delta_max_mhz = 10.0;
    std::vector<InjectedCollision> inject;
    CollisionThresholds thresholds;
};

/// Deterministic synthetic device. Frequencies are rejection-sampled so that
/// no Type1/Type3 collision exists unless explicitly injected.
DeviceModel synthesize_device(int n_qubits, Topology topology, std::uint64_t seed,
                              const SynthesisOptions& options = {});

}  // namespace decoupler

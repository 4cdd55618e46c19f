#pragma once

#include <cstdint>
#include <vector>

#include "decoupler/circuit.hpp"
#include "decoupler/device.hpp"
#include "decoupler/distribution.hpp"
#include "decoupler/pulse.hpp"
#include "decoupler/rng.hpp"
#include "decoupler/statevector.hpp"

namespace decoupler {

/// An instantaneous DD pulse on an idle qubit.
struct PulseEvent {
    Qubit qubit = 0;
    Nanos time = 0;
    PulseLabel pulse = PulseLabel::I_p;
    bool operator==(const PulseEvent&) const = default;
};

struct SimOptions {
    /// Worker threads for shot chunks (results do not depend on this).
    int threads = 1;
    /// Cap on branch-tree nodes in exact evaluation.
    std::size_t max_branches = std::size_t{1} << 20;
    /// Exact mode drops branches whose conditional probability is below this.
    double prune_below = 1e-14;
    /// Ignore every noise term of the device (ideal pulses and readout too).
    bool noiseless = false;
};

/// Throws PulseOutsideWindow unless every pulse lies in [start, end] of an
/// idle window on its qubit.
void check_pulses(const ScheduledCircuit& sched, const std::vector<PulseEvent>& pulses);

/// Shot-sampled trajectories. Shot s draws every random number from its own
/// stream (seed, s), so counts are independent of thread count and of how
/// trajectories are grouped internally.
OutcomeDistribution run_shots(const ScheduledCircuit& sched, const std::vector<PulseEvent>& pulses,
                              const DeviceModel& device, std::uint64_t shots, std::uint64_t seed,
                              const SimOptions& options = {});

/// Exact outcome probabilities by enumerating every measurement (and noise)
/// branch with its weight. The one-argument form is noiseless.
ProbabilityMap exact_distribution(const ScheduledCircuit& sched, const SimOptions& options = {});
ProbabilityMap exact_distribution(const ScheduledCircuit& sched, const std::vector<PulseEvent>& pulses,
                                  const DeviceModel& device, const SimOptions& options = {});

/// Final state of a measurement-free circuit, ignoring timing and noise.
StateVector simulate_unitary(const DynamicCircuit& circuit);
void apply_gate(StateVector& state, const Gate& gate);

/// 2*pi * 1e-3 * f: MHz to rad/ns.
constexpr double mhz_to_rad_per_ns(double mhz) noexcept { return 6.283185307179586 * 1e-3 * mhz; }

/// exp(-i H t) for H = (delta/2) Z_u + j (s+_m s-_u + h.c.), rates in rad/ns.
/// Basis index is b_measured + 2*b_unitary.
Mat4 collision_unitary(double delta, double j, double t);

/// Ideal Pauli for the label, then with probability pulse_error a uniformly
/// random non-identity Pauli.
void apply_pulse(StateVector& state, Qubit qubit, PulseLabel pulse, double pulse_error, Rng& rng);

/// Idle noise over [t0, t1) for the listed idle qubits while `measuring` are
/// read out. State qubit indices are device indices. Stochastic dephasing is
/// sampled only when `rng` is given.
void evolve_idle_noise(StateVector& state, const std::vector<Qubit>& idle, Nanos t0, Nanos t1,
                       const DeviceModel& device, const std::vector<Qubit>& measuring, Rng* rng = nullptr);

}  // namespace decoupler

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "decoupler/circuit.hpp"
#include "decoupler/dd.hpp"
#include "decoupler/device.hpp"
#include "decoupler/rb_fit.hpp"
#include "decoupler/rng.hpp"

namespace decoupler {

enum class RbKind { McmRb, DcRbZ, DcRbI };

const char* to_string(RbKind kind) noexcept;
std::optional<RbKind> parse_rb_kind(const std::string& name);

/// A benchmark circuit and the clbit holding each qubit's final readout.
struct RbCircuit {
    DynamicCircuit circuit;
    std::map<Qubit, Clbit> readout;
};

/// MCM-RB: l random Cliffords on every unitary qubit followed by the recovery
/// Clifford; between adjacent Cliffords every measured qubit is read out
/// (no reset) and all qubits idle for tau_ff. Clbits 0.. hold the final
/// readout of unitaries then measured qubits; MCM results follow.
RbCircuit build_mcm_rb(int n_qubits, const std::vector<Qubit>& measured, const std::vector<Qubit>& unitaries, int l,
                       Rng& rng, Nanos tau_ff);

/// One DC-RB block: X on the measured qubit, measure into `clbit`, Z (Z_c1)
/// or RZ(0) (I_c1) on every unitary conditioned on reading 1, X reset.
void append_dc_rb_block(DynamicCircuit& circuit, RbKind kind, Qubit measured, const std::vector<Qubit>& unitaries,
                        Clbit clbit);

/// DC-RB: l repetitions of (random Clifford on each unitary, block), then the
/// recovery Clifford that inverts the ideal product, including the Z applied
/// by each Z_c1 block.
RbCircuit build_dc_rb(int n_qubits, RbKind kind, Qubit measured, const std::vector<Qubit>& unitaries, int l, Rng& rng);

struct RbSpec {
    RbKind kind = RbKind::DcRbZ;
    std::vector<int> lengths;
    int n_randomizations = 7;
    std::uint64_t shots = 300;
    std::vector<Qubit> measured;
    std::vector<Qubit> unitaries;
    int bootstrap_resamples = 200;
    /// Circuits per length in each bootstrap resample (0: all).
    int bootstrap_size = 0;

    static RbSpec mcm_rb_defaults();
    static RbSpec dc_rb_defaults(RbKind kind);
};

/// Throws InvalidArgument for lengths that are not strictly increasing or
/// have fewer than two values, or for empty qubit roles.
void validate(const RbSpec& spec);

struct RbRow {
    int l = 0;
    double mean_p0 = 0.0;
    double std_error = 0.0;
};

struct RbQubitResult {
    Qubit qubit = 0;
    bool unitary = true;
    RbRawData raw;
    std::vector<RbRow> table;
    /// Fit of the means; absent for measured qubits and failed fits.
    std::optional<RbFit> fit;
    std::optional<BootstrapResult> bootstrap;
};

struct RbModeResult {
    std::string mode;
    std::vector<RbQubitResult> qubits;

    const RbQubitResult& qubit(Qubit q) const;
    /// Mean EPL over unitary qubits with a fit.
    double mean_unitary_epl() const;
};

struct RbRunOptions {
    int threads = 1;
    bool noiseless = false;
    bool fit = true;
};

/// Runs every (length, randomization) circuit under each mode. The circuits
/// and the shot seeds depend only on (seed, length, randomization), so modes
/// are compared on identical randomizations.
std::vector<RbModeResult> run_rb(const RbSpec& spec, const DeviceModel& device, const std::vector<DdMode>& modes,
                                 std::uint64_t seed, const RbRunOptions& options = {});

/// experiment,qubit,dd_mode,l,mean_p0,stderr
std::string rb_results_csv(const RbSpec& spec, const std::vector<RbModeResult>& results);
/// {"<mode>": {"<qubit>": {"A","alpha","B","epl","epl_sigma"}}}
std::string rb_fits_json(const std::vector<RbModeResult>& results, int indent = 2);

}  // namespace decoupler

#pragma once

#include <filesystem>
#include <string>

#include "decoupler/circuit.hpp"
#include "decoupler/device.hpp"

namespace decoupler {

/// Whole-file helpers; failures raise Errc::Io naming the path.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Circuit JSON:
///   {"n_qubits": 2, "n_clbits": 1, "instructions": [
///     {"kind": "gate", "name": "H", "qubit": 0},
///     {"kind": "gate", "name": "RZ", "qubit": 1, "theta": 0.5},
///     {"kind": "gate", "name": "Rk", "qubit": 1, "k": 2},
///     {"kind": "gate", "name": "CX", "qubits": [0, 1]},
///     {"kind": "measure", "qubit": 0, "clbit": 0},
///     {"kind": "conditional", "gate": {"name": "Z", "qubit": 1}, "clbit": 0, "value": 1},
///     {"kind": "delay", "qubit": 1, "duration": 100},
///     {"kind": "barrier", "qubits": [0, 1]}]}
std::string circuit_to_json(const DynamicCircuit& circuit, int indent = 2);
DynamicCircuit circuit_from_json(const std::string& text);
DynamicCircuit load_circuit(const std::filesystem::path& path);
void save_circuit(const DynamicCircuit& circuit, const std::filesystem::path& path);

/// Device JSON:
///   {"n_qubits", "edges": [[a, b, J_MHz]], "omega01": [...], "omega12": [...],
///    "timing": {"gate_ns": {"X": 50, ...}, "tau_m": 1000, "tau_ff": 600},
///    "noise": {"zphase_rate": [[m, u, rad_per_ns]], "zz_rate": [...],
///              "readout_error": [...], "collision_pairs": [[m, u, delta_MHz, J_MHz]],
///              "pulse_error": 0, "t2_dephasing_rate": [...], "static_z_rate": [...]}}
/// "timing" and "noise" (and each noise field) are optional.
std::string device_to_json(const DeviceModel& device, int indent = 2);
DeviceModel device_from_json(const std::string& text);
DeviceModel load_device(const std::filesystem::path& path);
void save_device(const DeviceModel& device, const std::filesystem::path& path);

}  // namespace decoupler

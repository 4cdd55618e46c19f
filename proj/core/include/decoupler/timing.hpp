#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace decoupler {

/// Integer nanoseconds; every schedule time and duration uses this unit.
using Nanos = std::int64_t;

struct DeviceTiming {
    /// Duration per gate name ("X", "H", "RZ", "CX", ...). Virtual Z-type
    /// rotations default to zero length.
    std::map<std::string, Nanos> gate_ns = default_gate_durations();
    Nanos tau_m = 1000;
    Nanos tau_ff = 600;

    static std::map<std::string, Nanos> default_gate_durations(Nanos one_qubit = 50,
                                                               Nanos two_qubit = 570) {
        return {{"X", one_qubit}, {"Y", one_qubit},  {"H", one_qubit}, {"SX", one_qubit},
                {"Z", 0},         {"RZ", 0},         {"Rk", 0},        {"CX", two_qubit}};
    }

    bool operator==(const DeviceTiming&) const = default;
};

}  // namespace decoupler

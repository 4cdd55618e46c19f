#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace decoupler {

/// Decoupling group element. The _p/_m variants differ only in rotation
/// direction on hardware; both are modeled as the same ideal Pauli.
enum class PulseLabel : unsigned char { I_p, I_m, X_p, X_m, Y_p, Y_m, Z_p, Z_m };

inline constexpr std::array<PulseLabel, 8> kAllPulseLabels{
    PulseLabel::I_p, PulseLabel::I_m, PulseLabel::X_p, PulseLabel::X_m,
    PulseLabel::Y_p, PulseLabel::Y_m, PulseLabel::Z_p, PulseLabel::Z_m};

const char* to_string(PulseLabel label) noexcept;
std::optional<PulseLabel> parse_pulse_label(std::string_view text);

/// Single-qubit Pauli modulo phase, encoded as x and z bits (Y = x|z).
enum class Pauli : unsigned char { I = 0, X = 1, Z = 2, Y = 3 };

constexpr Pauli pauli_of(PulseLabel label) noexcept {
    switch (label) {
        case PulseLabel::X_p:
        case PulseLabel::X_m: return Pauli::X;
        case PulseLabel::Y_p:
        case PulseLabel::Y_m: return Pauli::Y;
        case PulseLabel::Z_p:
        case PulseLabel::Z_m: return Pauli::Z;
        default: return Pauli::I;
    }
}

constexpr Pauli operator*(Pauli a, Pauli b) noexcept {
    return static_cast<Pauli>(static_cast<unsigned char>(a) ^ static_cast<unsigned char>(b));
}

constexpr bool has_x(Pauli p) noexcept { return (static_cast<unsigned char>(p) & 1U) != 0; }
constexpr bool has_z(Pauli p) noexcept { return (static_cast<unsigned char>(p) & 2U) != 0; }

/// The `_p` label for a Pauli.
constexpr PulseLabel plus_label(Pauli p) noexcept {
    switch (p) {
        case Pauli::X: return PulseLabel::X_p;
        case Pauli::Y: return PulseLabel::Y_p;
        case Pauli::Z: return PulseLabel::Z_p;
        default: return PulseLabel::I_p;
    }
}

}  // namespace decoupler

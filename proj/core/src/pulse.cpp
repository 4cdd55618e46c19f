#include "decoupler/pulse.hpp"

namespace decoupler {

const char* to_string(PulseLabel label) noexcept {
    switch (label) {
        case PulseLabel::I_p: return "I_p";
        case PulseLabel::I_m: return "I_m";
        case PulseLabel::X_p: return "X_p";
        case PulseLabel::X_m: return "X_m";
        case PulseLabel::Y_p: return "Y_p";
        case PulseLabel::Y_m: return "Y_m";
        case PulseLabel::Z_p: return "Z_p";
        case PulseLabel::Z_m: return "Z_m";
    }
    return "?";
}

std::optional<PulseLabel> parse_pulse_label(std::string_view text) {
    for (PulseLabel l : kAllPulseLabels) {
        if (text == to_string(l)) return l;
    }
    return std::nullopt;
}

}  // namespace decoupler

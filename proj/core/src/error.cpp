#include "decoupler/error.hpp"

namespace decoupler {

const char* to_string(Errc code) noexcept {
    switch (code) {
        case Errc::ParseError: return "ParseError";
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::UnknownGateDuration: return "UnknownGateDuration";
        case Errc::CyclicDependency: return "CyclicDependency";
        case Errc::PulseOutsideWindow: return "PulseOutsideWindow";
        case Errc::QubitCountMismatch: return "QubitCountMismatch";
        case Errc::BranchExplosion: return "BranchExplosion";
        case Errc::WindowTooShort: return "WindowTooShort";
        case Errc::OverlappingRegisters: return "OverlappingRegisters";
        case Errc::MissingStrategy: return "MissingStrategy";
        case Errc::ShotCountZero: return "ShotCountZero";
        case Errc::FitDiverged: return "FitDiverged";
        case Errc::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace decoupler

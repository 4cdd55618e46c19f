#pragma once

#include <stdexcept>
#include <string>

namespace decoupler {

enum class Errc {
    ParseError,
    InvalidArgument,
    UnknownGateDuration,
    CyclicDependency,
    PulseOutsideWindow,
    QubitCountMismatch,
    BranchExplosion,
    WindowTooShort,
    OverlappingRegisters,
    MissingStrategy,
    ShotCountZero,
    FitDiverged,
    Io,
};

const char* to_string(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

    Errc code() const noexcept { return code_; }
    /// Message without the error-code prefix.
    const std::string& detail() const noexcept { return detail_; }

private:
    Errc code_;
    std::string detail_;
};

}  // namespace decoupler

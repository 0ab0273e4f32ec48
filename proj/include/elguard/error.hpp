#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace elguard {

enum class ErrorCode {
    InvalidArgument,
    // container formats
    BadMagic,
    UnsupportedVersion,
    UnsupportedDtype,
    SizeMismatch,
    NonFiniteScore,
    ScoreOutOfRange,
    ValueOutOfRange,
    // scene generation
    SpecInfeasible,
    // segmentation
    SampleOutOfRange,
    PaletteSizeMismatch,
    // monitor / selection
    RegionOutOfBounds,
    TileLargerThanImage,
    // decision module
    IllegalEvent,
    // risk assessment
    NonPositiveHeight,
    NonPositiveMass,
    NoMatchingRow,
    UnknownMitigationKind,
    UnknownOutcome,
    // config / files
    ConfigError,
    IoError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

#define ELGUARD_REQUIRE(cond, code, msg)                        \
    do {                                                        \
        if (!(cond)) throw ::elguard::Error((code), (msg));     \
    } while (0)

} // namespace elguard

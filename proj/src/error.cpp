#include "elguard/error.hpp"

namespace elguard {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::UnsupportedDtype: return "UnsupportedDtype";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::NonFiniteScore: return "NonFiniteScore";
    case ErrorCode::ScoreOutOfRange: return "ScoreOutOfRange";
    case ErrorCode::ValueOutOfRange: return "ValueOutOfRange";
    case ErrorCode::SpecInfeasible: return "SpecInfeasible";
    case ErrorCode::SampleOutOfRange: return "SampleOutOfRange";
    case ErrorCode::PaletteSizeMismatch: return "PaletteSizeMismatch";
    case ErrorCode::RegionOutOfBounds: return "RegionOutOfBounds";
    case ErrorCode::TileLargerThanImage: return "TileLargerThanImage";
    case ErrorCode::IllegalEvent: return "IllegalEvent";
    case ErrorCode::NonPositiveHeight: return "NonPositiveHeight";
    case ErrorCode::NonPositiveMass: return "NonPositiveMass";
    case ErrorCode::NoMatchingRow: return "NoMatchingRow";
    case ErrorCode::UnknownMitigationKind: return "UnknownMitigationKind";
    case ErrorCode::UnknownOutcome: return "UnknownOutcome";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

} // namespace elguard

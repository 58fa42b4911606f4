// error.hpp
// Error type shared by every sodepol module.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sodepol {

enum class Errc {
    ZeroVector,
    NotNormalized,
    InvalidState,
    ParamOutOfRange,
    IncompleteKrausSet,
    GaussianComponentPresent,
    NonUnitaryU,
    WeightOutOfRange,
    InvalidConfig,
    InvalidBasis,
    GridMismatch,
    InconsistentRecord,
    UnphysicalStokes,
    IoFailure,
    InvariantViolation,
};

constexpr std::string_view errc_name(Errc code) {
    switch (code) {
        case Errc::ZeroVector: return "ZeroVector";
        case Errc::NotNormalized: return "NotNormalized";
        case Errc::InvalidState: return "InvalidState";
        case Errc::ParamOutOfRange: return "ParamOutOfRange";
        case Errc::IncompleteKrausSet: return "IncompleteKrausSet";
        case Errc::GaussianComponentPresent: return "GaussianComponentPresent";
        case Errc::NonUnitaryU: return "NonUnitaryU";
        case Errc::WeightOutOfRange: return "WeightOutOfRange";
        case Errc::InvalidConfig: return "InvalidConfig";
        case Errc::InvalidBasis: return "InvalidBasis";
        case Errc::GridMismatch: return "GridMismatch";
        case Errc::InconsistentRecord: return "InconsistentRecord";
        case Errc::UnphysicalStokes: return "UnphysicalStokes";
        case Errc::IoFailure: return "IoFailure";
        case Errc::InvariantViolation: return "InvariantViolation";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace sodepol

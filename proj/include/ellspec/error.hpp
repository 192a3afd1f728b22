#ifndef ELLSPEC_ERROR_HPP
#define ELLSPEC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ellspec
{

enum class ErrorCode
{
    DegenerateLattice,
    BadTolerance,
    LegendreCheckFailed,
    PoleAtLatticePoint,
    AlphaOnLattice,
    InvalidPunctures,
    NotOnCurve,
    DegenerateMultipliers,
    NoConsistentBranch,
    PoleAtPuncture,
    PathThroughLattice,
    RefinementLimitExceeded,
    DegenerateLeadingCoefficient,
    PathThroughPuncture,
    InvalidArgument,
};

inline const char *to_string(ErrorCode code)
{
    switch (code) {
        case ErrorCode::DegenerateLattice: return "DegenerateLattice";
        case ErrorCode::BadTolerance: return "BadTolerance";
        case ErrorCode::LegendreCheckFailed: return "LegendreCheckFailed";
        case ErrorCode::PoleAtLatticePoint: return "PoleAtLatticePoint";
        case ErrorCode::AlphaOnLattice: return "AlphaOnLattice";
        case ErrorCode::InvalidPunctures: return "InvalidPunctures";
        case ErrorCode::NotOnCurve: return "NotOnCurve";
        case ErrorCode::DegenerateMultipliers: return "DegenerateMultipliers";
        case ErrorCode::NoConsistentBranch: return "NoConsistentBranch";
        case ErrorCode::PoleAtPuncture: return "PoleAtPuncture";
        case ErrorCode::PathThroughLattice: return "PathThroughLattice";
        case ErrorCode::RefinementLimitExceeded: return "RefinementLimitExceeded";
        case ErrorCode::DegenerateLeadingCoefficient: return "DegenerateLeadingCoefficient";
        case ErrorCode::PathThroughPuncture: return "PathThroughPuncture";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

/// Library exception. The code identifies the failure class; what() carries detail.
class Error : public std::runtime_error
{
    public:
        Error(ErrorCode code, const std::string &detail)
            : std::runtime_error(std::string(to_string(code)) + ": " + detail), m_code(code)
        {}
        ErrorCode code() const noexcept
        {
            return m_code;
        }
    private:
        ErrorCode m_code;
};

}

#endif

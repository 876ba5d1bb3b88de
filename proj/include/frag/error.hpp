#pragma once

#include <stdexcept>
#include <string>

namespace frag {

enum class ErrorKind {
    PoleHit,
    ParameterPole,
    MassNotNormalized,
    AllZero,
    RootFindingFailed,
    DivergentTail,
    StripViolation,
    TailTooFat,
    InsufficientTail,
    NotZeroMass,
    TruncationTooLarge,
    BranchUnsupported,
    MomentDiverges,
    WindowTooShort,
    GridTooCoarse,
    CFLViolation,
    InvalidArgument,
};

const char* kind_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(kind_name(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* kind_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::PoleHit: return "PoleHit";
    case ErrorKind::ParameterPole: return "ParameterPole";
    case ErrorKind::MassNotNormalized: return "MassNotNormalized";
    case ErrorKind::AllZero: return "AllZero";
    case ErrorKind::RootFindingFailed: return "RootFindingFailed";
    case ErrorKind::DivergentTail: return "DivergentTail";
    case ErrorKind::StripViolation: return "StripViolation";
    case ErrorKind::TailTooFat: return "TailTooFat";
    case ErrorKind::InsufficientTail: return "InsufficientTail";
    case ErrorKind::NotZeroMass: return "NotZeroMass";
    case ErrorKind::TruncationTooLarge: return "TruncationTooLarge";
    case ErrorKind::BranchUnsupported: return "BranchUnsupported";
    case ErrorKind::MomentDiverges: return "MomentDiverges";
    case ErrorKind::WindowTooShort: return "WindowTooShort";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::CFLViolation: return "CFLViolation";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Error";
}

}  // namespace frag

// Failure codes shared across the analysis pipeline. A code classifies the
// failure for reporting and exit-status mapping; the message carries detail.
#pragma once

#include <stdexcept>
#include <string>

namespace lnd {

enum class ErrorCode {
    ZeroPolynomial,
    ZeroDerivation,
    NonPolynomialRewrite,
    CapExceeded,
    PreconditionViolation,
    RankAssumptionViolated,
    NotRankTwo,
    ShapeMismatch,
    DivisibilityFail,
    NewtonGateFail,
    PerfectPowerFail,
    RewriteFail,
    TerminalShapeFail,
    VerificationMismatch,
    NotPurePowerOfX,
    FormulaOracleMismatch,
    SpanDeficit,
    DependenceFound,
    SemanticError,
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::ZeroPolynomial: return "ZeroPolynomial";
        case ErrorCode::ZeroDerivation: return "ZeroDerivation";
        case ErrorCode::NonPolynomialRewrite: return "NonPolynomialRewrite";
        case ErrorCode::CapExceeded: return "CapExceeded";
        case ErrorCode::PreconditionViolation: return "PreconditionViolation";
        case ErrorCode::RankAssumptionViolated: return "RankAssumptionViolated";
        case ErrorCode::NotRankTwo: return "NotRankTwo";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::DivisibilityFail: return "DivisibilityFail";
        case ErrorCode::NewtonGateFail: return "NewtonGateFail";
        case ErrorCode::PerfectPowerFail: return "PerfectPowerFail";
        case ErrorCode::RewriteFail: return "RewriteFail";
        case ErrorCode::TerminalShapeFail: return "TerminalShapeFail";
        case ErrorCode::VerificationMismatch: return "VerificationMismatch";
        case ErrorCode::NotPurePowerOfX: return "NotPurePowerOfX";
        case ErrorCode::FormulaOracleMismatch: return "FormulaOracleMismatch";
        case ErrorCode::SpanDeficit: return "SpanDeficit";
        case ErrorCode::DependenceFound: return "DependenceFound";
        case ErrorCode::SemanticError: return "SemanticError";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

}  // namespace lnd

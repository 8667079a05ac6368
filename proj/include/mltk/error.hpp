#pragma once

#include <stdexcept>
#include <string>

namespace mltk {

enum class ErrorKind {
    StateCodomain,
    UnknownConstant,
    UnknownAtom,
    UnknownVariable,
    VariableBudgetExceeded,
    IllTypedApplication,
    StateBodyAbstraction,
    CaptureError,
    StaleRedex,
    FuelExhausted,
    SideConditionViolated,
    TraceFailure,
    IllegalFreeVariable,
    NotMltTerm,
    DenotationUndefined,
    TypeOutsideUniverse,
    UniverseTooLarge,
    InvalidFrame,
    SyntaxError,
    DuplicateDeclaration,
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::StateCodomain: return "StateCodomain";
        case ErrorKind::UnknownConstant: return "UnknownConstant";
        case ErrorKind::UnknownAtom: return "UnknownAtom";
        case ErrorKind::UnknownVariable: return "UnknownVariable";
        case ErrorKind::VariableBudgetExceeded: return "VariableBudgetExceeded";
        case ErrorKind::IllTypedApplication: return "IllTypedApplication";
        case ErrorKind::StateBodyAbstraction: return "StateBodyAbstraction";
        case ErrorKind::CaptureError: return "CaptureError";
        case ErrorKind::StaleRedex: return "StaleRedex";
        case ErrorKind::FuelExhausted: return "FuelExhausted";
        case ErrorKind::SideConditionViolated: return "SideConditionViolated";
        case ErrorKind::TraceFailure: return "TraceFailure";
        case ErrorKind::IllegalFreeVariable: return "IllegalFreeVariable";
        case ErrorKind::NotMltTerm: return "NotMltTerm";
        case ErrorKind::DenotationUndefined: return "DenotationUndefined";
        case ErrorKind::TypeOutsideUniverse: return "TypeOutsideUniverse";
        case ErrorKind::UniverseTooLarge: return "UniverseTooLarge";
        case ErrorKind::InvalidFrame: return "InvalidFrame";
        case ErrorKind::SyntaxError: return "SyntaxError";
        case ErrorKind::DuplicateDeclaration: return "DuplicateDeclaration";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace mltk

#pragma once

#include <stdexcept>
#include <string>

namespace valign {

/// Error categories surfaced by the engine. The CLI maps parse/io errors to
/// exit code 2 and every other category to exit code 1.
enum class ErrorCode {
    parse_error,
    io_error,
    duplicate_state,
    duplicate_transition,
    dangling_transition,
    bad_probability_group,
    empty_initial_set,
    unknown_state,
    unknown_action,
    unknown_value,
    unknown_agent,
    unknown_norm,
    schema_mismatch,
    domain_overflow,
    missing_preference,
    no_paths,
    range_violation,
    antisymmetry_violation,
    diagonal_violation,
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::io_error: return "IoError";
    case ErrorCode::duplicate_state: return "DuplicateState";
    case ErrorCode::duplicate_transition: return "DuplicateTransition";
    case ErrorCode::dangling_transition: return "DanglingTransition";
    case ErrorCode::bad_probability_group: return "BadProbabilityGroup";
    case ErrorCode::empty_initial_set: return "EmptyInitialSet";
    case ErrorCode::unknown_state: return "UnknownState";
    case ErrorCode::unknown_action: return "UnknownAction";
    case ErrorCode::unknown_value: return "UnknownValue";
    case ErrorCode::unknown_agent: return "UnknownAgent";
    case ErrorCode::unknown_norm: return "UnknownNorm";
    case ErrorCode::schema_mismatch: return "SchemaMismatch";
    case ErrorCode::domain_overflow: return "DomainOverflow";
    case ErrorCode::missing_preference: return "MissingPreference";
    case ErrorCode::no_paths: return "NoPaths";
    case ErrorCode::range_violation: return "RangeViolation";
    case ErrorCode::antisymmetry_violation: return "AntisymmetryViolation";
    case ErrorCode::diagonal_violation: return "DiagonalViolation";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

} // namespace valign

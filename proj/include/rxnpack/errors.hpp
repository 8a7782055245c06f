#pragma once

#include <stdexcept>
#include <string>

namespace rxn {

// Broad error categories, mirrored in CLI exit codes: input errors exit 1,
// computation errors exit 2.
enum class ErrorKind {
    InvalidState,    // negative counts, malformed state
    Firing,          // a reaction firing would drive a count negative
    Domain,          // argument outside mathematical domain (alpha <= 0, R <= 1, ...)
    Assumption,      // a derivation precondition is violated (rho <= 1, fraction >= 1)
    Type,            // wrong rate-law kind for an operation
    Naming,          // unresolvable species name collision
    UnsupportedOrder, // Hill unpacking requested for n != 2
    Composition,     // conflicting parameters / dangling substitution target
    Numerical,       // NaN propensity, step-size underflow, overflow
    Parse,           // DSL syntax or resolution error
    InsufficientData,
    Unfittable,
    Range,
    Grid,
    Io,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::InvalidState: return "invalid-state";
    case ErrorKind::Firing: return "firing";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Assumption: return "assumption";
    case ErrorKind::Type: return "type";
    case ErrorKind::Naming: return "naming";
    case ErrorKind::UnsupportedOrder: return "unsupported-order";
    case ErrorKind::Composition: return "composition";
    case ErrorKind::Numerical: return "numerical";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::Unfittable: return "unfittable";
    case ErrorKind::Range: return "range";
    case ErrorKind::Grid: return "grid";
    case ErrorKind::Io: return "io";
    }
    return "unknown";
}

} // namespace rxn

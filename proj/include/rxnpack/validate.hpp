#pragma once

#include <string>
#include <vector>

#include "rxnpack/network.hpp"

namespace rxn {

struct ValidationIssue {
    enum class Severity { Warning, Error };
    Severity severity = Severity::Error;
    std::string code;    // short machine-readable tag, e.g. "unknown-species"
    std::string subject; // offending reaction/species/conservation id
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;

    bool ok() const { return error_count() == 0; }
    std::size_t error_count() const;
    std::size_t warning_count() const;
    std::string to_string() const;
};

// Structural validation: unknown species references, negative constants,
// bad arities, duplicate ids, compound laws with a missing substrate or
// regulator, and conservations violated by the initial counts.
ValidationReport validate_network(const ReactionNetwork& network);

} // namespace rxn

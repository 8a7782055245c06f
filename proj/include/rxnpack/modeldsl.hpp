#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rxnpack/network.hpp"
#include "rxnpack/templates.hpp"

namespace rxn {

// Parameter literal with an optional unit marker, transcribing table entries
// like "200*alpha" or "0.5/alpha" verbatim.
struct ParamExpr {
    enum class Marker { None, TimesAlpha, OverAlpha };
    double value = 0.0;
    Marker marker = Marker::None;
    bool operator==(const ParamExpr&) const = default;
};

// A rate-law or directive argument: a literal expression or a parameter name.
struct DslValue {
    bool is_ref = false;
    std::string ref;
    ParamExpr literal;
    bool operator==(const DslValue&) const = default;

    static DslValue number(double v, ParamExpr::Marker m = ParamExpr::Marker::None) {
        DslValue d;
        d.literal = {v, m};
        return d;
    }
    static DslValue reference(std::string name) {
        DslValue d;
        d.is_ref = true;
        d.ref = std::move(name);
        return d;
    }
};

struct SpeciesDecl {
    std::string id;
    Count initial = 0;
    bool operator==(const SpeciesDecl&) const = default;
};

struct ParamDecl {
    std::string id;
    ParamExpr expr;
    bool operator==(const ParamDecl&) const = default;
};

struct RateLawStmt {
    std::string kind; // "ma", "mm", "hill", "immediate"
    std::vector<DslValue> args;
    int hill_n = 0;
    bool operator==(const RateLawStmt&) const = default;
};

struct ReactionStmt {
    std::string id;
    std::vector<std::pair<std::string, int>> reactants;
    std::vector<std::pair<std::string, int>> products;
    RateLawStmt law;
    bool operator==(const ReactionStmt&) const = default;
};

struct UnpackDirective {
    std::string target;
    std::string kind; // "mm" or "hill"
    DslValue etot;    // mm
    double rho = 100.0;
    std::optional<std::string> enzyme;
    DslValue K1, s1, s2; // hill
    bool operator==(const UnpackDirective&) const = default;
};

struct ConserveStmt {
    std::vector<std::pair<std::string, int>> terms;
    DslValue total;
    bool operator==(const ConserveStmt&) const = default;
};

struct ModelDocument {
    std::string name;
    std::optional<double> alpha;
    std::vector<SpeciesDecl> species;
    std::vector<ParamDecl> params;
    std::vector<ReactionStmt> reactions;
    std::vector<ConserveStmt> conserves;
    std::vector<UnpackDirective> unpacks;
    bool operator==(const ModelDocument&) const = default;
};

// Line-oriented parser; every error carries line and column. Accepts LF and
// CRLF; '#' starts a comment.
ModelDocument parse_model(const std::string& text);

// Canonical LF rendering; parse(serialize(d)) equals d structurally, and the
// output is byte-deterministic (shortest round-trip float formatting).
std::string serialize_model(const ModelDocument& doc);

struct BuildResult {
    ReactionNetwork network;
    std::vector<TemplateExpansion> expansions;
};

// Resolves parameters against alpha, builds the base network, runs unpack
// directives through the template module and registers conservations. The
// result validates cleanly or a Parse error is thrown.
BuildResult apply_directives(const ModelDocument& doc);

// Flat document for an already-elementary network (inline numeric constants,
// no directives); used to emit unpacked models.
ModelDocument network_to_document(const ReactionNetwork& network,
                                  std::optional<double> alpha = std::nullopt);

} // namespace rxn

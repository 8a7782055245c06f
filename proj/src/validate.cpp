#include "rxnpack/validate.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace rxn {

std::size_t ValidationReport::error_count() const {
    std::size_t n = 0;
    for (const auto& i : issues)
        if (i.severity == ValidationIssue::Severity::Error) ++n;
    return n;
}

std::size_t ValidationReport::warning_count() const {
    return issues.size() - error_count();
}

std::string ValidationReport::to_string() const {
    std::ostringstream os;
    for (const auto& i : issues) {
        os << (i.severity == ValidationIssue::Severity::Error ? "error" : "warning") << " ["
           << i.code << "] " << i.subject << ": " << i.message << "\n";
    }
    return os.str();
}

namespace {

void issue(ValidationReport& rep, ValidationIssue::Severity sev, std::string code,
           std::string subject, std::string message) {
    rep.issues.push_back({sev, std::move(code), std::move(subject), std::move(message)});
}

} // namespace

ValidationReport validate_network(const ReactionNetwork& network) {
    using Sev = ValidationIssue::Severity;
    ValidationReport rep;

    std::set<std::string> species_ids;
    for (const auto& sp : network.species) {
        if (!species_ids.insert(sp.id).second)
            issue(rep, Sev::Error, "duplicate-species", sp.id, "species declared twice");
        if (sp.initial_count < 0)
            issue(rep, Sev::Error, "negative-initial", sp.id, "initial count is negative");
    }

    std::set<std::string> reaction_ids;
    for (const auto& r : network.reactions) {
        if (!reaction_ids.insert(r.id).second)
            issue(rep, Sev::Error, "duplicate-reaction", r.id, "reaction declared twice");

        int reactant_molecules = 0;
        for (const auto& [id, coeff] : r.reactants) {
            if (!species_ids.count(id))
                issue(rep, Sev::Error, "unknown-species", r.id, "reactant '" + id + "' undeclared");
            if (coeff < 1 || coeff > 2)
                issue(rep, Sev::Error, "bad-stoichiometry", r.id,
                      "reactant coefficient must be 1 or 2");
            reactant_molecules += coeff;
        }
        for (const auto& [id, coeff] : r.products) {
            if (!species_ids.count(id))
                issue(rep, Sev::Error, "unknown-species", r.id, "product '" + id + "' undeclared");
            if (coeff < 1 || coeff > 2)
                issue(rep, Sev::Error, "bad-stoichiometry", r.id,
                      "product coefficient must be 1 or 2");
        }

        const RateLaw& law = r.rate_law;
        switch (law.kind) {
        case RateLaw::Kind::MassAction:
            if (!(law.c >= 0.0) || std::isnan(law.c))
                issue(rep, Sev::Error, "negative-constant", r.id, "mass-action c < 0");
            if (reactant_molecules > 2)
                issue(rep, Sev::Error, "bad-arity", r.id,
                      "mass-action reactions take at most 2 reactant molecules");
            break;
        case RateLaw::Kind::MichaelisMenten:
            if (!(law.vmax >= 0.0)) issue(rep, Sev::Error, "negative-constant", r.id, "vmax < 0");
            if (!(law.Km > 0.0)) issue(rep, Sev::Error, "bad-constant", r.id, "Km must be > 0");
            if (!species_ids.count(law.substrate))
                issue(rep, Sev::Error, "missing-substrate", r.id,
                      "Michaelis-Menten substrate '" + law.substrate + "' undeclared");
            break;
        case RateLaw::Kind::Hill:
            if (!(law.kms >= 0.0)) issue(rep, Sev::Error, "negative-constant", r.id, "kms < 0");
            if (!(law.J > 0.0)) issue(rep, Sev::Error, "bad-constant", r.id, "J must be > 0");
            if (law.n < 1) issue(rep, Sev::Error, "bad-constant", r.id, "Hill n must be >= 1");
            if (!species_ids.count(law.regulator))
                issue(rep, Sev::Error, "missing-substrate", r.id,
                      "Hill regulator '" + law.regulator + "' undeclared");
            break;
        }

        if (r.immediate && r.reactants.empty())
            issue(rep, Sev::Error, "bad-immediate", r.id,
                  "immediate reaction needs at least one reactant");
    }

    if (!rep.ok()) return rep; // initial-state checks need a well-formed network

    SystemState init = initial_state(network);
    for (const auto& c : network.conservations) {
        bool known = true;
        for (const auto& [id, coeff] : c.terms) {
            (void)coeff;
            if (!species_ids.count(id)) {
                issue(rep, Sev::Error, "unknown-species", c.id,
                      "conservation references undeclared '" + id + "'");
                known = false;
            }
        }
        if (known && conservation_residual(c, init) > 1e-9)
            issue(rep, Sev::Error, "conservation-violated", c.id,
                  "conservation does not hold at the initial state");
    }
    return rep;
}

} // namespace rxn

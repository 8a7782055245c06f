#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rxnpack/network.hpp"

namespace rxn {

struct AssumptionCheck {
    std::string name;
    bool passed = true;
    std::string detail;
};

// Elementary constants for E + S <-> ES -> E + P reproducing a
// Michaelis-Menten law: k3 = vmax/Etot, k1 = rho*k3/Km, k2 = (rho-1)*k3.
// rho = k1*Km/k3 is the stiffness ratio; (k2+k3)/k1 = Km holds exactly.
struct MmDerivation {
    double vmax = 0.0, Km = 0.0, Etot = 0.0, rho = 0.0;
    double k1 = 0.0, k2 = 0.0, k3 = 0.0;
};

// Elementary constants for sequential dimer binding (2TF <-> TF2,
// TF2 + G <-> GTF2, GTF2 -> M + GTF2) reproducing a Hill law with n=2:
// k1 = s1, k2 = s1*K1, k3 = s2, k4 = s2*J^2/K1, so J^2 = (k2*k4)/(k1*k3).
struct HillDerivation {
    double J = 0.0, K1 = 0.0, s1 = 0.0, s2 = 0.0;
    double k1 = 0.0, k2 = 0.0, k3 = 0.0, k4 = 0.0;
    double K2 = 0.0;
    bool positive_cooperativity = false; // K1 >= 100 * K2
};

// Record of one compound-law replacement.
struct TemplateExpansion {
    std::string replaced_reaction;
    std::vector<Species> introduced_species;
    std::vector<Reaction> introduced_reactions;
    std::vector<Conservation> introduced_conservations;
    std::map<std::string, double> derived_constants;
    std::vector<AssumptionCheck> assumption_report;

    bool all_assumptions_pass() const;
    std::string to_json() const;
};

MmDerivation derive_mm_params(double vmax, double Km, double Etot, double rho);

// Total enzyme for a substrate floor S_min: round(fraction*S_min), >= 1.
Count select_enzyme_total(Count S_min, double fraction = 0.1);

struct MmUnpackOptions {
    double rho = 100.0;
    std::optional<std::string> enzyme_name; // default "E"; complex adds "S"
};

// Replaces a Michaelis-Menten reaction with the three-step elementary
// scheme. A reaction with no products (catalyzed degradation) gets an
// explicit transient product that an added zero-delay reaction removes.
std::pair<ReactionNetwork, TemplateExpansion> unpack_mm(const ReactionNetwork& network,
                                                        const std::string& reaction_id,
                                                        Count Etot,
                                                        const MmUnpackOptions& options = {});

HillDerivation derive_hill_params(double J, double K1, double s1, double s2);

struct HillUnpackOptions {
    std::optional<std::string> dimer_name;   // default regulator + "2"
    std::optional<std::string> gene_name;    // default "G"
    std::optional<std::string> complex_name; // default gene + dimer
};

// Replaces a Hill (n=2) reaction with the five-reaction sequential-binding
// scheme. The gene species is reused when present, otherwise created with
// one copy.
std::pair<ReactionNetwork, TemplateExpansion> unpack_hill(const ReactionNetwork& network,
                                                          const std::string& reaction_id,
                                                          const HillDerivation& derivation,
                                                          const HillUnpackOptions& options = {});

struct ComposeResult {
    ReactionNetwork network;
    std::vector<std::string> warnings;
};

// Merges part networks into the base (species by name, parameters by value)
// and replaces each substituted reaction with its expansion. The result is
// re-validated; structural errors raise Composition errors.
ComposeResult compose(const ReactionNetwork& base, const std::vector<ReactionNetwork>& parts,
                      const std::vector<std::pair<std::string, TemplateExpansion>>& substitutions);

} // namespace rxn

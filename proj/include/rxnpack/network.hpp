#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rxnpack/errors.hpp"

namespace rxn {

using Count = std::int64_t;

// Counts are kept well below the int64 ceiling; crossing this limit is a
// modeling error, not a wraparound.
constexpr Count kCountLimit = Count{1} << 62;

struct Species {
    std::string id;
    Count initial_count = 0;
};

struct RateLaw {
    enum class Kind { MassAction, MichaelisMenten, Hill };

    Kind kind = Kind::MassAction;

    // MassAction: stochastic constant c.
    //   Units: 1/min (arity 0 or 1, where arity-0 means a constant source
    //   with c in #/min) or 1/(min*#) (arity 2).
    double c = 0.0;

    // MichaelisMenten: vmax [#/min], Km [#], substrate species id.
    double vmax = 0.0;
    double Km = 0.0;
    std::string substrate;

    // Hill: kms [1/min], J [#], integer order n, regulator species id.
    double kms = 0.0;
    double J = 0.0;
    int n = 0;
    std::string regulator;

    static RateLaw mass_action(double c) {
        RateLaw law;
        law.kind = Kind::MassAction;
        law.c = c;
        return law;
    }

    static RateLaw michaelis_menten(double vmax, double Km, std::string substrate) {
        RateLaw law;
        law.kind = Kind::MichaelisMenten;
        law.vmax = vmax;
        law.Km = Km;
        law.substrate = std::move(substrate);
        return law;
    }

    static RateLaw hill(double kms, double J, int n, std::string regulator) {
        RateLaw law;
        law.kind = Kind::Hill;
        law.kms = kms;
        law.J = J;
        law.n = n;
        law.regulator = std::move(regulator);
        return law;
    }
};

struct Reaction {
    std::string id;
    // Multisets encoded as (species id, stoichiometric coefficient).
    std::vector<std::pair<std::string, int>> reactants;
    std::vector<std::pair<std::string, int>> products;
    RateLaw rate_law;
    // Zero-delay reaction: fires before any time advances whenever its
    // reactants are available. The rate-law constant is ignored.
    bool immediate = false;
};

// Linear combination of species counts that every reaction leaves invariant,
// e.g. E + ES = Etot or G + GTF2 = G_tot.
struct Conservation {
    std::string id;
    std::vector<std::pair<std::string, int>> terms; // (species id, coefficient)
    double total = 0.0;
};

struct ReactionNetwork {
    std::string name;
    std::vector<Species> species;
    std::map<std::string, double> parameters;
    std::vector<Reaction> reactions;
    std::vector<Conservation> conservations;

    bool has_species(const std::string& id) const;
    const Species* find_species(const std::string& id) const;
    std::size_t species_index(const std::string& id) const; // throws Domain if absent
    const Reaction* find_reaction(const std::string& id) const;
};

struct SystemState {
    double time = 0.0; // minutes
    std::map<std::string, Count> counts;

    Count count(const std::string& id) const;
};

SystemState initial_state(const ReactionNetwork& network);

// Stochastic propensity a(x) of a reaction in a state.
//   MassAction: arity 0 -> c; x -> c*x; x+y -> c*x*y; 2x -> c*x*(x-1)/2.
//   MichaelisMenten: vmax*S/(Km+S).
//   Hill: kms*X^n/(J^n+X^n).
// Throws InvalidState when a referenced count is negative.
double propensity(const Reaction& reaction, const SystemState& state);

// Net stoichiometric change of one firing, as (species id, delta).
std::vector<std::pair<std::string, int>> net_change(const Reaction& reaction);

// Applies one firing. Time is unchanged. Throws Firing when any count would
// go negative and Numerical when a count would exceed kCountLimit.
SystemState apply_reaction(const SystemState& state, const Reaction& reaction);
void apply_reaction_in_place(SystemState& state, const Reaction& reaction);

// Checks a conservation against a state: returns |sum(coeff*count) - total|.
double conservation_residual(const Conservation& conservation, const SystemState& state);

// FNV-1a hash of the structural content, used as the model fingerprint in
// output metadata.
std::uint64_t network_fingerprint(const ReactionNetwork& network);

} // namespace rxn

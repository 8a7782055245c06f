#include "rxnpack/templates.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rxnpack/validate.hpp"

namespace rxn {

bool TemplateExpansion::all_assumptions_pass() const {
    return std::all_of(assumption_report.begin(), assumption_report.end(),
                       [](const AssumptionCheck& c) { return c.passed; });
}

std::string TemplateExpansion::to_json() const {
    nlohmann::json j;
    j["replaced_reaction"] = replaced_reaction;
    j["introduced_species"] = nlohmann::json::array();
    for (const auto& sp : introduced_species)
        j["introduced_species"].push_back({{"id", sp.id}, {"initial", sp.initial_count}});
    j["introduced_reactions"] = nlohmann::json::array();
    for (const auto& r : introduced_reactions) j["introduced_reactions"].push_back(r.id);
    j["derived_constants"] = derived_constants;
    j["assumptions"] = nlohmann::json::array();
    for (const auto& c : assumption_report)
        j["assumptions"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    return j.dump(2);
}

MmDerivation derive_mm_params(double vmax, double Km, double Etot, double rho) {
    if (!(vmax > 0.0) || !(Km > 0.0) || !(Etot > 0.0))
        throw Error(ErrorKind::Domain, "vmax, Km and Etot must be positive");
    if (!(rho > 1.0))
        throw Error(ErrorKind::Assumption, "rho must exceed 1 so that k2 = (rho-1)*k3 stays positive");
    MmDerivation d;
    d.vmax = vmax;
    d.Km = Km;
    d.Etot = Etot;
    d.rho = rho;
    d.k3 = vmax / Etot;
    d.k1 = rho * d.k3 / Km;
    d.k2 = (rho - 1.0) * d.k3;
    return d;
}

Count select_enzyme_total(Count S_min, double fraction) {
    if (S_min <= 0) throw Error(ErrorKind::Domain, "S_min must be positive");
    if (!(fraction > 0.0) || fraction >= 1.0)
        throw Error(ErrorKind::Assumption,
                    "enzyme fraction must lie in (0,1): the substrate must exceed the enzyme");
    auto e = static_cast<Count>(std::llround(fraction * static_cast<double>(S_min)));
    return std::max<Count>(e, 1);
}

namespace {

std::set<std::string> species_ids(const ReactionNetwork& net) {
    std::set<std::string> ids;
    for (const auto& sp : net.species) ids.insert(sp.id);
    return ids;
}

// Default name, or the name suffixed with the replaced reaction id on
// collision; a second collision is unresolvable.
std::string pick_name(const std::string& wanted, const std::string& rid,
                      std::set<std::string>& taken) {
    if (!taken.count(wanted)) {
        taken.insert(wanted);
        return wanted;
    }
    std::string alt = wanted + "_" + rid;
    if (!taken.count(alt)) {
        taken.insert(alt);
        return alt;
    }
    throw Error(ErrorKind::Naming, "cannot introduce species '" + wanted + "': name and fallback '" +
                                       alt + "' are both taken");
}

void append_check(TemplateExpansion& exp, std::string name, bool passed, std::string detail) {
    exp.assumption_report.push_back({std::move(name), passed, std::move(detail)});
}

// True when every reaction's net change is orthogonal to the conservation's
// coefficient vector, i.e. the linear combination is invariant by structure.
bool structurally_conserved(const ReactionNetwork& net, const Conservation& cons) {
    for (const auto& r : net.reactions) {
        double dot = 0.0;
        for (const auto& [id, d] : net_change(r)) {
            for (const auto& [cid, coeff] : cons.terms)
                if (cid == id) dot += static_cast<double>(coeff) * d;
        }
        if (dot != 0.0) return false;
    }
    return true;
}

} // namespace

std::pair<ReactionNetwork, TemplateExpansion> unpack_mm(const ReactionNetwork& network,
                                                        const std::string& reaction_id,
                                                        Count Etot,
                                                        const MmUnpackOptions& options) {
    const Reaction* packed = network.find_reaction(reaction_id);
    if (!packed) throw Error(ErrorKind::Composition, "no reaction '" + reaction_id + "'");
    if (packed->rate_law.kind != RateLaw::Kind::MichaelisMenten)
        throw Error(ErrorKind::Type, "reaction '" + reaction_id + "' does not carry a Michaelis-Menten law");
    if (packed->reactants.size() != 1 || packed->reactants[0].second != 1)
        throw Error(ErrorKind::Type,
                    "reaction '" + reaction_id + "' must consume exactly one substrate molecule");
    const std::string substrate = packed->reactants[0].first;
    if (substrate != packed->rate_law.substrate)
        throw Error(ErrorKind::Type, "reaction '" + reaction_id + "' reactant differs from the rate-law substrate");
    if (Etot <= 0) throw Error(ErrorKind::Domain, "Etot must be positive");

    MmDerivation d =
        derive_mm_params(packed->rate_law.vmax, packed->rate_law.Km, static_cast<double>(Etot), options.rho);

    TemplateExpansion exp;
    exp.replaced_reaction = reaction_id;
    exp.derived_constants = {{"k1", d.k1}, {"k2", d.k2}, {"k3", d.k3}};

    auto taken = species_ids(network);
    const std::string enzyme = pick_name(options.enzyme_name.value_or("E"), reaction_id, taken);
    const std::string complex_name = pick_name(enzyme + "S", reaction_id, taken);

    exp.introduced_species.push_back({enzyme, Etot});
    exp.introduced_species.push_back({complex_name, 0});

    Reaction bind;
    bind.id = reaction_id + "_bind";
    bind.reactants = {{enzyme, 1}, {substrate, 1}};
    bind.products = {{complex_name, 1}};
    bind.rate_law = RateLaw::mass_action(d.k1);

    Reaction unbind;
    unbind.id = reaction_id + "_unbind";
    unbind.reactants = {{complex_name, 1}};
    unbind.products = {{enzyme, 1}, {substrate, 1}};
    unbind.rate_law = RateLaw::mass_action(d.k2);

    Reaction cat;
    cat.id = reaction_id + "_cat";
    cat.reactants = {{complex_name, 1}};
    cat.products = {{enzyme, 1}};
    cat.rate_law = RateLaw::mass_action(d.k3);
    for (const auto& p : packed->products) cat.products.push_back(p);

    std::optional<Reaction> sink;
    if (packed->products.empty()) {
        // Catalyzed degradation: release an explicit product and remove it
        // with an infinite-rate (zero-delay) step.
        const std::string transient = pick_name("P_" + substrate, reaction_id, taken);
        exp.introduced_species.push_back({transient, 0});
        cat.products.push_back({transient, 1});
        Reaction s;
        s.id = reaction_id + "_sink";
        s.reactants = {{transient, 1}};
        s.rate_law = RateLaw::mass_action(0.0);
        s.immediate = true;
        sink = s;
    }

    exp.introduced_reactions = {bind, unbind, cat};
    if (sink) exp.introduced_reactions.push_back(*sink);

    Conservation cons;
    cons.id = "cons_" + enzyme;
    cons.terms = {{enzyme, 1}, {complex_name, 1}};
    cons.total = static_cast<double>(Etot);
    exp.introduced_conservations.push_back(cons);

    const Species* sub_sp = network.find_species(substrate);
    const Count s0 = sub_sp ? sub_sp->initial_count : 0;
    append_check(exp, "rho-positive-k2", d.k2 > 0.0, "k2 = " + std::to_string(d.k2));
    append_check(exp, "enzyme-below-substrate", static_cast<double>(Etot) < static_cast<double>(s0),
                 "Etot = " + std::to_string(Etot) + ", initial substrate = " + std::to_string(s0) +
                     (Etot >= s0 ? " (quasi-steady-state assumption may fail)" : ""));
    append_check(exp, "km-identity",
                 std::abs((d.k2 + d.k3) / d.k1 - d.Km) <= 1e-9 * d.Km,
                 "(k2+k3)/k1 vs Km");

    ReactionNetwork out = network;
    std::erase_if(out.reactions, [&](const Reaction& r) { return r.id == reaction_id; });
    for (const auto& sp : exp.introduced_species) out.species.push_back(sp);
    for (const auto& r : exp.introduced_reactions) out.reactions.push_back(r);
    for (const auto& c : exp.introduced_conservations)
        if (structurally_conserved(out, c)) out.conservations.push_back(c);
    return {std::move(out), std::move(exp)};
}

HillDerivation derive_hill_params(double J, double K1, double s1, double s2) {
    if (!(J > 0.0) || !(K1 > 0.0) || !(s1 > 0.0) || !(s2 > 0.0))
        throw Error(ErrorKind::Domain, "J, K1, s1 and s2 must be positive");
    HillDerivation d;
    d.J = J;
    d.K1 = K1;
    d.s1 = s1;
    d.s2 = s2;
    d.k1 = s1;
    d.k2 = s1 * K1;
    d.k3 = s2;
    d.k4 = s2 * (J * J / K1);
    d.K2 = d.k4 / d.k3;
    d.positive_cooperativity = K1 >= 100.0 * d.K2;
    return d;
}

std::pair<ReactionNetwork, TemplateExpansion> unpack_hill(const ReactionNetwork& network,
                                                          const std::string& reaction_id,
                                                          const HillDerivation& derivation,
                                                          const HillUnpackOptions& options) {
    const Reaction* packed = network.find_reaction(reaction_id);
    if (!packed) throw Error(ErrorKind::Composition, "no reaction '" + reaction_id + "'");
    if (packed->rate_law.kind != RateLaw::Kind::Hill)
        throw Error(ErrorKind::Type, "reaction '" + reaction_id + "' does not carry a Hill law");
    if (packed->rate_law.n != 2)
        throw Error(ErrorKind::UnsupportedOrder,
                    "Hill unpacking derives the sequential dimer scheme; only n=2 is supported (got n=" +
                        std::to_string(packed->rate_law.n) + ")");

    const std::string regulator = packed->rate_law.regulator;
    auto delta = net_change(*packed);
    for (const auto& [id, d] : delta)
        if (d < 0)
            throw Error(ErrorKind::Type, "Hill reaction '" + reaction_id +
                                             "' must only synthesize (net consumption of '" + id + "')");

    TemplateExpansion exp;
    exp.replaced_reaction = reaction_id;

    auto taken = species_ids(network);
    const std::string dimer =
        pick_name(options.dimer_name.value_or(regulator + "2"), reaction_id, taken);

    std::string gene = options.gene_name.value_or("G");
    Count g_total = 1;
    bool gene_exists = network.has_species(gene);
    if (gene_exists) {
        g_total = network.find_species(gene)->initial_count;
        if (g_total < 1)
            throw Error(ErrorKind::Domain, "gene species '" + gene + "' needs at least one copy");
    } else {
        gene = pick_name(gene, reaction_id, taken);
        exp.introduced_species.push_back({gene, 1});
    }
    const std::string bound =
        pick_name(options.complex_name.value_or(gene + dimer), reaction_id, taken);

    exp.introduced_species.insert(exp.introduced_species.begin(), {dimer, 0});
    exp.introduced_species.push_back({bound, 0});

    const double kms_el = packed->rate_law.kms / static_cast<double>(g_total);

    // The equilibrium algebra TF2/TF^2 = k1/k2 is written in the
    // deterministic convention (flux k1*TF^2); the stochastic propensity
    // carries c*TF*(TF-1)/2, so the reaction constant is 2*k1.
    Reaction dim;
    dim.id = reaction_id + "_dim";
    dim.reactants = {{regulator, 2}};
    dim.products = {{dimer, 1}};
    dim.rate_law = RateLaw::mass_action(2.0 * derivation.k1);

    Reaction undim;
    undim.id = reaction_id + "_undim";
    undim.reactants = {{dimer, 1}};
    undim.products = {{regulator, 2}};
    undim.rate_law = RateLaw::mass_action(derivation.k2);

    Reaction bind;
    bind.id = reaction_id + "_bind";
    bind.reactants = {{dimer, 1}, {gene, 1}};
    bind.products = {{bound, 1}};
    bind.rate_law = RateLaw::mass_action(derivation.k3);

    Reaction unbind;
    unbind.id = reaction_id + "_unbind";
    unbind.reactants = {{bound, 1}};
    unbind.products = {{dimer, 1}, {gene, 1}};
    unbind.rate_law = RateLaw::mass_action(derivation.k4);

    Reaction tx;
    tx.id = reaction_id + "_tx";
    tx.reactants = {{bound, 1}};
    tx.products = {{bound, 1}};
    for (const auto& [id, d] : delta) tx.products.push_back({id, d});
    tx.rate_law = RateLaw::mass_action(kms_el);

    exp.introduced_reactions = {dim, undim, bind, unbind, tx};
    exp.derived_constants = {{"k1", derivation.k1}, {"k2", derivation.k2}, {"k3", derivation.k3},
                             {"k4", derivation.k4}, {"kms", kms_el}};

    Conservation cons;
    cons.id = "cons_" + gene;
    cons.terms = {{gene, 1}, {bound, 1}};
    cons.total = static_cast<double>(g_total);
    exp.introduced_conservations.push_back(cons);

    append_check(exp, "hill-order-2", true, "sequential dimer binding");
    append_check(exp, "positive-cooperativity", derivation.positive_cooperativity,
                 "K1 = " + std::to_string(derivation.K1) + ", K2 = " + std::to_string(derivation.K2) +
                     (derivation.positive_cooperativity ? "" : " (K1 < 100*K2: the intermediate accumulates)"));
    append_check(exp, "j-identity",
                 std::abs(std::sqrt(derivation.K1 * derivation.K2) - derivation.J) <= 1e-9 * derivation.J,
                 "sqrt(K1*K2) vs J");

    ReactionNetwork out = network;
    std::erase_if(out.reactions, [&](const Reaction& r) { return r.id == reaction_id; });
    for (const auto& sp : exp.introduced_species) out.species.push_back(sp);
    for (const auto& r : exp.introduced_reactions) out.reactions.push_back(r);
    for (const auto& c : exp.introduced_conservations)
        if (structurally_conserved(out, c)) out.conservations.push_back(c);
    return {std::move(out), std::move(exp)};
}

ComposeResult compose(const ReactionNetwork& base, const std::vector<ReactionNetwork>& parts,
                      const std::vector<std::pair<std::string, TemplateExpansion>>& substitutions) {
    ComposeResult result;
    ReactionNetwork& net = result.network;
    net = base;

    for (const auto& part : parts) {
        for (const auto& sp : part.species) {
            const Species* existing = net.find_species(sp.id);
            if (!existing) {
                net.species.push_back(sp);
            } else if (existing->initial_count != sp.initial_count) {
                result.warnings.push_back("species '" + sp.id + "': keeping base initial count " +
                                          std::to_string(existing->initial_count) + " over " +
                                          std::to_string(sp.initial_count));
            }
        }
        for (const auto& [key, value] : part.parameters) {
            auto it = net.parameters.find(key);
            if (it == net.parameters.end()) {
                net.parameters[key] = value;
            } else if (it->second != value) {
                throw Error(ErrorKind::Composition, "parameter '" + key + "' has conflicting values");
            }
        }
        for (const auto& r : part.reactions) {
            if (net.find_reaction(r.id))
                throw Error(ErrorKind::Composition, "reaction '" + r.id + "' declared by two modules");
            net.reactions.push_back(r);
        }
        for (const auto& c : part.conservations) {
            bool dup = std::any_of(net.conservations.begin(), net.conservations.end(),
                                   [&](const Conservation& x) { return x.id == c.id; });
            if (!dup) net.conservations.push_back(c);
        }
    }

    for (const auto& [target, exp] : substitutions) {
        if (!net.find_reaction(target))
            throw Error(ErrorKind::Composition, "substitution target '" + target + "' does not exist");
        std::erase_if(net.reactions, [&](const Reaction& r) { return r.id == target; });
        for (const auto& sp : exp.introduced_species) {
            const Species* existing = net.find_species(sp.id);
            if (!existing)
                net.species.push_back(sp);
            else if (existing->initial_count != sp.initial_count)
                throw Error(ErrorKind::Composition,
                            "expansion species '" + sp.id + "' conflicts with an existing initial count");
        }
        for (const auto& r : exp.introduced_reactions) {
            if (net.find_reaction(r.id))
                throw Error(ErrorKind::Composition, "expansion reaction '" + r.id + "' already exists");
            net.reactions.push_back(r);
        }
        for (const auto& c : exp.introduced_conservations) {
            bool dup = std::any_of(net.conservations.begin(), net.conservations.end(),
                                   [&](const Conservation& x) { return x.id == c.id; });
            if (!dup) net.conservations.push_back(c);
        }
    }

    ValidationReport report = validate_network(net);
    if (!report.ok())
        throw Error(ErrorKind::Composition, "composed network does not validate:\n" + report.to_string());
    return result;
}

} // namespace rxn

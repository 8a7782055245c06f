#include "rxnpack/network.hpp"

#include <algorithm>
#include <cmath>

namespace rxn {

bool ReactionNetwork::has_species(const std::string& id) const {
    return find_species(id) != nullptr;
}

const Species* ReactionNetwork::find_species(const std::string& id) const {
    for (const auto& sp : species)
        if (sp.id == id) return &sp;
    return nullptr;
}

std::size_t ReactionNetwork::species_index(const std::string& id) const {
    for (std::size_t i = 0; i < species.size(); ++i)
        if (species[i].id == id) return i;
    throw Error(ErrorKind::Domain, "unknown species '" + id + "'");
}

const Reaction* ReactionNetwork::find_reaction(const std::string& id) const {
    for (const auto& r : reactions)
        if (r.id == id) return &r;
    return nullptr;
}

Count SystemState::count(const std::string& id) const {
    auto it = counts.find(id);
    if (it == counts.end())
        throw Error(ErrorKind::Domain, "state has no species '" + id + "'");
    return it->second;
}

SystemState initial_state(const ReactionNetwork& network) {
    SystemState state;
    state.time = 0.0;
    for (const auto& sp : network.species) state.counts[sp.id] = sp.initial_count;
    return state;
}

namespace {

Count checked_count(const SystemState& state, const std::string& id, const std::string& rid) {
    Count x = state.count(id);
    if (x < 0)
        throw Error(ErrorKind::InvalidState,
                    "negative count of '" + id + "' while evaluating reaction '" + rid + "'");
    return x;
}

double int_pow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

} // namespace

double propensity(const Reaction& reaction, const SystemState& state) {
    const RateLaw& law = reaction.rate_law;
    switch (law.kind) {
    case RateLaw::Kind::MassAction: {
        double a = law.c;
        for (const auto& [id, coeff] : reaction.reactants) {
            Count x = checked_count(state, id, reaction.id);
            if (coeff == 1) {
                a *= static_cast<double>(x);
            } else if (coeff == 2) {
                // homodimerization: c * x * (x-1) / 2
                a *= static_cast<double>(x) * static_cast<double>(x - 1) / 2.0;
                if (x < 2) a = 0.0;
            } else {
                throw Error(ErrorKind::Domain, "mass-action stoichiometry above 2 in reaction '" +
                                                   reaction.id + "'");
            }
        }
        return a < 0.0 ? 0.0 : a;
    }
    case RateLaw::Kind::MichaelisMenten: {
        double S = static_cast<double>(checked_count(state, law.substrate, reaction.id));
        return law.vmax * S / (law.Km + S);
    }
    case RateLaw::Kind::Hill: {
        double X = static_cast<double>(checked_count(state, law.regulator, reaction.id));
        if (X == 0.0) return 0.0;
        double Xn = int_pow(X, law.n);
        double Jn = int_pow(law.J, law.n);
        return law.kms * Xn / (Jn + Xn);
    }
    }
    throw Error(ErrorKind::Domain, "unknown rate law kind");
}

std::vector<std::pair<std::string, int>> net_change(const Reaction& reaction) {
    std::vector<std::pair<std::string, int>> delta;
    auto add = [&delta](const std::string& id, int d) {
        for (auto& [sid, v] : delta) {
            if (sid == id) {
                v += d;
                return;
            }
        }
        delta.emplace_back(id, d);
    };
    for (const auto& [id, coeff] : reaction.reactants) add(id, -coeff);
    for (const auto& [id, coeff] : reaction.products) add(id, coeff);
    std::erase_if(delta, [](const auto& t) { return t.second == 0; });
    return delta;
}

void apply_reaction_in_place(SystemState& state, const Reaction& reaction) {
    for (const auto& [id, coeff] : reaction.reactants) {
        auto it = state.counts.find(id);
        if (it == state.counts.end())
            throw Error(ErrorKind::Domain, "state has no species '" + id + "'");
        if (it->second < coeff)
            throw Error(ErrorKind::Firing, "firing '" + reaction.id + "' would drive '" + id +
                                               "' negative (propensity bookkeeping bug)");
        it->second -= coeff;
    }
    for (const auto& [id, coeff] : reaction.products) {
        auto it = state.counts.find(id);
        if (it == state.counts.end())
            throw Error(ErrorKind::Domain, "state has no species '" + id + "'");
        it->second += coeff;
        if (it->second > kCountLimit)
            throw Error(ErrorKind::Numerical, "count overflow on '" + id + "'");
    }
}

SystemState apply_reaction(const SystemState& state, const Reaction& reaction) {
    SystemState next = state;
    apply_reaction_in_place(next, reaction);
    return next;
}

double conservation_residual(const Conservation& conservation, const SystemState& state) {
    double sum = 0.0;
    for (const auto& [id, coeff] : conservation.terms)
        sum += static_cast<double>(coeff) * static_cast<double>(state.count(id));
    return std::abs(sum - conservation.total);
}

namespace {

struct Fnv1a {
    std::uint64_t h = 0xcbf29ce484222325ULL;

    void feed(const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= p[i];
            h *= 0x100000001b3ULL;
        }
    }
    void feed(const std::string& s) {
        feed(s.data(), s.size());
        feed("\x1f", 1);
    }
    void feed(double v) { feed(&v, sizeof v); }
    void feed(Count v) { feed(&v, sizeof v); }
    void feed(int v) { feed(&v, sizeof v); }
};

} // namespace

std::uint64_t network_fingerprint(const ReactionNetwork& network) {
    Fnv1a f;
    f.feed(network.name);
    for (const auto& sp : network.species) {
        f.feed(sp.id);
        f.feed(sp.initial_count);
    }
    for (const auto& [k, v] : network.parameters) {
        f.feed(k);
        f.feed(v);
    }
    for (const auto& r : network.reactions) {
        f.feed(r.id);
        for (const auto& [id, c] : r.reactants) {
            f.feed(id);
            f.feed(c);
        }
        f.feed(std::string("->"));
        for (const auto& [id, c] : r.products) {
            f.feed(id);
            f.feed(c);
        }
        f.feed(static_cast<int>(r.rate_law.kind));
        f.feed(r.rate_law.c);
        f.feed(r.rate_law.vmax);
        f.feed(r.rate_law.Km);
        f.feed(r.rate_law.substrate);
        f.feed(r.rate_law.kms);
        f.feed(r.rate_law.J);
        f.feed(r.rate_law.n);
        f.feed(r.rate_law.regulator);
        f.feed(static_cast<int>(r.immediate));
    }
    for (const auto& c : network.conservations) {
        f.feed(c.id);
        for (const auto& [id, k] : c.terms) {
            f.feed(id);
            f.feed(k);
        }
        f.feed(c.total);
    }
    return f.h;
}

} // namespace rxn

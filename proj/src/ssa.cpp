#include "rxnpack/sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace rxn {

const char* terminated_reason_name(TerminatedReason r) {
    switch (r) {
    case TerminatedReason::ReachedTEnd: return "reached-t_end";
    case TerminatedReason::Exhausted: return "exhausted";
    case TerminatedReason::EventLimit: return "event-limit";
    }
    return "unknown";
}

std::size_t Trajectory::column(const std::string& species_id) const {
    for (std::size_t j = 0; j < species.size(); ++j)
        if (species[j] == species_id) return j;
    throw Error(ErrorKind::Domain, "trajectory has no species '" + species_id + "'");
}

std::vector<double> Trajectory::series(const std::string& species_id) const {
    std::size_t j = column(species_id);
    std::vector<double> out(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) out[i] = rows[i][j];
    return out;
}

namespace detail {

struct CompiledReaction {
    enum class Form { Constant, Unimolecular, Bimolecular, Homodimer, MichaelisMenten, Hill };
    Form form = Form::Constant;
    double c = 0.0;
    double vmax = 0.0, Km = 0.0;
    double kms = 0.0, Jn = 0.0;
    int n = 0;
    std::size_t s0 = 0, s1 = 0; // reactant / substrate / regulator indices
    std::vector<std::pair<std::size_t, int>> reactants;
    std::vector<std::pair<std::size_t, int>> delta;
    bool immediate = false;
};

struct CompiledNetwork {
    std::vector<std::string> species;
    std::vector<Count> initial;
    std::vector<CompiledReaction> reactions;   // stochastic (non-immediate)
    std::vector<CompiledReaction> immediates;  // zero-delay, declaration order
    std::vector<std::string> reaction_ids;     // ids of stochastic reactions
};

double int_pow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

CompiledNetwork compile(const ReactionNetwork& network) {
    CompiledNetwork cn;
    for (const auto& sp : network.species) {
        cn.species.push_back(sp.id);
        cn.initial.push_back(sp.initial_count);
    }
    auto index_of = [&network](const std::string& id) { return network.species_index(id); };

    for (const auto& r : network.reactions) {
        CompiledReaction cr;
        cr.immediate = r.immediate;
        for (const auto& [id, coeff] : r.reactants) cr.reactants.emplace_back(index_of(id), coeff);
        for (const auto& [id, d] : net_change(r)) cr.delta.emplace_back(index_of(id), d);

        const RateLaw& law = r.rate_law;
        switch (law.kind) {
        case RateLaw::Kind::MassAction: {
            cr.c = law.c;
            int molecules = 0;
            for (const auto& [idx, coeff] : cr.reactants) molecules += coeff;
            if (molecules == 0) {
                cr.form = CompiledReaction::Form::Constant;
            } else if (molecules == 1) {
                cr.form = CompiledReaction::Form::Unimolecular;
                cr.s0 = cr.reactants[0].first;
            } else if (cr.reactants.size() == 1) {
                cr.form = CompiledReaction::Form::Homodimer;
                cr.s0 = cr.reactants[0].first;
            } else {
                cr.form = CompiledReaction::Form::Bimolecular;
                cr.s0 = cr.reactants[0].first;
                cr.s1 = cr.reactants[1].first;
            }
            break;
        }
        case RateLaw::Kind::MichaelisMenten:
            cr.form = CompiledReaction::Form::MichaelisMenten;
            cr.vmax = law.vmax;
            cr.Km = law.Km;
            cr.s0 = index_of(law.substrate);
            break;
        case RateLaw::Kind::Hill:
            cr.form = CompiledReaction::Form::Hill;
            cr.kms = law.kms;
            cr.n = law.n;
            cr.Jn = int_pow(law.J, law.n);
            cr.s0 = index_of(law.regulator);
            break;
        }

        if (cr.immediate) {
            cn.immediates.push_back(std::move(cr));
        } else {
            cn.reactions.push_back(std::move(cr));
            cn.reaction_ids.push_back(r.id);
        }
    }
    return cn;
}

double compiled_propensity(const CompiledReaction& cr, const std::vector<Count>& x) {
    switch (cr.form) {
    case CompiledReaction::Form::Constant:
        return cr.c;
    case CompiledReaction::Form::Unimolecular:
        return cr.c * static_cast<double>(x[cr.s0]);
    case CompiledReaction::Form::Bimolecular:
        return cr.c * static_cast<double>(x[cr.s0]) * static_cast<double>(x[cr.s1]);
    case CompiledReaction::Form::Homodimer: {
        Count v = x[cr.s0];
        return v >= 2 ? cr.c * static_cast<double>(v) * static_cast<double>(v - 1) * 0.5 : 0.0;
    }
    case CompiledReaction::Form::MichaelisMenten: {
        double S = static_cast<double>(x[cr.s0]);
        return cr.vmax * S / (cr.Km + S);
    }
    case CompiledReaction::Form::Hill: {
        double X = static_cast<double>(x[cr.s0]);
        if (X <= 0.0) return 0.0;
        double Xn = int_pow(X, cr.n);
        return cr.kms * Xn / (cr.Jn + Xn);
    }
    }
    return 0.0;
}

bool applicable(const CompiledReaction& cr, const std::vector<Count>& x) {
    for (const auto& [idx, coeff] : cr.reactants)
        if (x[idx] < coeff) return false;
    return true;
}

void fire(const CompiledReaction& cr, std::vector<Count>& x, const std::string& rid) {
    for (const auto& [idx, coeff] : cr.reactants)
        if (x[idx] < coeff)
            throw Error(ErrorKind::Firing, "firing '" + rid + "' would drive a count negative");
    for (const auto& [idx, d] : cr.delta) {
        x[idx] += d;
        if (x[idx] > kCountLimit) throw Error(ErrorKind::Numerical, "count overflow in '" + rid + "'");
    }
}

// Fires zero-delay reactions, in declaration order, until none applies.
void settle_immediates(const CompiledNetwork& cn, std::vector<Count>& x) {
    if (cn.immediates.empty()) return;
    std::uint64_t guard = 0;
    bool fired = true;
    while (fired) {
        fired = false;
        for (const auto& cr : cn.immediates) {
            while (applicable(cr, x)) {
                fire(cr, x, "immediate");
                fired = true;
                if (++guard > 10000000ULL)
                    throw Error(ErrorKind::Numerical, "immediate reactions do not reach a fixed point");
            }
        }
    }
}

} // namespace detail

std::optional<std::pair<double, std::size_t>> ssa_step(const SystemState& state,
                                                       const ReactionNetwork& network,
                                                       Xoshiro256pp& rng) {
    std::vector<double> a;
    a.reserve(network.reactions.size());
    double a0 = 0.0;
    for (const auto& r : network.reactions) {
        if (r.immediate) continue;
        double ai = propensity(r, state);
        if (std::isnan(ai) || ai < 0.0)
            throw Error(ErrorKind::Numerical, "bad propensity for reaction '" + r.id + "'");
        a.push_back(ai);
        a0 += ai;
    }
    if (a0 <= 0.0) return std::nullopt;

    double tau = rng.next_exponential(a0);
    while (tau <= 0.0) tau = rng.next_exponential(a0);

    double target = rng.next_double() * a0;
    double cum = 0.0;
    std::size_t chosen = a.size() - 1;
    for (std::size_t j = 0; j < a.size(); ++j) {
        cum += a[j];
        if (target < cum) {
            chosen = j;
            break;
        }
    }
    // map back to the reaction's index in network.reactions
    std::size_t k = 0;
    for (std::size_t j = 0; j < network.reactions.size(); ++j) {
        if (network.reactions[j].immediate) continue;
        if (k == chosen) return std::make_pair(tau, j);
        ++k;
    }
    return std::make_pair(tau, network.reactions.size() - 1);
}

namespace {

using detail::CompiledNetwork;

Trajectory run_one(const CompiledNetwork& cn, const SsaConfig& config, Xoshiro256pp rng) {
    if (!(config.t_end > 0.0)) throw Error(ErrorKind::Domain, "t_end must be positive");
    if (config.recording == Recording::FixedGrid && !(config.dt > 0.0))
        throw Error(ErrorKind::Domain, "dt must be positive");

    Trajectory traj;
    traj.species = cn.species;

    std::vector<Count> x = cn.initial;
    detail::settle_immediates(cn, x);

    const std::size_t n_reactions = cn.reactions.size();
    std::vector<double> a(n_reactions, 0.0);

    double t = 0.0;
    std::uint64_t events = 0;

    const bool grid = config.recording == Recording::FixedGrid;
    std::size_t n_points = 0;
    std::size_t next_point = 0;
    if (grid) {
        n_points = static_cast<std::size_t>(std::floor(config.t_end / config.dt + 1e-9)) + 1;
        traj.times.reserve(n_points);
        traj.rows.reserve(n_points);
    }

    auto record = [&traj, &x](double at) {
        traj.times.push_back(at);
        traj.rows.emplace_back(x.begin(), x.end());
    };
    auto record_grid_until = [&](double up_to) {
        while (next_point < n_points) {
            double tp = static_cast<double>(next_point) * config.dt;
            if (tp > up_to + 1e-12) break;
            record(tp);
            ++next_point;
        }
    };

    if (!grid) record(0.0);

    TerminatedReason reason = TerminatedReason::ReachedTEnd;
    while (true) {
        double a0 = 0.0;
        for (std::size_t j = 0; j < n_reactions; ++j) {
            double aj = detail::compiled_propensity(cn.reactions[j], x);
            if (std::isnan(aj) || aj < 0.0)
                throw Error(ErrorKind::Numerical,
                            "bad propensity for reaction '" + cn.reaction_ids[j] + "'");
            a[j] = aj;
            a0 += aj;
        }

        if (a0 <= 0.0) {
            reason = TerminatedReason::Exhausted;
            if (grid) record_grid_until(config.t_end); // state is frozen from here on
            break;
        }

        double tau = rng.next_exponential(a0);
        while (tau <= 0.0) tau = rng.next_exponential(a0);
        double t_next = t + tau;

        if (grid) record_grid_until(std::min(t_next, config.t_end));
        if (t_next > config.t_end) break;

        double target = rng.next_double() * a0;
        double cum = 0.0;
        std::size_t j = n_reactions - 1;
        for (std::size_t k = 0; k < n_reactions; ++k) {
            cum += a[k];
            if (target < cum) {
                j = k;
                break;
            }
        }

        detail::fire(cn.reactions[j], x, cn.reaction_ids[j]);
        detail::settle_immediates(cn, x);
        t = t_next;
        ++events;

        if (!grid) record(t);

        if (events >= config.max_events) {
            reason = TerminatedReason::EventLimit;
            break;
        }
    }

    traj.events = events;
    traj.terminated_reason = reason;
    return traj;
}

} // namespace

Trajectory simulate_ssa(const ReactionNetwork& network, const SsaConfig& config) {
    auto cn = detail::compile(network);
    return run_one(cn, config, replicate_stream(config.seed, 0));
}

Ensemble run_ensemble(const ReactionNetwork& network, const SsaConfig& config, std::size_t n_runs,
                      std::size_t n_threads) {
    if (n_runs < 1) throw Error(ErrorKind::Domain, "n_runs must be >= 1");
    if (config.recording != Recording::FixedGrid)
        throw Error(ErrorKind::Domain, "ensembles require fixed-grid recording");

    auto cn = detail::compile(network);

    Ensemble ens;
    ens.base_seed = config.seed;
    ens.model_fingerprint = network_fingerprint(network);
    ens.species = cn.species;
    ens.replicates.resize(n_runs);

    if (n_threads == 0) n_threads = std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min(n_threads, n_runs);

    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&](std::size_t thread_index) {
        for (std::size_t i = thread_index; i < n_runs; i += n_threads) {
            try {
                ens.replicates[i] = run_one(cn, config, replicate_stream(config.seed, i));
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    if (n_threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (std::size_t th = 0; th < n_threads; ++th) pool.emplace_back(worker, th);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    ens.times = ens.replicates.front().times;
    return ens;
}

} // namespace rxn

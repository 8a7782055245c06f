#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rxnpack/network.hpp"
#include "rxnpack/rng.hpp"

namespace rxn {

enum class Recording { EveryEvent, FixedGrid };

struct SsaConfig {
    double t_end = 100.0; // minutes
    std::uint64_t seed = 0;
    Recording recording = Recording::FixedGrid;
    double dt = 1.0;                       // grid spacing for FixedGrid
    std::uint64_t max_events = 100000000; // runaway guard
};

enum class TerminatedReason { ReachedTEnd, Exhausted, EventLimit };

const char* terminated_reason_name(TerminatedReason r);

// Time series of species counts. SSA trajectories hold integer-valued
// entries; the ODE integrator reuses the container with real values.
struct Trajectory {
    std::vector<std::string> species;       // column order
    std::vector<double> times;              // strictly increasing
    std::vector<std::vector<double>> rows;  // rows[i][j]: species j at times[i]
    TerminatedReason terminated_reason = TerminatedReason::ReachedTEnd;
    std::uint64_t events = 0;

    std::size_t column(const std::string& species_id) const; // throws Domain
    std::vector<double> series(const std::string& species_id) const;
};

struct Ensemble {
    std::vector<std::string> species;
    std::vector<double> times;        // shared fixed grid
    std::vector<Trajectory> replicates;
    std::uint64_t base_seed = 0;
    std::uint64_t model_fingerprint = 0;
};

// One Gillespie direct-method step: returns (tau, reaction index) or nullopt
// when the total propensity is zero. Immediate reactions are excluded from
// the propensity sum. Throws Numerical on NaN or negative propensities.
std::optional<std::pair<double, std::size_t>> ssa_step(const SystemState& state,
                                                       const ReactionNetwork& network,
                                                       Xoshiro256pp& rng);

// Gillespie direct method over the whole horizon. Zero-delay (immediate)
// reactions fire, in declaration order to a fixed point, at t=0 and after
// every stochastic firing. Deterministic in (network, config).
Trajectory simulate_ssa(const ReactionNetwork& network, const SsaConfig& config);

// Independent replicates on a common grid; replicate i draws its stream from
// (config.seed, i), so results are identical however the work is scheduled.
// n_threads = 0 picks the hardware concurrency.
Ensemble run_ensemble(const ReactionNetwork& network, const SsaConfig& config,
                      std::size_t n_runs, std::size_t n_threads = 0);

struct OdeConfig {
    double t_end = 100.0;
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double dt_record = 1.0;
};

// Deterministic reference solution: Dormand-Prince 5(4) adaptive integration
// of the mass-action / compound-rate ODEs in molecule-count units.
// Immediate reactions are treated in the infinite-rate limit: the reactant of
// a unary immediate reaction is held at zero and its inflow is redirected to
// the reaction's products.
Trajectory simulate_ode(const ReactionNetwork& network, const OdeConfig& config);

} // namespace rxn

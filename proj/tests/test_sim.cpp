#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "rxnpack/models.hpp"
#include "rxnpack/sim.hpp"

using namespace rxn;

namespace {

ReactionNetwork decay_model(Count S0, double c) {
    ReactionNetwork net;
    net.name = "decay";
    net.species = {{"S", S0}};
    Reaction r;
    r.id = "d";
    r.reactants = {{"S", 1}};
    r.rate_law = RateLaw::mass_action(c);
    net.reactions.push_back(r);
    return net;
}

} // namespace

TEST_CASE("ssa_step samples exponential waiting times") {
    ReactionNetwork net;
    net.species = {{"X", 1}};
    Reaction r;
    r.id = "r";
    r.reactants = {{"X", 1}};
    r.products = {{"X", 1}};
    r.rate_law = RateLaw::mass_action(1.0); // a = 1 while X = 1
    net.reactions.push_back(r);

    SystemState s = initial_state(net);
    Xoshiro256pp rng(123);
    double sum = 0.0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        auto step = ssa_step(s, net, rng);
        REQUIRE(step.has_value());
        sum += step->first;
    }
    double mean = sum / n;
    CHECK(mean > 0.97);
    CHECK(mean < 1.03);
}

TEST_CASE("ssa_step selects reactions proportionally to propensity") {
    ReactionNetwork net;
    net.species = {{"X", 1}};
    Reaction a;
    a.id = "a";
    a.reactants = {{"X", 1}};
    a.products = {{"X", 1}};
    a.rate_law = RateLaw::mass_action(3.0);
    Reaction b = a;
    b.id = "b";
    b.rate_law = RateLaw::mass_action(1.0);
    net.reactions = {a, b};

    SystemState s = initial_state(net);
    Xoshiro256pp rng(99);
    int first = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        auto step = ssa_step(s, net, rng);
        REQUIRE(step.has_value());
        if (step->second == 0) ++first;
    }
    double freq = static_cast<double>(first) / n;
    CHECK(freq == doctest::Approx(0.75).epsilon(0.027)); // 0.75 +- 0.02
}

TEST_CASE("ssa_step reports exhaustion when all counts are zero") {
    ReactionNetwork net = decay_model(0, 1.0);
    SystemState s = initial_state(net);
    Xoshiro256pp rng(1);
    CHECK_FALSE(ssa_step(s, net, rng).has_value());
}

TEST_CASE("pure decay matches the binomial-thinning oracle") {
    // S(t) ~ Binomial(S0, e^{-ct}): mean S0*p, var S0*p*(1-p).
    const Count S0 = 1000;
    const double c = 1.0;
    SsaConfig cfg;
    cfg.t_end = 10.0;
    cfg.dt = 1.0;
    cfg.seed = 2024;
    Ensemble ens = run_ensemble(decay_model(S0, c), cfg, 200);

    const double p = std::exp(-1.0);
    const double mean_oracle = S0 * p;
    const double var_oracle = S0 * p * (1.0 - p);
    const double sem = std::sqrt(var_oracle / 200.0);

    double sum = 0.0;
    for (const auto& rep : ens.replicates) sum += rep.rows[1][0]; // t = 1
    double mean = sum / 200.0;
    CHECK(std::abs(mean - mean_oracle) < 3.0 * sem);
}

TEST_CASE("decay trajectory terminates exhausted and freezes the tail") {
    SsaConfig cfg;
    cfg.t_end = 200.0;
    cfg.dt = 1.0;
    cfg.seed = 5;
    Trajectory traj = simulate_ssa(decay_model(5, 2.0), cfg);
    CHECK(traj.terminated_reason == TerminatedReason::Exhausted);
    REQUIRE(traj.times.size() == 201);
    CHECK(traj.rows.back()[0] == 0.0);
    CHECK(traj.events == 5);
}

TEST_CASE("event limit truncates the trajectory") {
    SsaConfig cfg;
    cfg.t_end = 10.0;
    cfg.dt = 1.0;
    cfg.seed = 5;
    cfg.max_events = 3;
    Trajectory traj = simulate_ssa(decay_model(1000, 1.0), cfg);
    CHECK(traj.terminated_reason == TerminatedReason::EventLimit);
    CHECK(traj.events == 3);
    CHECK(traj.times.size() < 11);
}

TEST_CASE("fixed seed gives bit-identical trajectories") {
    SsaConfig cfg;
    cfg.t_end = 30.0;
    cfg.dt = 1.0;
    cfg.seed = 7;
    ReactionNetwork net = build_mm_model_default(false);
    Trajectory a = simulate_ssa(net, cfg);
    Trajectory b = simulate_ssa(net, cfg);
    REQUIRE(a.rows.size() == b.rows.size());
    CHECK(a.rows == b.rows);
    CHECK(a.events == b.events);
}

TEST_CASE("every-event recording is strictly increasing in time") {
    SsaConfig cfg;
    cfg.t_end = 5.0;
    cfg.seed = 3;
    cfg.recording = Recording::EveryEvent;
    Trajectory traj = simulate_ssa(decay_model(500, 1.0), cfg);
    for (std::size_t i = 1; i < traj.times.size(); ++i) CHECK(traj.times[i] > traj.times[i - 1]);
}

TEST_CASE("unpacked MM ensemble conserves enzyme at every sample") {
    SsaConfig cfg;
    cfg.t_end = 30.0;
    cfg.dt = 1.0;
    cfg.seed = 7;
    ReactionNetwork net = build_mm_model_default(false);
    Ensemble ens = run_ensemble(net, cfg, 50);
    std::size_t e = ens.replicates[0].column("E");
    std::size_t es = ens.replicates[0].column("ES");
    std::size_t p = ens.replicates[0].column("P");
    std::size_t s = ens.replicates[0].column("S");
    for (const auto& rep : ens.replicates) {
        for (const auto& row : rep.rows) {
            CHECK(row[e] + row[es] == 60.0);
            CHECK(row[s] + row[es] + row[p] == 599.0); // substrate bookkeeping
            for (double v : row) CHECK(v >= 0.0);
        }
    }
}

TEST_CASE("replicate streams are order-insensitive") {
    SsaConfig cfg;
    cfg.t_end = 10.0;
    cfg.dt = 1.0;
    cfg.seed = 11;
    ReactionNetwork net = decay_model(300, 0.5);
    Ensemble serial = run_ensemble(net, cfg, 16, 1);
    Ensemble parallel = run_ensemble(net, cfg, 16, 2);
    REQUIRE(serial.replicates.size() == parallel.replicates.size());
    for (std::size_t i = 0; i < serial.replicates.size(); ++i)
        CHECK(serial.replicates[i].rows == parallel.replicates[i].rows);

    SUBCASE("n_runs = 1 reproduces simulate_ssa") {
        Ensemble one = run_ensemble(net, cfg, 1);
        Trajectory direct = simulate_ssa(net, cfg);
        CHECK(one.replicates[0].rows == direct.rows);
    }

    SUBCASE("distinct replicates differ") {
        CHECK(serial.replicates[0].rows != serial.replicates[1].rows);
    }
}

TEST_CASE("immediate reactions fire in zero time") {
    // A -> B at rate 1; B -> C with an infinite-rate step: B never appears in
    // any recorded sample.
    ReactionNetwork net;
    net.species = {{"A", 50}, {"B", 0}, {"C", 0}};
    Reaction slow;
    slow.id = "slow";
    slow.reactants = {{"A", 1}};
    slow.products = {{"B", 1}};
    slow.rate_law = RateLaw::mass_action(1.0);
    Reaction inst;
    inst.id = "inst";
    inst.reactants = {{"B", 1}};
    inst.products = {{"C", 1}};
    inst.rate_law = RateLaw::mass_action(0.0);
    inst.immediate = true;
    net.reactions = {slow, inst};

    SsaConfig cfg;
    cfg.t_end = 20.0;
    cfg.dt = 0.25;
    cfg.seed = 13;
    Trajectory traj = simulate_ssa(net, cfg);
    std::size_t b = traj.column("B");
    std::size_t a = traj.column("A");
    std::size_t c = traj.column("C");
    for (const auto& row : traj.rows) {
        CHECK(row[b] == 0.0);
        CHECK(row[a] + row[c] == 50.0);
    }
    CHECK(traj.rows.back()[c] == 50.0);

    SUBCASE("initially present zero-delay reactants drain at t = 0") {
        net.species[1].initial_count = 7;
        Trajectory t2 = simulate_ssa(net, cfg);
        CHECK(t2.rows[0][t2.column("B")] == 0.0);
        CHECK(t2.rows[0][t2.column("C")] == 7.0);
    }
}

TEST_CASE("ensemble variance matches binomial thinning within 3 SE") {
    const Count S0 = 1000;
    const double c = 1.0;
    const std::size_t n = 200;
    SsaConfig cfg;
    cfg.t_end = 3.0;
    cfg.dt = 0.5;
    cfg.seed = 31;
    Ensemble ens = run_ensemble(decay_model(S0, c), cfg, n);

    for (double t : {0.5, 1.0, 2.0}) {
        const double p = std::exp(-c * t);
        const double q = 1.0 - p;
        const double sigma2 = S0 * p * q;
        // SE of the sample variance from the binomial fourth central moment
        const double mu4 = S0 * p * q * (1.0 - 6.0 * p * q) + 3.0 * sigma2 * sigma2;
        const double se_var =
            std::sqrt((mu4 - sigma2 * sigma2 * (static_cast<double>(n) - 3.0) / (n - 1.0)) / n);

        std::size_t idx = static_cast<std::size_t>(t / cfg.dt);
        double sum = 0.0, sumsq = 0.0;
        for (const auto& rep : ens.replicates) {
            double v = rep.rows[idx][0];
            sum += v;
            sumsq += v * v;
        }
        double mean = sum / n;
        double var = (sumsq - n * mean * mean) / (n - 1.0);
        CHECK(std::abs(var - sigma2) < 3.0 * se_var);
        CHECK(std::abs(mean - S0 * p) < 3.0 * std::sqrt(sigma2 / n));
    }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rxnpack/models.hpp"
#include "rxnpack/rng.hpp"
#include "rxnpack/sim.hpp"
#include "rxnpack/templates.hpp"
#include "rxnpack/validate.hpp"

using namespace rxn;

TEST_CASE("derive_mm_params") {
    SUBCASE("reference set: (60, 300, 60, rho=100) -> (1/3, 99, 1)") {
        MmDerivation d = derive_mm_params(60.0, 300.0, 60.0, 100.0);
        CHECK(d.k3 == 1.0);
        CHECK(d.k2 == 99.0);
        CHECK(d.k1 == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
        CHECK(d.k1 * d.Km / d.k3 == doctest::Approx(100.0).epsilon(1e-15));
        // k1 = 200*alpha at alpha = 0.00167 up to the table's rounding
        CHECK(d.k1 == doctest::Approx(200.0 * 0.00167).epsilon(3e-3));
    }

    SUBCASE("unit inputs, rho=2 -> (2, 1, 1)") {
        MmDerivation d = derive_mm_params(1.0, 1.0, 1.0, 2.0);
        CHECK(d.k1 == 2.0);
        CHECK(d.k2 == 1.0);
        CHECK(d.k3 == 1.0);
    }

    SUBCASE("rho=1000 variant") {
        MmDerivation d = derive_mm_params(60.0, 300.0, 60.0, 1000.0);
        CHECK(d.k1 == doctest::Approx(10.0 / 3.0).epsilon(1e-15));
        CHECK(d.k2 == 999.0);
        CHECK(d.k3 == 1.0);
    }

    SUBCASE("identities hold for random valid inputs") {
        Xoshiro256pp rng(11);
        for (int i = 0; i < 2000; ++i) {
            double vmax = std::exp(rng.next_double() * 8.0 - 4.0);
            double Km = std::exp(rng.next_double() * 8.0 - 2.0);
            double Etot = std::exp(rng.next_double() * 6.0 - 1.0);
            double rho = 1.0 + std::exp(rng.next_double() * 6.0 - 2.0);
            MmDerivation d = derive_mm_params(vmax, Km, Etot, rho);
            CHECK(d.Km * d.k1 - d.k3 == doctest::Approx(d.k2).epsilon(1e-12));
            CHECK(d.k3 * d.Etot == doctest::Approx(vmax).epsilon(1e-13));
            CHECK((d.k2 + d.k3) / d.k1 == doctest::Approx(Km).epsilon(1e-13));
            CHECK(d.k2 > 0.0);
        }
    }

    SUBCASE("rho <= 1 would make k2 non-positive") {
        CHECK_THROWS_AS(derive_mm_params(60.0, 300.0, 60.0, 1.0), Error);
        CHECK_THROWS_AS(derive_mm_params(60.0, 300.0, 60.0, 0.5), Error);
    }
}

TEST_CASE("select_enzyme_total") {
    CHECK(select_enzyme_total(599) == 60);
    CHECK(select_enzyme_total(10, 0.1) == 1);
    CHECK(select_enzyme_total(1000, 0.05) == 50);
    CHECK(select_enzyme_total(3, 0.1) == 1); // floor of one molecule
    CHECK_THROWS_AS(select_enzyme_total(599, 1.0), Error);
    CHECK_THROWS_AS(select_enzyme_total(599, 1.5), Error);
    CHECK_THROWS_AS(select_enzyme_total(0), Error);
}

TEST_CASE("unpack_mm") {
    ReactionNetwork packed = build_mm_model(60.0, 300.0, 60, 599, true);

    SUBCASE("three elementary reactions with the derived constants") {
        auto [net, exp] = unpack_mm(packed, "r1", 60, MmUnpackOptions{100.0, std::nullopt});
        CHECK(net.reactions.size() == 3);
        CHECK(net.find_species("E"));
        CHECK(net.find_species("ES"));
        CHECK(net.find_species("E")->initial_count == 60);
        CHECK(net.find_species("ES")->initial_count == 0);
        CHECK_FALSE(net.find_reaction("r1"));

        const Reaction* bind = net.find_reaction("r1_bind");
        const Reaction* unbind = net.find_reaction("r1_unbind");
        const Reaction* cat = net.find_reaction("r1_cat");
        REQUIRE(bind);
        REQUIRE(unbind);
        REQUIRE(cat);
        CHECK(bind->rate_law.c == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
        CHECK(unbind->rate_law.c == 99.0);
        CHECK(cat->rate_law.c == 1.0);

        // conservation E + ES = 60 is registered
        REQUIRE(net.conservations.size() == 1);
        CHECK(net.conservations[0].total == 60.0);

        // every introduced reaction is mass action
        for (const auto& r : exp.introduced_reactions)
            CHECK(r.rate_law.kind == RateLaw::Kind::MassAction);

        CHECK(exp.all_assumptions_pass());
        CHECK(validate_network(net).ok());
    }

    SUBCASE("enzyme in excess flags the QSSA assumption but still expands") {
        ReactionNetwork small = build_mm_model(60.0, 300.0, 60, 60, true);
        auto [net, exp] = unpack_mm(small, "r1", 600, MmUnpackOptions{100.0, std::nullopt});
        CHECK(net.reactions.size() == 3);
        bool qssa_failed = false;
        for (const auto& c : exp.assumption_report)
            if (c.name == "enzyme-below-substrate" && !c.passed) qssa_failed = true;
        CHECK(qssa_failed);
    }

    SUBCASE("non-MM reaction is a type error") {
        ReactionNetwork net;
        net.species = {{"A", 1}, {"B", 0}};
        Reaction r;
        r.id = "r1";
        r.reactants = {{"A", 1}};
        r.products = {{"B", 1}};
        r.rate_law = RateLaw::mass_action(1.0);
        net.reactions.push_back(r);
        CHECK_THROWS_AS(unpack_mm(net, "r1", 10, {}), Error);
    }

    SUBCASE("name collision falls back to the reaction-id suffix") {
        ReactionNetwork withE = packed;
        withE.species.push_back({"E", 5}); // unrelated species named E
        auto [net, exp] = unpack_mm(withE, "r1", 60, {});
        CHECK(net.find_species("E_r1"));
        CHECK(net.find_species("E")->initial_count == 5);
    }

    SUBCASE("degradation target gets a transient product plus zero-delay sink") {
        ReactionNetwork deg;
        deg.species = {{"M", 100}};
        Reaction r;
        r.id = "dm";
        r.reactants = {{"M", 1}};
        r.rate_law = RateLaw::michaelis_menten(10.0, 50.0, "M");
        deg.reactions.push_back(r);
        auto [net, exp] = unpack_mm(deg, "dm", 5, {});
        CHECK(net.find_species("P_M"));
        const Reaction* sink = net.find_reaction("dm_sink");
        REQUIRE(sink);
        CHECK(sink->immediate);
        CHECK(validate_network(net).ok());
    }
}

TEST_CASE("derive_hill_params") {
    const double alpha = kHillAlpha;

    SUBCASE("set 2 constants: (1a, 100, 1000a, 10)") {
        HillDerivation d = hill_set_derivation(2);
        CHECK(d.k1 == doctest::Approx(1.0 * alpha).epsilon(1e-15));
        CHECK(d.k2 == doctest::Approx(100.0).epsilon(1e-13));
        CHECK(d.k3 == doctest::Approx(1000.0 * alpha).epsilon(1e-15));
        CHECK(d.k4 == doctest::Approx(10.0).epsilon(1e-13));
        CHECK(d.K1 / d.K2 == doctest::Approx(1e4).epsilon(1e-12));
        CHECK(d.positive_cooperativity);
    }

    SUBCASE("set 6 has K1 < K2, cooperativity flag fails") {
        HillDerivation d = hill_set_derivation(6);
        CHECK(d.K1 < d.K2);
        CHECK_FALSE(d.positive_cooperativity);
        CHECK(d.k2 == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(d.k4 == doctest::Approx(1000.0).epsilon(1e-13));
    }

    SUBCASE("identity J^2 = (k2*k4)/(k1*k3) for every set") {
        for (const auto& set : hill_sets()) {
            HillDerivation d = hill_set_derivation(set.id);
            double lhs = (d.k2 * d.k4) / (d.k1 * d.k3);
            CHECK(lhs == doctest::Approx(1.0 / (alpha * alpha)).epsilon(1e-12));
        }
    }

    SUBCASE("identity by construction for arbitrary inputs") {
        Xoshiro256pp rng(5);
        for (int i = 0; i < 2000; ++i) {
            double J = std::exp(rng.next_double() * 10.0);
            double K1 = std::exp(rng.next_double() * 12.0 - 4.0);
            double s1 = std::exp(rng.next_double() * 6.0 - 3.0);
            double s2 = std::exp(rng.next_double() * 6.0 - 3.0);
            HillDerivation d = derive_hill_params(J, K1, s1, s2);
            CHECK((d.k2 * d.k4) / (d.k1 * d.k3) == doctest::Approx(J * J).epsilon(1e-12));
            CHECK(d.K1 == doctest::Approx(d.k2 / d.k1).epsilon(1e-13));
            CHECK(d.K2 == doctest::Approx(J * J / K1).epsilon(1e-12));
        }
    }

    SUBCASE("K1 = J, s1 = s2 = 1") {
        HillDerivation d = derive_hill_params(599.0, 599.0, 1.0, 1.0);
        CHECK(d.k2 * d.k4 / (d.k1 * d.k3) == doctest::Approx(599.0 * 599.0));
    }
}

TEST_CASE("unpack_hill") {
    ReactionNetwork packed = build_hill_model(0, 599, true);
    HillDerivation der = hill_set_derivation(2);

    SUBCASE("five-reaction scheme with introduced species") {
        auto [net, exp] = unpack_hill(packed, "tx", der);
        CHECK(net.reactions.size() == 5);
        CHECK(net.find_species("TF2"));
        CHECK(net.find_species("GTF2"));
        CHECK(net.find_species("G")->initial_count == 1);
        CHECK_FALSE(net.find_reaction("tx"));

        const Reaction* dim = net.find_reaction("tx_dim");
        REQUIRE(dim);
        CHECK(dim->reactants == std::vector<std::pair<std::string, int>>{{"TF", 2}});
        CHECK(dim->rate_law.c == doctest::Approx(2.0 * der.k1)); // stochastic dimer constant
        CHECK(net.find_reaction("tx_undim")->rate_law.c == doctest::Approx(der.k2));
        CHECK(net.find_reaction("tx_bind")->rate_law.c == doctest::Approx(der.k3));
        CHECK(net.find_reaction("tx_unbind")->rate_law.c == doctest::Approx(der.k4));
        CHECK(net.find_reaction("tx_tx")->rate_law.c == doctest::Approx(1.0)); // kms / G_tot

        // G + GTF2 = 1 conservation
        bool found = false;
        for (const auto& c : net.conservations)
            if (c.id == "cons_G" && c.total == 1.0) found = true;
        CHECK(found);

        for (const auto& r : exp.introduced_reactions)
            CHECK(r.rate_law.kind == RateLaw::Kind::MassAction);
        CHECK(validate_network(net).ok());
    }

    SUBCASE("n != 2 raises unsupported-order") {
        ReactionNetwork n3 = packed;
        n3.reactions[0].rate_law.n = 3;
        try {
            unpack_hill(n3, "tx", der);
            CHECK(false);
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::UnsupportedOrder);
        }
    }

    SUBCASE("G_tot = 1 keeps the bound gene in {0, 1} along a trajectory") {
        auto [net, exp] = unpack_hill(packed, "tx", der);
        SsaConfig cfg;
        cfg.t_end = 20.0;
        cfg.dt = 0.05;
        cfg.seed = 42;
        Trajectory traj = simulate_ssa(net, cfg);
        std::size_t g = traj.column("G");
        std::size_t gtf2 = traj.column("GTF2");
        for (const auto& row : traj.rows) {
            CHECK((row[gtf2] == 0.0 || row[gtf2] == 1.0));
            CHECK(row[g] + row[gtf2] == 1.0);
        }
    }
}

TEST_CASE("unpacked networks preserve totals along ODE trajectories") {
    SUBCASE("enzyme total") {
        ReactionNetwork net = build_mm_model(60.0, 300.0, 60, 599, false);
        OdeConfig cfg;
        cfg.t_end = 30.0;
        cfg.dt_record = 0.5;
        Trajectory traj = simulate_ode(net, cfg);
        std::size_t e = traj.column("E"), es = traj.column("ES");
        for (const auto& row : traj.rows)
            CHECK(row[e] + row[es] == doctest::Approx(60.0).epsilon(1e-9));
    }
    SUBCASE("gene total") {
        ReactionNetwork net = build_hill_model(2, 599);
        OdeConfig cfg;
        cfg.t_end = 30.0;
        cfg.dt_record = 0.5;
        Trajectory traj = simulate_ode(net, cfg);
        std::size_t g = traj.column("G"), b = traj.column("GTF2");
        for (const auto& row : traj.rows)
            CHECK(row[g] + row[b] == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("packed and unpacked MM agree in the deterministic limit") {
    // ODE product at t_end matches within 2% when the QSSA holds.
    OdeConfig cfg;
    cfg.t_end = 30.0;
    cfg.dt_record = 0.5;
    Trajectory packed = simulate_ode(build_mm_model(60.0, 300.0, 60, 599, true), cfg);
    Trajectory unpacked = simulate_ode(build_mm_model(60.0, 300.0, 60, 599, false), cfg);
    double p1 = packed.rows.back()[packed.column("P")];
    double p2 = unpacked.rows.back()[unpacked.column("P")];
    CHECK(p2 == doctest::Approx(p1).epsilon(0.02));
}

TEST_CASE("compose") {
    ReactionNetwork base = build_mm_model(60.0, 300.0, 60, 599, true);

    SUBCASE("identity composition") {
        ComposeResult r = compose(base, {}, {});
        CHECK(r.network.species.size() == base.species.size());
        CHECK(r.network.reactions.size() == base.reactions.size());
        CHECK(r.warnings.empty());
    }

    SUBCASE("shared species with equal initials merge silently") {
        ReactionNetwork part;
        part.species = {{"P", 0}, {"Q", 7}};
        Reaction r;
        r.id = "qdeg";
        r.reactants = {{"Q", 1}};
        r.rate_law = RateLaw::mass_action(0.1);
        part.reactions.push_back(r);
        ComposeResult res = compose(base, {part}, {});
        CHECK(res.warnings.empty());
        CHECK(res.network.find_species("Q"));
        CHECK(res.network.reactions.size() == 2);
    }

    SUBCASE("conflicting initials keep the base value with a warning") {
        ReactionNetwork part;
        part.species = {{"S", 12}};
        ComposeResult res = compose(base, {part}, {});
        CHECK(res.network.find_species("S")->initial_count == 599);
        CHECK(res.warnings.size() == 1);
    }

    SUBCASE("conflicting parameter values are an error") {
        ReactionNetwork part;
        part.parameters["vmax"] = 61.0;
        CHECK_THROWS_AS(compose(base, {part}, {}), Error);
    }

    SUBCASE("substitution replaces the packed reaction with the expansion") {
        auto [unpacked, exp] = unpack_mm(base, "r1", 60, {});
        ComposeResult res = compose(base, {}, {{"r1", exp}});
        CHECK_FALSE(res.network.find_reaction("r1"));
        CHECK(res.network.reactions.size() == 3);
        CHECK(res.network.find_species("E"));
        std::string why;
        CHECK(networks_equivalent(res.network, unpacked, 1e-12, &why));
        INFO(why);
    }

    SUBCASE("dangling substitution target") {
        auto [unpacked, exp] = unpack_mm(base, "r1", 60, {});
        CHECK_THROWS_AS(compose(base, {}, {{"nope", exp}}), Error);
    }

    SUBCASE("associativity over disjoint parts") {
        ReactionNetwork b, c;
        b.species = {{"B", 1}};
        c.species = {{"C", 2}};
        Reaction rb;
        rb.id = "rb";
        rb.reactants = {{"B", 1}};
        rb.rate_law = RateLaw::mass_action(1.0);
        b.reactions.push_back(rb);
        Reaction rc;
        rc.id = "rc";
        rc.reactants = {{"C", 1}};
        rc.rate_law = RateLaw::mass_action(2.0);
        c.reactions.push_back(rc);

        ReactionNetwork joint = compose(base, {b, c}, {}).network;
        ReactionNetwork nested = compose(compose(base, {b}, {}).network, {c}, {}).network;
        std::string why;
        CHECK(networks_equivalent(joint, nested, 0.0, &why));
        INFO(why);
    }
}

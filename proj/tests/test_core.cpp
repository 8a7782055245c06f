#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rxnpack/network.hpp"
#include "rxnpack/rng.hpp"
#include "rxnpack/units.hpp"
#include "rxnpack/validate.hpp"

using namespace rxn;

namespace {

Reaction make_ma(const std::string& id, std::vector<std::pair<std::string, int>> re,
                 std::vector<std::pair<std::string, int>> pr, double c) {
    Reaction r;
    r.id = id;
    r.reactants = std::move(re);
    r.products = std::move(pr);
    r.rate_law = RateLaw::mass_action(c);
    return r;
}

SystemState state_of(std::map<std::string, Count> counts) {
    SystemState s;
    s.counts = std::move(counts);
    return s;
}

} // namespace

TEST_CASE("mass-action propensities") {
    SystemState s = state_of({{"X", 5}, {"Y", 3}});

    CHECK(propensity(make_ma("r", {{"X", 1}}, {}, 2.0), s) == doctest::Approx(10.0)); // c*x
    CHECK(propensity(make_ma("r", {{"X", 1}, {"Y", 1}}, {}, 0.5), s) == doctest::Approx(7.5));
    CHECK(propensity(make_ma("r", {}, {{"X", 1}}, 3.25), s) == doctest::Approx(3.25)); // constant

    SUBCASE("homodimerization c*x*(x-1)/2") {
        Reaction dim = make_ma("dim", {{"X", 2}}, {{"Y", 1}}, 1.5);
        CHECK(propensity(dim, s) == doctest::Approx(1.5 * 5 * 4 / 2.0));
        CHECK(propensity(dim, state_of({{"X", 2}, {"Y", 0}})) == doctest::Approx(1.5)); // x=2 -> c*1
        CHECK(propensity(dim, state_of({{"X", 1}, {"Y", 0}})) == 0.0);
        CHECK(propensity(dim, state_of({{"X", 0}, {"Y", 0}})) == 0.0);
    }

    SUBCASE("zero when a reactant is absent") {
        SystemState zero = state_of({{"X", 0}, {"Y", 3}});
        CHECK(propensity(make_ma("r", {{"X", 1}}, {}, 2.0), zero) == 0.0);
        CHECK(propensity(make_ma("r", {{"X", 1}, {"Y", 1}}, {}, 2.0), zero) == 0.0);
    }

    SUBCASE("negative count is an invalid state") {
        SystemState bad = state_of({{"X", -1}, {"Y", 3}});
        CHECK_THROWS_AS(propensity(make_ma("r", {{"X", 1}}, {}, 2.0), bad), Error);
    }
}

TEST_CASE("compound propensities") {
    SUBCASE("Michaelis-Menten half-saturation: vmax/2 at S = Km") {
        Reaction mm;
        mm.id = "mm";
        mm.reactants = {{"S", 1}};
        mm.products = {{"P", 1}};
        mm.rate_law = RateLaw::michaelis_menten(60.0, 300.0, "S");
        CHECK(propensity(mm, state_of({{"S", 300}, {"P", 0}})) == doctest::Approx(30.0));
        CHECK(propensity(mm, state_of({{"S", 0}, {"P", 0}})) == 0.0);
        CHECK(propensity(mm, state_of({{"S", 599}, {"P", 0}})) ==
              doctest::Approx(60.0 * 599.0 / 899.0));
    }

    SUBCASE("Hill half-saturation: kms/2 at X = J") {
        Reaction hill;
        hill.id = "tx";
        hill.reactants = {{"TF", 1}};
        hill.products = {{"TF", 1}, {"M", 1}};
        hill.rate_law = RateLaw::hill(3.0, 599.0, 2, "TF");
        CHECK(propensity(hill, state_of({{"TF", 599}, {"M", 0}})) == doctest::Approx(1.5));
        CHECK(propensity(hill, state_of({{"TF", 0}, {"M", 0}})) == 0.0);
        // F(3J) = 9/10
        CHECK(propensity(hill, state_of({{"TF", 1797}, {"M", 0}})) == doctest::Approx(2.7));
    }
}

TEST_CASE("apply_reaction") {
    SUBCASE("complex formation") {
        SystemState s = state_of({{"E", 1}, {"S", 1}, {"ES", 0}});
        Reaction bind = make_ma("bind", {{"E", 1}, {"S", 1}}, {{"ES", 1}}, 1.0);
        SystemState next = apply_reaction(s, bind);
        CHECK(next.count("E") == 0);
        CHECK(next.count("S") == 0);
        CHECK(next.count("ES") == 1);
        CHECK(next.time == s.time);
    }

    SUBCASE("catalyst preserved") {
        SystemState s = state_of({{"GTF2", 1}, {"M", 0}});
        Reaction tx = make_ma("tx", {{"GTF2", 1}}, {{"M", 1}, {"GTF2", 1}}, 1.0);
        SystemState next = apply_reaction(s, tx);
        CHECK(next.count("GTF2") == 1);
        CHECK(next.count("M") == 1);
    }

    SUBCASE("degradation") {
        SystemState s = state_of({{"P", 3}});
        Reaction deg = make_ma("deg", {{"P", 1}}, {}, 1.0);
        CHECK(apply_reaction(s, deg).count("P") == 2);
    }

    SUBCASE("firing below zero is an error") {
        SystemState s = state_of({{"P", 0}});
        Reaction deg = make_ma("deg", {{"P", 1}}, {}, 1.0);
        CHECK_THROWS_AS(apply_reaction(s, deg), Error);
    }

    SUBCASE("net change orthogonal to conserved pairs") {
        Reaction bind = make_ma("bind", {{"E", 1}, {"S", 1}}, {{"ES", 1}}, 1.0);
        Reaction cat = make_ma("cat", {{"ES", 1}}, {{"E", 1}, {"P", 1}}, 1.0);
        for (const Reaction* r : {&bind, &cat}) {
            int dot = 0;
            for (const auto& [id, d] : net_change(*r))
                if (id == "E" || id == "ES") dot += d;
            CHECK(dot == 0);
        }
    }
}

TEST_CASE("compute_alpha") {
    // alpha = 1/(N_A * 1e-6 * V)
    CHECK(compute_alpha(1e-15) == doctest::Approx(1.6605390671738466e-3).epsilon(1e-12));
    CHECK(compute_alpha(1e-14) == doctest::Approx(1.6605390671738466e-4).epsilon(1e-12));
    // alpha = 0.00167 corresponds to V ~ 9.94e-16 L
    CHECK(compute_alpha(9.943e-16) == doctest::Approx(0.00167).epsilon(1e-3));
    CHECK(compute_alpha(1e-15) > compute_alpha(2e-15)); // decreasing in V
    CHECK_THROWS_AS(compute_alpha(0.0), Error);
    CHECK_THROWS_AS(compute_alpha(-1.0), Error);

    SUBCASE("alpha * (N_A*1e-6*V) = 1 to machine precision") {
        Xoshiro256pp rng(7);
        for (int i = 0; i < 1000; ++i) {
            double V = std::exp(rng.next_double() * 20.0 - 25.0);
            double a = compute_alpha(V);
            CHECK(a * (kAvogadro * 1e-6 * V) == doctest::Approx(1.0).epsilon(1e-15));
        }
    }
}

TEST_CASE("convert_units") {
    const double alpha = 0.00167;

    SUBCASE("Km = 0.5 uM becomes about 300 molecules") {
        double counts = convert_units(0.5, UnitRole::Concentration, alpha, ConvertDirection::ToCounts);
        CHECK(counts == doctest::Approx(299.4).epsilon(1e-3));
    }
    SUBCASE("role behavior") {
        CHECK(convert_units(2.0, UnitRole::UnimolecularRate, alpha, ConvertDirection::ToCounts) == 2.0);
        CHECK(convert_units(2.0, UnitRole::BimolecularRate, alpha, ConvertDirection::ToCounts) ==
              doctest::Approx(2.0 * alpha));
        CHECK(convert_units(2.0, UnitRole::ZerothOrderRate, alpha, ConvertDirection::ToCounts) ==
              doctest::Approx(2.0 / alpha));
    }
    SUBCASE("round-trip identity to machine precision") {
        Xoshiro256pp rng(3);
        for (UnitRole role : {UnitRole::Concentration, UnitRole::UnimolecularRate,
                              UnitRole::BimolecularRate, UnitRole::ZerothOrderRate}) {
            for (int i = 0; i < 400; ++i) {
                double v = std::exp(rng.next_double() * 12.0 - 6.0);
                double a = std::exp(rng.next_double() * 8.0 - 7.0);
                double rt = convert_units(convert_units(v, role, a, ConvertDirection::ToCounts), role,
                                          a, ConvertDirection::ToConcentration);
                CHECK(rt == doctest::Approx(v).epsilon(1e-15));
            }
        }
    }
    SUBCASE("alpha must be positive") {
        CHECK_THROWS_AS(
            convert_units(1.0, UnitRole::Concentration, 0.0, ConvertDirection::ToCounts), Error);
    }
}

TEST_CASE("validate_network") {
    ReactionNetwork net;
    net.name = "mm";
    net.species = {{"S", 599}, {"P", 0}};
    Reaction r;
    r.id = "r1";
    r.reactants = {{"S", 1}};
    r.products = {{"P", 1}};
    r.rate_law = RateLaw::michaelis_menten(60.0, 300.0, "S");
    net.reactions.push_back(r);

    SUBCASE("well-formed network produces an empty report") {
        ValidationReport rep = validate_network(net);
        CHECK(rep.ok());
        CHECK(rep.issues.empty());
    }

    SUBCASE("undeclared species is reported with the reaction id") {
        net.reactions.push_back(make_ma("bad", {{"Q", 1}}, {}, 1.0));
        ValidationReport rep = validate_network(net);
        CHECK_FALSE(rep.ok());
        bool found = false;
        for (const auto& issue : rep.issues)
            if (issue.subject == "bad" && issue.code == "unknown-species") found = true;
        CHECK(found);
    }

    SUBCASE("violated initial conservation") {
        net.species.push_back({"E", 50});
        net.species.push_back({"ES", 0});
        Conservation c;
        c.id = "cons_E";
        c.terms = {{"E", 1}, {"ES", 1}};
        c.total = 60.0;
        net.conservations.push_back(c);
        ValidationReport rep = validate_network(net);
        CHECK_FALSE(rep.ok());
        bool found = false;
        for (const auto& issue : rep.issues)
            if (issue.code == "conservation-violated") found = true;
        CHECK(found);
    }

    SUBCASE("missing compound substrate") {
        net.reactions[0].rate_law.substrate = "missing";
        ValidationReport rep = validate_network(net);
        CHECK_FALSE(rep.ok());
    }

    SUBCASE("negative constant") {
        net.reactions.push_back(make_ma("neg", {{"S", 1}}, {}, -2.0));
        CHECK_FALSE(validate_network(net).ok());
    }

    SUBCASE("duplicate ids") {
        net.species.push_back({"S", 1});
        CHECK_FALSE(validate_network(net).ok());
    }
}

TEST_CASE("network fingerprint is structure-sensitive") {
    ReactionNetwork a;
    a.name = "m";
    a.species = {{"S", 10}};
    a.reactions.push_back(make_ma("r", {{"S", 1}}, {}, 1.0));
    ReactionNetwork b = a;
    CHECK(network_fingerprint(a) == network_fingerprint(b));
    b.reactions[0].rate_law.c = 2.0;
    CHECK(network_fingerprint(a) != network_fingerprint(b));
    b = a;
    b.species[0].initial_count = 11;
    CHECK(network_fingerprint(a) != network_fingerprint(b));
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rxnpack/analysis.hpp"
#include "rxnpack/models.hpp"
#include "rxnpack/reproduce.hpp"
#include "rxnpack/rng.hpp"

using namespace rxn;

namespace {

Trajectory line_trajectory(double slope, double dt, std::size_t n) {
    Trajectory traj;
    traj.species = {"P"};
    for (std::size_t i = 0; i < n; ++i) {
        double t = dt * static_cast<double>(i);
        traj.times.push_back(t);
        traj.rows.push_back({slope * t});
    }
    return traj;
}

std::vector<BindingCurvePoint> sample_hill(double n, double J, std::size_t points) {
    std::vector<BindingCurvePoint> out;
    for (std::size_t i = 0; i < points; ++i) {
        double f = static_cast<double>(i) / static_cast<double>(points - 1);
        double X = J * std::pow(64.0, f - 0.5); // J/8 .. 8J
        out.push_back({X, hill_curve(X, n, J)});
    }
    return out;
}

} // namespace

TEST_CASE("initial_rate on an exact line returns the slope with zero error") {
    Trajectory traj = line_trajectory(2.0, 1.0, 6); // P(t) = 2t at t = 0..5
    RateEstimate est = initial_rate(traj, "P");
    CHECK(est.rate == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(est.se == doctest::Approx(0.0));
}

TEST_CASE("initial_rate window follows substrate depletion") {
    Trajectory traj;
    traj.species = {"S", "P"};
    // S falls fast; only the first 4 samples stay within 10% of S0 = 100.
    std::vector<double> s = {100, 97, 94, 91, 80, 60, 40};
    for (std::size_t i = 0; i < s.size(); ++i) {
        traj.times.push_back(static_cast<double>(i));
        traj.rows.push_back({s[i], 3.0 * static_cast<double>(i)});
    }
    RateEstimate est = initial_rate(traj, "P", std::string("S"), 0.1);
    CHECK(est.n_samples == 4);
    CHECK(est.rate == doctest::Approx(3.0));

    SUBCASE("a fast-depleting replicate floors the window at 3 samples") {
        Trajectory fast = traj;
        fast.rows[1][0] = 10.0; // substrate crashes after the first sample
        CHECK(initial_rate(fast, "P", std::string("S"), 0.1).n_samples == 3);
    }

    SUBCASE("trajectories shorter than 3 samples are insufficient") {
        Trajectory tiny;
        tiny.species = {"S", "P"};
        tiny.times = {0.0, 1.0};
        tiny.rows = {{100.0, 0.0}, {99.0, 3.0}};
        CHECK_THROWS_AS(initial_rate(tiny, "P", std::string("S"), 0.1), Error);
    }
}

TEST_CASE("hill_curve basics") {
    CHECK(hill_curve(599.0, 2.0, 599.0) == doctest::Approx(0.5));
    CHECK(hill_curve(0.0, 2.0, 599.0) == 0.0);
    CHECK(hill_curve(5990.0, 2.0, 599.0) == doctest::Approx(100.0 / 101.0));
}

TEST_CASE("fit_hill recovers noiseless parameters") {
    SUBCASE("n=2, J=599 self-fit") {
        HillFit fit = fit_hill(sample_hill(2.0, 599.0, 12));
        CHECK(fit.n_prime == doctest::Approx(2.0).epsilon(1e-6));
        CHECK(fit.J_prime == doctest::Approx(599.0).epsilon(1e-6));
        CHECK(fit.rmse < 1e-8);
    }
    SUBCASE("recovery within 1e-4 relative over a range of orders") {
        Xoshiro256pp rng(17);
        for (int i = 0; i < 30; ++i) {
            double n = 0.5 + rng.next_double() * 5.5;
            double J = std::exp(rng.next_double() * 6.0 + 1.0);
            HillFit fit = fit_hill(sample_hill(n, J, 14));
            CHECK(fit.n_prime == doctest::Approx(n).epsilon(1e-4));
            CHECK(fit.J_prime == doctest::Approx(J).epsilon(1e-4));
        }
    }
    SUBCASE("no half-saturation crossing is unfittable") {
        std::vector<BindingCurvePoint> low;
        for (double x : {1.0, 2.0, 3.0, 4.0}) low.push_back({x, 0.01 * x});
        CHECK_THROWS_AS(fit_hill(low), Error);
    }
    SUBCASE("fewer than 4 points is insufficient") {
        std::vector<BindingCurvePoint> three = {{1, 0.1}, {2, 0.5}, {3, 0.9}};
        CHECK_THROWS_AS(fit_hill(three), Error);
    }
}

TEST_CASE("rmse_vs_theoretical") {
    auto pts = sample_hill(2.0, 599.0, 10);
    CHECK(rmse_vs_theoretical(pts, 2.0, 599.0) == doctest::Approx(0.0));
    SUBCASE("positive off the curve") {
        auto shifted = pts;
        for (auto& p : shifted) p.bound_fraction += 0.01;
        CHECK(rmse_vs_theoretical(shifted, 2.0, 599.0) == doctest::Approx(0.01).epsilon(1e-6));
    }
}

TEST_CASE("response_coefficient") {
    SUBCASE("analytic n=2 gives exactly 9") {
        auto curve = [](double X) { return hill_curve(X, 2.0, 599.0); };
        CHECK(response_coefficient(curve, 1.0, 1e6) == doctest::Approx(9.0).epsilon(1e-9));
    }
    SUBCASE("analytic n=1 gives 81") {
        auto curve = [](double X) { return hill_curve(X, 1.0, 100.0); };
        CHECK(response_coefficient(curve, 1e-3, 1e7) == doctest::Approx(81.0).epsilon(1e-9));
    }
    SUBCASE("points route matches and is scale-invariant") {
        auto pts = sample_hill(2.0, 599.0, 40);
        double R = response_coefficient(pts);
        CHECK(R == doctest::Approx(9.0).epsilon(5e-3)); // interpolation bias on the point grid
        auto scaled = pts;
        for (auto& p : scaled) p.TF_total *= 37.5;
        CHECK(response_coefficient(scaled) == doctest::Approx(R).epsilon(1e-12));
    }
    SUBCASE("uncovered range raises a range error") {
        std::vector<BindingCurvePoint> mid = {{100, 0.3}, {200, 0.5}, {300, 0.6}};
        CHECK_THROWS_AS(response_coefficient(mid), Error);
    }
}

TEST_CASE("hill_coeff_from_R") {
    CHECK(hill_coeff_from_R(9.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(hill_coeff_from_R(81.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hill_coeff_from_R(13.89) == doctest::Approx(1.67).epsilon(0.006));
    CHECK_THROWS_AS(hill_coeff_from_R(1.0), Error);
    CHECK_THROWS_AS(hill_coeff_from_R(0.5), Error);

    SUBCASE("inverse of response_coefficient on exact Hill curves") {
        for (double n : {0.5, 1.0, 1.5, 2.0, 3.0, 4.5, 6.0}) {
            auto curve = [n](double X) { return hill_curve(X, n, 1000.0); };
            double R = response_coefficient(curve, 1e-4, 1e10);
            CHECK(hill_coeff_from_R(R) == doctest::Approx(n).epsilon(1e-6));
        }
    }
}

TEST_CASE("sequential_binding_equilibrium") {
    // Weak dimerization: behaves as the ideal curve in total TF.
    double K1 = 1e9, K2 = 599.0 * 599.0 / K1;
    CHECK(sequential_binding_equilibrium(599.0, K1, K2) == doctest::Approx(0.5).epsilon(1e-3));
    // Strong dimerization: half saturation when TF2 = K2, i.e. total ~ 2*K2.
    double K1s = 5.99, K2s = 59880.0;
    double half_total = 2.0 * K2s + std::sqrt(K1s * K2s);
    CHECK(sequential_binding_equilibrium(half_total, K1s, K2s) == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("binding_fraction on the set-2 scheme approaches one half at TF = J") {
    ReactionNetwork net = build_hill_model(2, 599);
    SsaConfig cfg;
    cfg.t_end = 25.0;
    cfg.dt = 0.1;
    cfg.seed = 77;
    Ensemble ens = run_ensemble(net, cfg, 60);
    double bf = binding_fraction(ens, "GTF2", 1.0);
    // Depletion oracle: ~2% of the monomers sit in dimers at this level.
    HillDerivation der = hill_set_derivation(2);
    double expected = sequential_binding_equilibrium(599.0, der.K1, der.K2);
    CHECK(expected == doctest::Approx(0.49).epsilon(0.01));
    CHECK(bf == doctest::Approx(expected).epsilon(0.05));

    SUBCASE("TF = 0 binds nothing") {
        ReactionNetwork none = build_hill_model(2, 0);
        Ensemble e0 = run_ensemble(none, cfg, 4);
        CHECK(binding_fraction(e0, "GTF2", 1.0) == 0.0);
    }
    SUBCASE("total must be positive") { CHECK_THROWS_AS(binding_fraction(ens, "GTF2", 0.0), Error); }
}

TEST_CASE("binding_fraction far above J saturates") {
    ReactionNetwork net = build_hill_model(2, 5990);
    SsaConfig cfg;
    cfg.t_end = 25.0;
    cfg.dt = 0.1;
    cfg.seed = 78;
    Ensemble ens = run_ensemble(net, cfg, 40);
    CHECK(binding_fraction(ens, "GTF2", 1.0) >= 0.93); // F(10J) = 100/101 less depletion
}

TEST_CASE("detect_period") {
    SUBCASE("synthetic day-long sinusoid") {
        Trajectory traj;
        traj.species = {"X"};
        for (int i = 0; i <= 7200; ++i) {
            double t = static_cast<double>(i);
            traj.times.push_back(t);
            traj.rows.push_back({100.0 + 50.0 * std::sin(2.0 * M_PI * t / 1440.0)});
        }
        PeriodResult pr = detect_period(traj, "X", 120.0);
        CHECK(pr.oscillating);
        CHECK(pr.period == doctest::Approx(1440.0).epsilon(0.01));
        CHECK(pr.n_peaks == 5);
        CHECK(pr.amplitude == doctest::Approx(100.0).epsilon(0.05));
    }
    SUBCASE("constant trajectory flags no oscillation") {
        Trajectory traj;
        traj.species = {"X"};
        for (int i = 0; i <= 600; ++i) {
            traj.times.push_back(static_cast<double>(i));
            traj.rows.push_back({42.0});
        }
        PeriodResult pr = detect_period(traj, "X", 60.0);
        CHECK_FALSE(pr.oscillating);
        CHECK(pr.n_peaks < 2);
    }
}

TEST_CASE("ensemble_stats") {
    SUBCASE("identical replicates have zero std") {
        ReactionNetwork net;
        net.species = {{"A", 5}};
        SsaConfig cfg;
        cfg.t_end = 3.0;
        cfg.dt = 1.0;
        Ensemble ens = run_ensemble(net, cfg, 2); // no reactions: frozen replicates
        EnsembleStats stats = ensemble_stats(ens);
        for (const auto& row : stats.stddev)
            for (double v : row) CHECK(v == 0.0);
        for (const auto& row : stats.mean)
            for (double v : row) CHECK(v == 5.0);
    }
    SUBCASE("needs two replicates") {
        ReactionNetwork net;
        net.species = {{"A", 5}};
        SsaConfig cfg;
        cfg.t_end = 2.0;
        Ensemble ens = run_ensemble(net, cfg, 1);
        CHECK_THROWS_AS(ensemble_stats(ens), Error);
    }
}

TEST_CASE("saturation_curve is monotone for packed MM") {
    auto builder = [](double S0) {
        return build_mm_model(60.0, 300.0, 60, static_cast<Count>(S0), true);
    };
    SaturationProtocol proto;
    proto.depletion_cap = 0.05;
    proto.t_end = 1.0;
    proto.dt = 0.05;
    proto.seed = 4;
    auto points = saturation_curve(builder, {60.0, 300.0, 599.0}, 60, proto);
    REQUIRE(points.size() == 3);
    CHECK(points[0].rate < points[1].rate);
    CHECK(points[1].rate < points[2].rate);
    // half-saturation sanity: rate(Km) ~ vmax/2
    CHECK(points[1].rate == doctest::Approx(30.0).epsilon(0.12));
}

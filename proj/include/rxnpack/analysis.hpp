#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rxnpack/network.hpp"
#include "rxnpack/sim.hpp"

namespace rxn {

// Analytic Hill saturation F(X) = X^n / (X^n + J^n).
double hill_curve(double X, double n, double J);

// Equilibrium bound fraction of the sequential-binding scheme as a function
// of TOTAL regulator copies, accounting for monomers locked in dimers:
// solve TF + 2*TF^2/K1 = TF_total, then F = TF^2/(K1*K2 + TF^2).
// Large-copy approximation (the <= 2 monomers held on the gene are ignored).
double sequential_binding_equilibrium(double TF_total, double K1, double K2);

struct RateEstimate {
    double rate = 0.0; // #/min
    double se = 0.0;   // standard error of the slope
    std::size_t n_samples = 0;
};

// Least-squares slope of the product counts over the initial window where
// the substrate has depleted by at most depletion_cap * S0. Without a
// substrate the whole trajectory is the window.
RateEstimate initial_rate(const Trajectory& trajectory, const std::string& product,
                          const std::optional<std::string>& substrate = std::nullopt,
                          double depletion_cap = 0.1);

struct SaturationPoint {
    double S0 = 0.0;
    double rate = 0.0; // mean of per-replicate slopes
    double se = 0.0;   // standard error of that mean
};

struct SaturationProtocol {
    std::string product = "P";
    std::string substrate = "S";
    double depletion_cap = 0.1;
    double dt = 0.05;
    double t_end = 3.0;
    std::uint64_t seed = 0;
    std::size_t n_threads = 0;
};

// One point per S0; each point averages per-replicate initial rates over an
// n_runs ensemble built by `builder`.
std::vector<SaturationPoint> saturation_curve(const std::function<ReactionNetwork(double)>& builder,
                                              const std::vector<double>& S0_list, std::size_t n_runs,
                                              const SaturationProtocol& protocol = {});

// Replicate- and time-average of bound/total after discarding the leading
// burn_in fraction of each replicate's samples.
double binding_fraction(const Ensemble& ensemble, const std::string& bound, double total,
                        double burn_in = 0.2);

struct BindingCurvePoint {
    double TF_total = 0.0;
    double bound_fraction = 0.0;
};

struct HillFit {
    double n_prime = 0.0;
    double J_prime = 0.0;
    double rmse = 0.0;
};

// Damped least-squares fit of F(X) = X^n/(X^n+J^n) over (log n, log J) with
// multistart n in {0.5, 1, 2, 4}. Points must straddle half-saturation.
HillFit fit_hill(const std::vector<BindingCurvePoint>& points);

double rmse_vs_theoretical(const std::vector<BindingCurvePoint>& points, double n, double J);

// Response coefficient R = S(0.9)/S(0.1) by monotone interpolation of the
// points (log-abscissa linear interpolation).
double response_coefficient(const std::vector<BindingCurvePoint>& points);
// Same on an analytic monotone curve, by bisection inside [lo, hi].
double response_coefficient(const std::function<double(double)>& curve, double lo, double hi);

// n' = log(81)/log(R); exact inverse of R on ideal Hill curves.
double hill_coeff_from_R(double R);

struct FitResult {
    double n_prime = 0.0;
    double J_prime = 0.0;
    double rmse_estimated = 0.0;
    double rmse_theoretical = 0.0;
    double R = 0.0;
};

struct PeriodResult {
    bool oscillating = false;
    double period = 0.0;    // minutes, mean inter-peak interval
    double amplitude = 0.0; // mean peak-to-trough
    std::size_t n_peaks = 0;
    std::vector<double> peak_times;
    std::vector<double> peak_values;
};

// Moving-average smoothing followed by peak detection (local maxima above
// mean + 0.25*std, minimum separation = smoothing_window). Fewer than two
// peaks yields a flagged no-oscillation result, not an error.
PeriodResult detect_period(const Trajectory& trajectory, const std::string& species,
                           double smoothing_window);

struct EnsembleStats {
    std::vector<std::string> species;
    std::vector<double> times;
    std::vector<std::vector<double>> mean;   // [time][species]
    std::vector<std::vector<double>> stddev; // (n-1) denominator
};

EnsembleStats ensemble_stats(const Ensemble& ensemble);

} // namespace rxn

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rxnpack/analysis.hpp"

namespace rxn {

struct CheckLine {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ReproduceArtifact {
    std::string target;
    std::string csv;
    std::vector<CheckLine> checks;

    bool all_passed() const;
    std::string report_json() const; // checks + target, for the metadata sidecar
};

struct ReproduceOptions {
    std::uint64_t seed = 0;
    std::size_t runs = 0; // 0 = target-specific default
    std::size_t threads = 0;
    std::vector<int> sets; // table5 only; empty = all 8
};

// Exact Table-3 style constant derivation (vmax=60, Km=300, Etot=60, rho=100).
ReproduceArtifact reproduce_table3();

// Per-set binding-curve study: simulate the unpacked scheme over a ladder of
// initial TF levels, time-average the bound gene, fit (n', J'), interpolate R
// and compare errors against the ideal n=2/J=599 curve.
ReproduceArtifact reproduce_table5(const ReproduceOptions& options);

// Saturation curve: packed vs unpacked SSA initial rates vs the deterministic
// reference at S0 in {30, 60, 150, 300, 599}.
ReproduceArtifact reproduce_fig3(const ReproduceOptions& options);

// Product mean/std trajectories for S0 in {30, 60, 599}, packed and unpacked.
ReproduceArtifact reproduce_fig4(const ReproduceOptions& options);

// Clock noise comparison: CP peak-height variability at alpha = 0.000167 vs
// 0.0000167 over replicate ensembles.
ReproduceArtifact reproduce_fig9_noise(const ReproduceOptions& options);

ReproduceArtifact reproduce(const std::string& target, const ReproduceOptions& options);

// Per-level simulation protocol of the Table-5 study, shared with the
// acceptance suite: returns time-averaged bound fractions per TF level.
std::vector<BindingCurvePoint> hill_binding_curve(int set_id, const std::vector<double>& levels,
                                                  std::size_t runs, std::uint64_t seed,
                                                  std::size_t threads);

// Log-spaced TF-total levels straddling the set's expected half-saturation.
std::vector<double> hill_levels(int set_id, std::size_t n_levels = 12);

} // namespace rxn

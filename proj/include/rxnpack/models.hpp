#pragma once

#include <string>
#include <vector>

#include "rxnpack/modeldsl.hpp"
#include "rxnpack/network.hpp"
#include "rxnpack/templates.hpp"

namespace rxn {

// --- Michaelis-Menten benchmark (enzymatic conversion S -> P) ------------

ReactionNetwork build_mm_model(double vmax, double Km, Count Etot, Count S0, bool packed,
                               double rho = 100.0);

inline ReactionNetwork build_mm_model_default(bool packed) {
    return build_mm_model(60.0, 300.0, 60, 599, packed);
}

// --- Hill transcription benchmark ----------------------------------------

// The eight elementary-constant sets of the Hill study. k1 and k3 are stored
// as their concentration-unit multipliers (the stochastic constants are
// k1_det*alpha and k3_det*alpha); k2 and k4 are plain 1/min.
// Set 6 corrects an inconsistent k1 so that (k2*k4)/(k1*k3) = (1/alpha)^2
// holds for every set, keeping each pair of sets with equal equilibrium
// constants (1&4, 2&3, 5&7, 6&8) intact.
struct HillSet {
    int id = 0;
    double k1_det = 0.0, k2 = 0.0, k3_det = 0.0, k4 = 0.0;
};

constexpr double kHillAlpha = 0.00167;

const std::vector<HillSet>& hill_sets();

// derive_hill_params inputs reproducing a set's constants exactly.
HillDerivation hill_set_derivation(int set_id, double alpha = kHillAlpha);

// set_id 0 or packed=true: single hill(kms=1, J=599, n=2) transcription.
// set_id 1..8: the five-reaction sequential-binding scheme with that set's
// constants.
ReactionNetwork build_hill_model(int set_id, Count TF0 = 599, bool packed = false);

// --- Circadian clock ------------------------------------------------------

// All values are molecule-count units at the given alpha. Rescaling alpha
// scales counts and count-rates by alpha_ref/alpha and bimolecular constants
// the other way, leaving the deterministic dynamics invariant.
struct ClockParams {
    double alpha = 0.000167;
    Count G_tot = 1;
    Count TF_tot = 0;
    double kms = 0.0, J = 0.0; // transcription hill(kms, J, 2)
    double kt = 0.0;           // translation
    double kd_f = 0.0, kd_b = 0.0; // 2CP <-> CP2
    double ki_f = 0.0, ki_b = 0.0; // CP2 + TF <-> C
    double vmax_M = 0.0, Km_M = 0.0;
    double vmax_CP = 0.0, Km_CP = 0.0;
    double vmax_C = 0.0, Km_C = 0.0;
    double kbg_M = 0.0, kbg_CP = 0.0, kbg_CP2 = 0.0, kbg_C = 0.0;
    // unpacking knobs
    double hill_K1 = 0.0, hill_s1 = 0.0, hill_s2 = 0.0;
    Count etot_M = 1, etot_CP = 1, etot_C = 1;
    double rho = 20.0;
};

// Calibrated defaults (tools/clock_calibrate tunes and rescales these so the
// packed ODE period is 1440 min at any alpha).
ClockParams default_clock_params(double alpha = 0.000167);

ReactionNetwork build_clock_model(const ClockParams& params, bool packed);

// --- Built-in registry and .rxn corpus ------------------------------------

std::vector<std::string> builtin_model_names();

// Programmatic constructor path (does not touch the DSL).
ReactionNetwork build_builtin(const std::string& name);

// Document path: packed skeleton plus unpack directives; serialize_model of
// this document is the canonical models/<name>.rxn file.
ModelDocument builtin_document(const std::string& name);

// Structural agreement up to a relative tolerance on the constants; used by
// the corpus golden test.
bool networks_equivalent(const ReactionNetwork& a, const ReactionNetwork& b, double rel_tol,
                         std::string* why = nullptr);

} // namespace rxn

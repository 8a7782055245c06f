#pragma once

#include <string>

#include "rxnpack/analysis.hpp"
#include "rxnpack/sim.hpp"

namespace rxn {

// Shortest round-trip decimal rendering (deterministic across runs).
std::string format_double(double v);

std::string read_file(const std::string& path);

// Writes via a temp file in the same directory plus rename.
void atomic_write_file(const std::string& path, const std::string& content);

// Header `time,<species...>`, one row per sample. Integer-valued entries are
// printed without a decimal point.
std::string trajectory_csv(const Trajectory& trajectory);

// Header `time,<sp>_mean,<sp>_std,...`.
std::string ensemble_summary_csv(const EnsembleStats& stats);

} // namespace rxn

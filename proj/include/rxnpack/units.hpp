#pragma once

namespace rxn {

constexpr double kAvogadro = 6.02214076e23;

// Conversion factor between micromolar concentrations and molecule counts
// for a well-mixed volume V (liters): alpha = 1/(N_A * 1e-6 * V), so that
// count = concentration / alpha.
double compute_alpha(double volume_liters);

enum class UnitRole {
    Concentration,
    UnimolecularRate,
    BimolecularRate,
    ZerothOrderRate,
};

enum class ConvertDirection { ToCounts, ToConcentration };

// Converts a value between concentration units and molecule-count units.
//   to_counts:  concentration -> value/alpha, bimolecular -> value*alpha,
//               unimolecular -> value, zeroth-order -> value/alpha.
//   to_concentration inverts each role.
double convert_units(double value, UnitRole role, double alpha, ConvertDirection direction);

} // namespace rxn

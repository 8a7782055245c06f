#include "rxnpack/units.hpp"

#include "rxnpack/errors.hpp"

namespace rxn {

double compute_alpha(double volume_liters) {
    if (!(volume_liters > 0.0))
        throw Error(ErrorKind::Domain, "volume must be positive");
    return 1.0 / (kAvogadro * 1e-6 * volume_liters);
}

double convert_units(double value, UnitRole role, double alpha, ConvertDirection direction) {
    if (!(alpha > 0.0)) throw Error(ErrorKind::Domain, "alpha must be positive");
    const bool to_counts = direction == ConvertDirection::ToCounts;
    switch (role) {
    case UnitRole::Concentration:
    case UnitRole::ZerothOrderRate:
        return to_counts ? value / alpha : value * alpha;
    case UnitRole::BimolecularRate:
        return to_counts ? value * alpha : value / alpha;
    case UnitRole::UnimolecularRate:
        return value;
    }
    throw Error(ErrorKind::Domain, "unknown unit role");
}

} // namespace rxn

#pragma once

#include <string>

namespace dacspec {

enum class EnergyUnit { eV, meV, THz, nm };

// Conversion constants (fixed, CODATA).
inline constexpr double kHcEvNm = 1239.84198;       // hc in eV*nm
inline constexpr double kPlanckMevPerThz = 4.135667696;  // h in meV/THz

struct EnergyQuantity {
    double value = 0.0;
    EnergyUnit unit = EnergyUnit::eV;
};

// Physically equivalent quantity in target_unit. Throws Error(out_of_range)
// for a non-positive wavelength on either side of the conversion.
EnergyQuantity convert_energy(const EnergyQuantity& q, EnergyUnit target_unit);

double to_ev(const EnergyQuantity& q);

const char* unit_name(EnergyUnit u);
EnergyUnit parse_unit(const std::string& name);

}  // namespace dacspec

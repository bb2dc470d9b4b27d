#include "dacspec/units.hpp"

#include <cmath>

#include "dacspec/error.hpp"

namespace dacspec {

double to_ev(const EnergyQuantity& q) {
    if (!std::isfinite(q.value))
        throw Error(errc::invalid_argument, "non-finite energy value");
    switch (q.unit) {
        case EnergyUnit::eV: return q.value;
        case EnergyUnit::meV: return q.value / 1e3;
        case EnergyUnit::THz: return q.value * kPlanckMevPerThz / 1e3;
        case EnergyUnit::nm:
            if (q.value <= 0.0)
                throw Error(errc::out_of_range, "non-positive wavelength");
            return kHcEvNm / q.value;
    }
    throw Error(errc::invalid_argument, "unknown unit");
}

EnergyQuantity convert_energy(const EnergyQuantity& q, EnergyUnit target_unit) {
    const double ev = to_ev(q);
    switch (target_unit) {
        case EnergyUnit::eV: return {ev, EnergyUnit::eV};
        case EnergyUnit::meV: return {ev * 1e3, EnergyUnit::meV};
        case EnergyUnit::THz: return {ev * 1e3 / kPlanckMevPerThz, EnergyUnit::THz};
        case EnergyUnit::nm:
            if (ev <= 0.0)
                throw Error(errc::out_of_range, "non-positive energy has no wavelength");
            return {kHcEvNm / ev, EnergyUnit::nm};
    }
    throw Error(errc::invalid_argument, "unknown target unit");
}

const char* unit_name(EnergyUnit u) {
    switch (u) {
        case EnergyUnit::eV: return "eV";
        case EnergyUnit::meV: return "meV";
        case EnergyUnit::THz: return "THz";
        case EnergyUnit::nm: return "nm";
    }
    return "?";
}

EnergyUnit parse_unit(const std::string& name) {
    if (name == "eV") return EnergyUnit::eV;
    if (name == "meV") return EnergyUnit::meV;
    if (name == "THz") return EnergyUnit::THz;
    if (name == "nm") return EnergyUnit::nm;
    throw Error(errc::invalid_argument, "unknown energy unit '" + name + "'");
}

}  // namespace dacspec

#include "dacspec/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "dacspec/error.hpp"
#include "dacspec/units.hpp"

namespace dacspec {

const char* axis_unit_name(AxisUnit u) {
    switch (u) {
        case AxisUnit::nanometer: return "nm";
        case AxisUnit::electronvolt: return "eV";
        case AxisUnit::wavenumber_per_cm: return "cm-1";
    }
    return "?";
}

AxisUnit parse_axis_unit(const std::string& name) {
    if (name == "nm" || name == "nanometer") return AxisUnit::nanometer;
    if (name == "eV" || name == "electronvolt") return AxisUnit::electronvolt;
    if (name == "cm-1" || name == "wavenumber_per_cm") return AxisUnit::wavenumber_per_cm;
    throw Error(errc::parse_error, "unknown axis unit '" + name + "'");
}

void validate(const Spectrum& s) {
    if (s.axis.size() != s.intensity.size())
        throw Error(errc::invalid_argument, "axis/intensity length mismatch");
    if (s.axis.size() < 8)
        throw Error(errc::invalid_argument, "spectrum needs at least 8 points");
    for (size_t i = 0; i < s.axis.size(); ++i) {
        if (!std::isfinite(s.axis[i]) || !std::isfinite(s.intensity[i]))
            throw Error(errc::invalid_argument, "non-finite spectrum sample");
        if (s.intensity[i] < 0.0)
            throw Error(errc::invalid_argument, "negative intensity");
        if (i > 0 && !(s.axis[i] > s.axis[i - 1]))
            throw Error(errc::invalid_argument, "axis not strictly increasing");
    }
}

Spectrum resample_to_energy(const Spectrum& s) {
    validate(s);
    if (s.axis_unit == AxisUnit::electronvolt) return s;
    if (s.axis_unit == AxisUnit::wavenumber_per_cm)
        throw Error(errc::invalid_argument, "wavenumber traces are not resampled to eV");

    Spectrum out;
    out.axis_unit = AxisUnit::electronvolt;
    out.meta = s.meta;
    const size_t n = s.size();
    out.axis.resize(n);
    out.intensity.resize(n);
    // E = hc/lambda reverses the ordering
    for (size_t i = 0; i < n; ++i) {
        const size_t j = n - 1 - i;
        if (s.axis[j] <= 0.0)
            throw Error(errc::out_of_range, "non-positive wavelength");
        out.axis[i] = kHcEvNm / s.axis[j];
        out.intensity[i] = s.intensity[j];
    }
    validate(out);
    return out;
}

}  // namespace dacspec

#pragma once

#include <map>
#include <string>
#include <vector>

namespace dacspec {

enum class AxisUnit { nanometer, electronvolt, wavenumber_per_cm };

const char* axis_unit_name(AxisUnit u);
AxisUnit parse_axis_unit(const std::string& name);

/// A sampled intensity-vs-axis trace. Axis strictly increasing, at least
/// 8 points, intensities finite and non-negative.
struct Spectrum {
    AxisUnit axis_unit = AxisUnit::electronvolt;
    std::vector<double> axis;
    std::vector<double> intensity;
    std::map<std::string, std::string> meta;

    size_t size() const { return axis.size(); }
};

// Throws Error(invalid_argument) when an invariant is broken.
void validate(const Spectrum& s);

// Wavelength axis -> energy axis (eV), point intensities carried over
// unchanged; an eV spectrum is returned as-is. Raman (wavenumber) traces
// are refused.
Spectrum resample_to_energy(const Spectrum& s);

}  // namespace dacspec

#pragma once

#include <string>

#include "dacspec/spectrum.hpp"

namespace dacspec {

// Spectrum CSV: '#'-prefixed key=value header lines (mandatory axis_unit),
// then one `axis,intensity` row per sample. Values are written at 17
// significant digits so a read/write round trip is bit-exact.
Spectrum read_spectrum(const std::string& path);
void write_spectrum(const std::string& path, const Spectrum& s);

}  // namespace dacspec

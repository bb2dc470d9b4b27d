#pragma once

#include <cstdint>
#include <vector>

#include "dacspec/lorentzian.hpp"
#include "dacspec/spectrum.hpp"

namespace dacspec {

struct GridSpec {
    double lo = 0.0;
    double hi = 0.0;
    int n = 0;
};

/// Deterministic synthetic spectrum on a uniform eV grid:
/// baseline + sum of Lorentzians + Gaussian noise from a counter-based
/// generator, so a given seed yields bit-identical output on every call
/// and platform. Intensities are clamped at zero.
Spectrum synth_spectrum(const std::vector<LorentzianParams>& peaks, double baseline,
                        double noise_sigma, std::uint64_t seed, const GridSpec& grid);

// One standard-normal draw per (seed, index); exposed for tests.
double gaussian_noise(std::uint64_t seed, std::uint64_t index);

}  // namespace dacspec

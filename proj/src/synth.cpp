#include "dacspec/synth.hpp"

#include <algorithm>
#include <cmath>

#include "dacspec/error.hpp"

namespace dacspec {

namespace {

// splitmix64: standard 64-bit bit-mixing finalizer
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double uniform01(std::uint64_t bits) {
    // 53 bits -> (0,1]; never exactly 0 so log() below is safe
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace

double gaussian_noise(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t h = mix64(seed ^ mix64(index));
    const double u1 = uniform01(h);
    const double u2 = uniform01(mix64(h));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Spectrum synth_spectrum(const std::vector<LorentzianParams>& peaks, double baseline,
                        double noise_sigma, std::uint64_t seed, const GridSpec& grid) {
    if (!(grid.lo < grid.hi)) throw Error(errc::invalid_argument, "grid lo must be < hi");
    if (grid.n < 8) throw Error(errc::invalid_argument, "grid needs at least 8 points");
    if (noise_sigma < 0.0) throw Error(errc::invalid_argument, "negative noise sigma");
    for (const auto& p : peaks) validate(p);

    Spectrum s;
    s.axis_unit = AxisUnit::electronvolt;
    s.axis.resize(grid.n);
    s.intensity.resize(grid.n);
    const double step = (grid.hi - grid.lo) / (grid.n - 1);
    for (int i = 0; i < grid.n; ++i) {
        const double x = grid.lo + i * step;
        double y = multi_lorentzian(peaks, baseline, x);
        if (noise_sigma > 0.0) y += noise_sigma * gaussian_noise(seed, static_cast<std::uint64_t>(i));
        s.axis[i] = x;
        s.intensity[i] = std::max(0.0, y);
    }
    validate(s);
    return s;
}

}  // namespace dacspec

#pragma once

#include <cstddef>
#include <vector>

namespace dacspec {

/// One Lorentzian line: peak height `amplitude` above the baseline at
/// `center`, full width at half maximum `fwhm` (both in eV on our axes).
struct LorentzianParams {
    double center = 0.0;
    double fwhm = 0.0;
    double amplitude = 0.0;
};

void validate(const LorentzianParams& p);

// baseline + amplitude * (G/2)^2 / ((x-center)^2 + (G/2)^2)
double lorentzian_eval(const LorentzianParams& p, double baseline, double x);

double multi_lorentzian(const std::vector<LorentzianParams>& peaks, double baseline,
                        double x);

// Gradient of multi_lorentzian w.r.t. the natural parameter vector
// [baseline, c_1, fwhm_1, A_1, c_2, fwhm_2, A_2, ...]; out must have
// size 1 + 3*peaks.size().
void model_gradient(const std::vector<LorentzianParams>& peaks, double baseline,
                    double x, std::vector<double>& out);

}  // namespace dacspec

#include "dacspec/lorentzian.hpp"

#include <cmath>

#include "dacspec/error.hpp"

namespace dacspec {

void validate(const LorentzianParams& p) {
    if (!std::isfinite(p.center) || !std::isfinite(p.fwhm) || !std::isfinite(p.amplitude))
        throw Error(errc::invalid_argument, "non-finite Lorentzian parameter");
    if (p.fwhm <= 0.0) throw Error(errc::invalid_argument, "fwhm must be > 0");
    if (p.amplitude <= 0.0) throw Error(errc::invalid_argument, "amplitude must be > 0");
}

double lorentzian_eval(const LorentzianParams& p, double baseline, double x) {
    const double w = 0.5 * p.fwhm;
    const double d = x - p.center;
    return baseline + p.amplitude * w * w / (d * d + w * w);
}

double multi_lorentzian(const std::vector<LorentzianParams>& peaks, double baseline,
                        double x) {
    double y = baseline;
    for (const auto& p : peaks) {
        const double w = 0.5 * p.fwhm;
        const double d = x - p.center;
        y += p.amplitude * w * w / (d * d + w * w);
    }
    return y;
}

void model_gradient(const std::vector<LorentzianParams>& peaks, double baseline,
                    double x, std::vector<double>& out) {
    (void)baseline;
    out.assign(1 + 3 * peaks.size(), 0.0);
    out[0] = 1.0;  // d/d baseline
    for (size_t k = 0; k < peaks.size(); ++k) {
        const auto& p = peaks[k];
        const double w = 0.5 * p.fwhm;
        const double d = x - p.center;
        const double den = d * d + w * w;
        const double L = w * w / den;
        out[1 + 3 * k + 0] = p.amplitude * 2.0 * d * w * w / (den * den);   // d/d center
        out[1 + 3 * k + 1] = p.amplitude * w * d * d / (den * den);        // d/d fwhm
        out[1 + 3 * k + 2] = L;                                            // d/d amplitude
    }
}

}  // namespace dacspec

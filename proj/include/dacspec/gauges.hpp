#pragma once

#include <string>
#include <vector>

#include "dacspec/calib.hpp"

namespace dacspec::gauges {

enum class GaugeId { ruby, raman_edge, zpl_siv, zpl_gev, zpl_snv, combined };

const char* gauge_name(GaugeId g);

struct PressureEstimate {
    double value_gpa = 0.0;
    double sigma_gpa = 0.0;
    GaugeId gauge = GaugeId::ruby;
    double feature = 0.0;       // measured spectral feature (0 for combined)
    std::string feature_unit;   // "nm", "cm-1", "eV", "" for combined
};

/// Configurable coefficients of the ruby and Raman-edge pressure scales.
/// Defaults are the current practical scales; revised coefficient sets can
/// be loaded from file so operations never hard-wire them.
struct ScaleCoefficients {
    struct Ruby {
        double lambda0_nm = 694.25;
        double a_gpa = 1870.0;
        double b = 5.63;
    } ruby;
    struct Raman {
        double nu0_cm1 = 1334.0;
        double k0_gpa = 547.0;
        double k0_prime = 3.75;
    } raman;
};

void validate(const ScaleCoefficients& c);

ScaleCoefficients default_scale_coefficients();
ScaleCoefficients read_scale_coefficients(const std::string& path);
void write_scale_coefficients(const std::string& path, const ScaleCoefficients& c);

// P = A*d*(1 + B*d), d = (lambda - lambda0)/lambda0. Sigma floor 1 GPa;
// a feature uncertainty (nm) is propagated and added in quadrature.
PressureEstimate ruby_pressure(double lambda_nm, const ScaleCoefficients& coeffs,
                               double lambda_sigma_nm = 0.0);

// P = K0*r*(1 + (K0'-1)/2 * r), r = (nu - nu0)/nu0. Sigma floor 8 GPa.
PressureEstimate raman_edge_pressure(double nu_cm1, const ScaleCoefficients& coeffs,
                                     double nu_sigma_cm1 = 0.0);

// Inverts the monotone calibration E_ZPL(P); refuses extrapolation outside
// the calibrated energy range. sigma_P = sigma_E / |dE/dP| with the
// calibration-point uncertainty and any measured energy sigma combined in
// quadrature.
PressureEstimate zpl_pressure(double energy_ev, const calib::GaugeCalibration& cal,
                              double energy_sigma_ev = 0.0);

// Inverse-variance weighted mean; requires every sigma > 0.
PressureEstimate combine_gauges(const std::vector<PressureEstimate>& estimates);

}  // namespace dacspec::gauges

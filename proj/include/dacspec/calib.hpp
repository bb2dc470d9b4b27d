#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dacspec/pchip.hpp"
#include "dacspec/stats.hpp"

namespace dacspec::calib {

enum class Species { SiV, GeV, SnV };

const char* species_name(Species s);
Species parse_species(const std::string& name);

// Zero-pressure ZPL energies measured for each center (eV); these anchor
// the theory-curve alignment.
double measured_zpl0(Species s);

struct CalibrationPoint {
    double pressure = 0.0;        // GPa
    double pressure_sigma = 0.0;  // GPa
    double energy = 0.0;          // eV
    double energy_sigma = 0.0;    // eV
};

/// Monotone E_ZPL(P) curve through measured points; invertible by
/// construction (energies must increase with pressure or the constructor
/// refuses).
struct GaugeCalibration {
    Species species = Species::SiV;
    std::vector<CalibrationPoint> points;  // sorted by pressure
    MonotoneCubic interpolant;
    double p_min = 0.0, p_max = 0.0;     // GPa
    double zpl0 = 0.0;                   // eV; E(0) or lowest-node energy
    bool zpl0_extrapolated = false;      // true when 0 GPa is below the range
    std::optional<double> mask_below;    // GPa threshold applied at construction
};

// Monotone piecewise-cubic through >= 3 distinct-pressure points; points
// below mask_below (if given) are dropped first.
GaugeCalibration build_calibration(Species species, std::vector<CalibrationPoint> points,
                                   std::optional<double> mask_below = std::nullopt);

// Interpolant value at p; refuses to extrapolate outside [p_min, p_max].
double eval_calibration(const GaugeCalibration& cal, double p);

// Calibration-point energy uncertainty at p (linear interpolation of the
// neighboring energy_sigma values).
double eval_energy_sigma(const GaugeCalibration& cal, double p);

struct SlopeFit {
    double slope_mev_per_gpa = 0.0;
    double stderr_mev_per_gpa = 0.0;
    int n = 0;
};

// Ordinary least squares on the points inside the closed pressure window.
SlopeFit linear_slope(const std::vector<CalibrationPoint>& points,
                      std::pair<double, double> window);

// Shift every theory energy by (zpl0_exp - E_theory(0)); shape preserved.
std::vector<std::pair<double, double>> align_theory(
    const std::vector<std::pair<double, double>>& theory, double zpl0_exp);

/// Tabulated single-particle level energies vs pressure.
struct LevelTrace {
    Species species = Species::SiV;
    std::vector<double> pressure_gpa;
    std::vector<double> eps_eu;
    std::vector<double> eps_eg;
    std::vector<double> eps_vbm;
    std::optional<std::vector<double>> eps_cbm;
};

void validate(const LevelTrace& t);

enum class Level { eu, eg, cbm };

// d_eps_i(p) = [eps_i(p) - eps_vbm(p)] - [eps_i(0) - eps_vbm(0)]
std::vector<std::pair<double, double>> vbm_referenced_shift(const LevelTrace& trace,
                                                            Level level);

// [eps_eg(p) - eps_eu(p)] - [eps_eg(0) - eps_eu(0)]
std::vector<std::pair<double, double>> ks_zpl_shift(const LevelTrace& trace);

// --- persistence ---------------------------------------------------------

// Calibration document: header keys species, zpl0_ev, range_gpa,
// mask_below_gpa (optional), then one `P_gpa, P_sigma, E_ev, E_sigma` row
// per point at 17 significant digits.
void write_calibration(const std::string& path, const GaugeCalibration& cal);
GaugeCalibration read_calibration(const std::string& path);

// Dataset CSV: header `p_gpa,p_sigma,e_ev,e_sigma` (or `p_gpa,e_ev`).
std::vector<CalibrationPoint> read_calibration_points(const std::string& path);

// Two-column CSV with header `p_gpa,e_ev` (theory ZPL tables).
std::vector<std::pair<double, double>> read_pressure_energy_table(const std::string& path);

// Level-trace CSV: header `p_gpa,eps_eu_ev,eps_eg_ev,eps_vbm_ev[,eps_cbm_ev]`.
LevelTrace read_level_trace(const std::string& path, Species species);

}  // namespace dacspec::calib

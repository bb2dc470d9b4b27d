#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dacspec/calib.hpp"
#include "dacspec/eos.hpp"
#include "dacspec/spectrum.hpp"

namespace dacspec::exports {

/// Plot-ready tables mirroring the standard displays: calibration curves
/// vs pressure with the lattice-ratio upper axis (fig3), Kohn-Sham shift
/// transforms (fig4), and a waterfall of raw spectra stacked by pressure.

struct Fig3Inputs {
    std::vector<calib::GaugeCalibration> calibrations;
    // raw (unaligned) theory tables; alignment to the measured
    // zero-pressure ZPL happens here
    std::vector<std::pair<calib::Species, std::vector<std::pair<double, double>>>> theory;
    eos::EosParams eos_params;
    double p_step = 2.0;  // GPa grid for the export
};

// CSV columns: p_gpa, x_ratio, e_<species>_ev per calibration,
// e_theory_<species>_ev per theory table. Cells outside a series' range
// stay empty.
void export_fig3(const std::string& csv_path, const std::optional<std::string>& svg_path,
                 const Fig3Inputs& in);

// CSV columns per trace: dzpl_ks_<sp>_ev plus VBM-referenced level shifts
// deps_eu_<sp>_ev, deps_eg_<sp>_ev and deps_cbm_<sp>_ev when present.
void export_fig4(const std::string& csv_path, const std::optional<std::string>& svg_path,
                 const std::vector<calib::LevelTrace>& traces);

// Waterfall of spectra ordered by their pressure: per input, columns
// e_<i>_ev and i_<i> where the intensity is peak-normalized to
// `height_gpa` and offset vertically by the spectrum pressure.
struct WaterfallInputs {
    std::vector<Spectrum> spectra;          // eV axis
    std::vector<double> pressures_gpa;      // one per spectrum
    double height_gpa = 8.0;                // normalized trace height
};

void export_waterfall(const std::string& csv_path, const std::optional<std::string>& svg_path,
                      const WaterfallInputs& in);

}  // namespace dacspec::exports

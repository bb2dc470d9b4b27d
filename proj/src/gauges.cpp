#include "dacspec/gauges.hpp"

#include <cmath>

#include "dacspec/brent.hpp"
#include "dacspec/error.hpp"
#include "dacspec/kvdoc.hpp"

namespace dacspec::gauges {

namespace {
constexpr double kRubySigmaFloorGpa = 1.0;
constexpr double kRamanSigmaFloorGpa = 8.0;
}  // namespace

const char* gauge_name(GaugeId g) {
    switch (g) {
        case GaugeId::ruby: return "ruby";
        case GaugeId::raman_edge: return "raman_edge";
        case GaugeId::zpl_siv: return "zpl_siv";
        case GaugeId::zpl_gev: return "zpl_gev";
        case GaugeId::zpl_snv: return "zpl_snv";
        case GaugeId::combined: return "combined";
    }
    return "?";
}

void validate(const ScaleCoefficients& c) {
    if (!(c.ruby.lambda0_nm > 0.0) || !(c.ruby.a_gpa > 0.0))
        throw Error(errc::invalid_argument, "ruby scale coefficients must be positive");
    if (!(c.raman.nu0_cm1 > 0.0) || !(c.raman.k0_gpa > 0.0))
        throw Error(errc::invalid_argument, "raman scale coefficients must be positive");
}

ScaleCoefficients default_scale_coefficients() { return {}; }

ScaleCoefficients read_scale_coefficients(const std::string& path) {
    const KeyValueDoc doc = read_kvdoc(path);
    ScaleCoefficients c;
    c.ruby.lambda0_nm = doc.require_number("ruby.lambda0_nm");
    c.ruby.a_gpa = doc.require_number("ruby.A_gpa");
    c.ruby.b = doc.require_number("ruby.B");
    c.raman.nu0_cm1 = doc.require_number("raman.nu0_cm1");
    c.raman.k0_gpa = doc.require_number("raman.K0_gpa");
    c.raman.k0_prime = doc.require_number("raman.K0_prime");
    validate(c);
    return c;
}

void write_scale_coefficients(const std::string& path, const ScaleCoefficients& c) {
    validate(c);
    KeyValueDoc doc;
    doc.set_number("ruby.lambda0_nm", c.ruby.lambda0_nm);
    doc.set_number("ruby.A_gpa", c.ruby.a_gpa);
    doc.set_number("ruby.B", c.ruby.b);
    doc.set_number("raman.nu0_cm1", c.raman.nu0_cm1);
    doc.set_number("raman.K0_gpa", c.raman.k0_gpa);
    doc.set_number("raman.K0_prime", c.raman.k0_prime);
    write_kvdoc(path, doc);
}

PressureEstimate ruby_pressure(double lambda_nm, const ScaleCoefficients& coeffs,
                               double lambda_sigma_nm) {
    validate(coeffs);
    const auto& r = coeffs.ruby;
    if (!(lambda_nm >= r.lambda0_nm - 1.0 && lambda_nm <= r.lambda0_nm + 40.0))
        throw Error(errc::out_of_range, "ruby line outside the scale's wavelength window");
    const double d = (lambda_nm - r.lambda0_nm) / r.lambda0_nm;
    const double p = r.a_gpa * d * (1.0 + r.b * d);
    if (p < -0.5)
        throw Error(errc::out_of_range, "ruby scale gives unphysical negative pressure");

    double sigma = kRubySigmaFloorGpa;
    if (lambda_sigma_nm > 0.0) {
        const double dpdl = r.a_gpa * (1.0 + 2.0 * r.b * d) / r.lambda0_nm;
        sigma = std::hypot(sigma, dpdl * lambda_sigma_nm);
    }
    return {p, sigma, GaugeId::ruby, lambda_nm, "nm"};
}

PressureEstimate raman_edge_pressure(double nu_cm1, const ScaleCoefficients& coeffs,
                                     double nu_sigma_cm1) {
    validate(coeffs);
    const auto& rm = coeffs.raman;
    if (!(nu_cm1 >= rm.nu0_cm1 - 5.0))
        throw Error(errc::out_of_range, "Raman edge below the unstressed mode frequency");
    const double rho = (nu_cm1 - rm.nu0_cm1) / rm.nu0_cm1;
    const double p = rm.k0_gpa * rho * (1.0 + 0.5 * (rm.k0_prime - 1.0) * rho);

    double sigma = kRamanSigmaFloorGpa;
    if (nu_sigma_cm1 > 0.0) {
        const double dpdnu = rm.k0_gpa * (1.0 + (rm.k0_prime - 1.0) * rho) / rm.nu0_cm1;
        sigma = std::hypot(sigma, dpdnu * nu_sigma_cm1);
    }
    return {p, sigma, GaugeId::raman_edge, nu_cm1, "cm-1"};
}

PressureEstimate zpl_pressure(double energy_ev, const calib::GaugeCalibration& cal,
                              double energy_sigma_ev) {
    const double e_lo = calib::eval_calibration(cal, cal.p_min);
    const double e_hi = calib::eval_calibration(cal, cal.p_max);
    if (!(energy_ev >= e_lo && energy_ev <= e_hi))
        throw Error(errc::extrapolation_refused,
                    "ZPL energy outside the calibrated range [" + format_g17(e_lo) + ", " +
                        format_g17(e_hi) + "] eV");

    auto f = [&](double p) { return calib::eval_calibration(cal, p) - energy_ev; };
    const double p = brent_root(f, cal.p_min, cal.p_max, 1e-12, 1e-14);

    const double slope = cal.interpolant.derivative(p);  // eV/GPa, > 0 by construction
    double sigma_e = calib::eval_energy_sigma(cal, p);
    if (energy_sigma_ev > 0.0) sigma_e = std::hypot(sigma_e, energy_sigma_ev);
    const double sigma_p = (slope > 0.0) ? sigma_e / slope : 0.0;

    GaugeId id = GaugeId::zpl_siv;
    switch (cal.species) {
        case calib::Species::SiV: id = GaugeId::zpl_siv; break;
        case calib::Species::GeV: id = GaugeId::zpl_gev; break;
        case calib::Species::SnV: id = GaugeId::zpl_snv; break;
    }
    return {p, sigma_p, id, energy_ev, "eV"};
}

PressureEstimate combine_gauges(const std::vector<PressureEstimate>& estimates) {
    if (estimates.empty())
        throw Error(errc::invalid_argument, "combine_gauges: empty input");
    if (estimates.size() == 1) return estimates.front();
    double wsum = 0.0, wx = 0.0;
    for (const auto& e : estimates) {
        if (!(e.sigma_gpa > 0.0))
            throw Error(errc::invalid_argument, "combine_gauges needs sigma > 0");
        const double w = 1.0 / (e.sigma_gpa * e.sigma_gpa);
        wsum += w;
        wx += w * e.value_gpa;
    }
    PressureEstimate out;
    out.value_gpa = wx / wsum;
    out.sigma_gpa = 1.0 / std::sqrt(wsum);
    out.gauge = GaugeId::combined;
    out.feature = 0.0;
    out.feature_unit.clear();
    return out;
}

}  // namespace dacspec::gauges

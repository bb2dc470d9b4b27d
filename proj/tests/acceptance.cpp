// Acceptance suite: one pass/fail line per criterion, nonzero exit when
// anything fails. Tolerances are pinned here, not configurable.

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dacspec/calib.hpp"
#include "dacspec/eos.hpp"
#include "dacspec/gauges.hpp"
#include "dacspec/kvdoc.hpp"
#include "dacspec/peakfit.hpp"
#include "dacspec/stats.hpp"
#include "dacspec/synth.hpp"
#include "dacspec/units.hpp"
#include "helpers.hpp"

using namespace dacspec;

namespace {

int checks_failed = 0;

void expect(bool ok, const std::string& what) {
    if (!ok) {
        ++checks_failed;
        std::printf("      FAILED: %s\n", what.c_str());
    }
}

void expect_near(double got, double want, double tol, const std::string& what) {
    if (!(std::fabs(got - want) <= tol)) {
        ++checks_failed;
        std::printf("      FAILED: %s (got %.9g, want %.9g +- %.3g)\n", what.c_str(), got,
                    want, tol);
    }
}

calib::GaugeCalibration bundled_calibration(calib::Species sp, const std::string& file) {
    return calib::build_calibration(sp, calib::read_calibration_points(testutil::data_file(file)));
}

// ---- criterion bodies -----------------------------------------------------

void c1_unit_conversion() {
    const double mev17 = convert_energy({17.0, EnergyUnit::THz}, EnergyUnit::meV).value;
    const double mev78 = convert_energy({78.0, EnergyUnit::THz}, EnergyUnit::meV).value;
    expect_near(mev17, 70.31, 0.5, "17 THz in meV");
    expect_near(mev78, 322.6, 0.5, "78 THz in meV");
}

void c2_table1_slopes() {
    const auto siv = calib::read_calibration_points(testutil::data_file("siv_zpl_vs_pressure.csv"));
    const auto gev = calib::read_calibration_points(testutil::data_file("gev_zpl_vs_pressure.csv"));
    expect_near(calib::linear_slope(siv, {0.0, 20.0}).slope_mev_per_gpa, 1.0, 0.2,
                "SiV OLS slope on [0,20] GPa");
    expect_near(calib::linear_slope(gev, {20.0, 40.0}).slope_mev_per_gpa, 2.7, 0.3,
                "GeV OLS slope on [20,40] GPa");
}

void c3_total_shifts() {
    const auto siv = bundled_calibration(calib::Species::SiV, "siv_zpl_vs_pressure.csv");
    const auto gev = bundled_calibration(calib::Species::GeV, "gev_zpl_vs_pressure.csv");
    const double siv_total =
        (calib::eval_calibration(siv, 180.0) - calib::eval_calibration(siv, siv.p_min)) * 1e3;
    const double gev_total =
        (calib::eval_calibration(gev, 168.0) - calib::eval_calibration(gev, gev.p_min)) * 1e3;
    expect_near(siv_total, 70.0, 10.0, "SiV total shift E(180)-E(lowest), meV");
    expect_near(gev_total, 320.0, 30.0, "GeV total shift E(168)-E(lowest), meV");
    const double ratio = gev_total / siv_total;
    expect(ratio >= 4.0 && ratio <= 5.2, "total-shift ratio in [4.0, 5.2]");
}

void c4_zero_pressure_zpl() {
    const auto siv = bundled_calibration(calib::Species::SiV, "siv_zpl_vs_pressure.csv");
    const auto gev = bundled_calibration(calib::Species::GeV, "gev_zpl_vs_pressure.csv");
    expect_near(siv.zpl0, 1.68, 0.01, "SiV zpl0");
    expect_near(gev.zpl0, 2.06, 0.01, "GeV zpl0");

    const struct {
        calib::Species sp;
        const char* file;
        double offset;
    } cases[] = {{calib::Species::SiV, "theory_zpl_siv.csv", 0.11},
                 {calib::Species::GeV, "theory_zpl_gev.csv", 0.06},
                 {calib::Species::SnV, "theory_zpl_snv.csv", 0.02}};
    for (const auto& c : cases) {
        const auto table = calib::read_pressure_energy_table(testutil::data_file(c.file));
        const auto aligned = calib::align_theory(table, calib::measured_zpl0(c.sp));
        const double offset = aligned[0].second - table[0].second;
        expect_near(offset, c.offset, 1e-12,
                    std::string("alignment offset for ") + calib::species_name(c.sp));
        // shape preserved exactly
        for (size_t i = 0; i < table.size(); ++i)
            expect(aligned[i].second - table[i].second == offset,
                   "constant offset across the table");
    }
}

void c5_eos() {
    const auto params = eos::experiment_params();
    expect(eos::vinet_pressure(1.0, params) == 0.0, "P(x=1) exactly 0");

    double worst = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        const double x = 0.85 + 0.15 * i / 1000.0;
        const double back = eos::lattice_ratio_from_pressure(eos::vinet_pressure(x, params), params);
        worst = std::max(worst, std::fabs(back - x));
    }
    expect(worst < 1e-9, "forward/inverse round trip below 1e-9 on [0.85, 1]");

    // independent bisection oracle for x(180 GPa)
    double lo = 0.7, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (lo + hi);
        (eos::vinet_pressure(m, params) > 180.0 ? lo : hi) = m;
    }
    const double oracle = 0.5 * (lo + hi);
    const double x180 = eos::lattice_ratio_from_pressure(180.0, params);
    expect_near(x180, oracle, 1e-9, "x(180 GPa) vs bisection oracle");
    expect_near(x180, 0.9135, 1e-3, "x(180 GPa) absolute placement");
}

void c6_fit_recovery() {
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> ucen(1.4, 2.6);
    std::uniform_real_distribution<double> ufw(0.005, 0.05);
    std::uniform_real_distribution<double> uamp(1.0, 4.0);  // log10
    std::uniform_real_distribution<double> ubase(5.0, 100.0);

    int bad = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const double c = ucen(rng), w = ufw(rng);
        const double a = std::pow(10.0, uamp(rng));
        const double b = ubase(rng);
        const Spectrum s =
            synth_spectrum({{c, w, a}}, b, 0.0, 0, {c - 5.0 * w, c + 5.0 * w, 151});
        try {
            const auto f = peakfit::fit_peaks(s, 1);
            const bool ok = f.converged && std::fabs(f.peaks[0].center - c) <= 1e-6 * c &&
                            std::fabs(f.peaks[0].fwhm - w) <= 1e-6 * w &&
                            std::fabs(f.peaks[0].amplitude - a) <= 1e-6 * a &&
                            std::fabs(f.baseline - b) <= 1e-6 * b;
            if (!ok) ++bad;
        } catch (...) {
            ++bad;
        }
    }
    expect(bad == 0, "1000/1000 noiseless Lorentzians recovered to 1e-6 relative (" +
                         std::to_string(1000 - bad) + " ok)");

    // Jacobian vs central finite differences on 100 draws
    int jac_bad = 0;
    for (int draw = 0; draw < 100; ++draw) {
        const int n_peaks = (draw % 2) + 1;
        std::vector<LorentzianParams> peaks;
        for (int p = 0; p < n_peaks; ++p)
            peaks.push_back({ucen(rng), ufw(rng), std::pow(10.0, uamp(rng))});
        const double baseline = ubase(rng);
        const double x = peaks[0].center + peaks[0].fwhm * (3.0 * ucen(rng) - 5.0);

        std::vector<double> grad;
        model_gradient(peaks, baseline, x, grad);
        std::vector<double> theta{baseline};
        for (const auto& p : peaks) {
            theta.push_back(p.center);
            theta.push_back(p.fwhm);
            theta.push_back(p.amplitude);
        }
        auto eval_at = [&](const std::vector<double>& th) {
            std::vector<LorentzianParams> pk(n_peaks);
            for (int p = 0; p < n_peaks; ++p)
                pk[p] = {th[1 + 3 * p], th[1 + 3 * p + 1], th[1 + 3 * p + 2]};
            return multi_lorentzian(pk, th[0], x);
        };
        double na = 0.0, nd = 0.0;
        for (size_t j = 0; j < grad.size(); ++j) {
            const double h = 1e-6 * std::max(std::fabs(theta[j]), 1.0);
            auto tp = theta, tm = theta;
            tp[j] += h;
            tm[j] -= h;
            const double fd = (eval_at(tp) - eval_at(tm)) / (2.0 * h);
            na += grad[j] * grad[j];
            nd += (grad[j] - fd) * (grad[j] - fd);
        }
        if (!(std::sqrt(nd) <= 1e-5 * std::max(std::sqrt(na), 1e-12))) ++jac_bad;
    }
    expect(jac_bad == 0, "analytic Jacobian matches finite differences on 100 draws");

    // Monte Carlo coverage of the reported center standard error
    int covered = 0, converged = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const Spectrum s =
            synth_spectrum({{1.68, 0.02, 1000.0}}, 20.0, 10.0, seed, {1.58, 1.78, 201});
        const auto f = peakfit::fit_peaks(s, 1);
        if (!f.converged) continue;
        ++converged;
        if (std::fabs(f.peaks[0].center - 1.68) <= 3.0 * f.center_sigma(0)) ++covered;
    }
    expect(covered >= 90, "center SE coverage >= 90/100 at the 3-sigma bound (" +
                              std::to_string(covered) + "/" + std::to_string(converged) + ")");
}

void c7_split_detection() {
    int split_found = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        // separation 1.5 x fwhm, SNR 100
        const Spectrum s = synth_spectrum({{2.32, 0.02, 1000.0}, {2.35, 0.02, 900.0}}, 10.0,
                                          10.0, seed, {2.25, 2.42, 241});
        const auto f = peakfit::select_model(s);
        if (f.peaks.size() == 2) ++split_found;
    }
    expect(split_found >= 98,
           "doublets detected in >= 98/100 seeds (" + std::to_string(split_found) + ")");

    int single_kept = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const Spectrum s =
            synth_spectrum({{1.68, 0.02, 1000.0}}, 10.0, 10.0, seed, {1.58, 1.78, 201});
        const auto f = peakfit::select_model(s);
        if (f.peaks.size() == 1) ++single_kept;
    }
    expect(single_kept >= 98,
           "single lines kept in >= 98/100 seeds (" + std::to_string(single_kept) + ")");
}

void c8_gauge_round_trip() {
    const auto siv = bundled_calibration(calib::Species::SiV, "siv_zpl_vs_pressure.csv");
    const auto gev = bundled_calibration(calib::Species::GeV, "gev_zpl_vs_pressure.csv");
    for (const auto* cal : {&siv, &gev}) {
        double worst = 0.0;
        for (int i = 0; i <= 200; ++i) {
            const double p = cal->p_min + (cal->p_max - cal->p_min) * i / 200.0;
            const double e = calib::eval_calibration(*cal, p);
            worst = std::max(worst, std::fabs(gauges::zpl_pressure(e, *cal).value_gpa - p));
        }
        expect(worst < 1e-6, std::string("zpl round trip for ") +
                                 calib::species_name(cal->species) + " below 1e-6 GPa");
    }

    // ruby vs raman on the bundled crossover measurements
    const auto scales = gauges::default_scale_coefficients();
    std::FILE* f = std::fopen(testutil::data_file("crossover_ruby_raman.csv").c_str(), "r");
    expect(f != nullptr, "crossover dataset present");
    if (!f) return;
    char line[256];
    bool header = true;
    int rows = 0;
    while (std::fgets(line, sizeof(line), f)) {
        if (header) {
            header = false;
            continue;
        }
        double lambda = 0.0, nu = 0.0;
        if (std::sscanf(line, "%*[^,],%lf,%lf", &lambda, &nu) != 2) continue;
        const auto pr = gauges::ruby_pressure(lambda, scales);
        const auto pm = gauges::raman_edge_pressure(nu, scales);
        const double tol = std::hypot(pr.sigma_gpa, pm.sigma_gpa);
        expect(std::fabs(pr.value_gpa - pm.value_gpa) <= tol,
               "ruby and raman agree within combined 1 sigma near the crossover");
        ++rows;
    }
    std::fclose(f);
    expect(rows >= 3, "crossover dataset has measurements");
}

void c9_fig4_transforms() {
    // exact zero at p = 0 on every bundled trace
    for (const char* name : {"levels_siv.csv", "levels_gev.csv", "levels_snv.csv"}) {
        const auto t = calib::read_level_trace(testutil::data_file(name), calib::Species::SiV);
        expect(calib::ks_zpl_shift(t).front().second == 0.0, "ks shift zero at p=0");
        expect(calib::vbm_referenced_shift(t, calib::Level::eg).front().second == 0.0,
               "vbm-referenced shift zero at p=0");
    }

    // synthetic oracle: linear drifts pass through exactly
    calib::LevelTrace t;
    t.species = calib::Species::GeV;
    t.pressure_gpa = {0.0, 25.0, 50.0, 100.0, 150.0};
    for (double p : t.pressure_gpa) {
        const double vbm = 11.3 + 0.004 * p;
        t.eps_vbm.push_back(vbm);
        t.eps_eu.push_back(vbm + 0.31 + 0.0004 * p);
        t.eps_eg.push_back(vbm + 0.31 + 0.0004 * p + 2.0 + 0.0029 * p);
    }
    const auto ks = calib::ks_zpl_shift(t);
    const auto eu = calib::vbm_referenced_shift(t, calib::Level::eu);
    for (size_t i = 0; i < t.pressure_gpa.size(); ++i) {
        expect_near(ks[i].second, 0.0029 * t.pressure_gpa[i], 1e-12,
                    "ks_zpl_shift reproduces the synthetic gap slope");
        expect_near(eu[i].second, 0.0004 * t.pressure_gpa[i], 1e-12,
                    "vbm_referenced_shift reproduces the synthetic drift");
    }
    expect(ks.front().second == 0.0, "ks shift exactly 0 at p=0");
    expect(eu.front().second == 0.0, "vbm shift exactly 0 at p=0");
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<void()> body;
    };
    const std::vector<Criterion> criteria = {
        {"1 unit-conversion cross-check (17 THz / 78 THz)", c1_unit_conversion},
        {"2 Table-1 slopes from bundled data", c2_table1_slopes},
        {"3 total-shift reproduction and ratio", c3_total_shifts},
        {"4 zero-pressure ZPLs and theory alignment offsets", c4_zero_pressure_zpl},
        {"5 EOS zero point, round trip, x(180 GPa)", c5_eos},
        {"6 fit recovery, Jacobian, SE coverage", c6_fit_recovery},
        {"7 split detection on doublets and singles", c7_split_detection},
        {"8 gauge round trip and crossover agreement", c8_gauge_round_trip},
        {"9 Kohn-Sham shift transforms", c9_fig4_transforms},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const int before = checks_failed;
        try {
            c.body();
        } catch (const std::exception& e) {
            ++checks_failed;
            std::printf("      EXCEPTION: %s\n", e.what());
        }
        const bool ok = (checks_failed == before);
        std::printf("%s  criterion %s\n", ok ? "PASS" : "FAIL", c.name);
        if (!ok) ++failed;
    }
    if (failed) std::printf("%d criterion(s) failed\n", failed);
    return failed;
}

#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "dacspec/calib.hpp"
#include "dacspec/error.hpp"
#include "helpers.hpp"

using namespace dacspec;
using namespace dacspec::calib;

namespace {

std::vector<CalibrationPoint> line_points(double zpl0, double slope_ev_per_gpa,
                                          std::initializer_list<double> pressures) {
    std::vector<CalibrationPoint> pts;
    for (double p : pressures) pts.push_back({p, 1.0, zpl0 + slope_ev_per_gpa * p, 1e-3});
    return pts;
}

}  // namespace

TEST_CASE("build_calibration reproduces affine data exactly") {
    const auto cal = build_calibration(
        Species::SiV, line_points(1.68, 1e-3, {0.0, 5.0, 12.0, 20.0, 33.0, 50.0}));
    CHECK(cal.zpl0 == doctest::Approx(1.68).epsilon(1e-15));
    CHECK_FALSE(cal.zpl0_extrapolated);
    // cubic must reproduce the line at interval midpoints
    for (double p : {2.5, 8.5, 16.0, 26.5, 41.5})
        CHECK(std::fabs(eval_calibration(cal, p) - (1.68 + 1e-3 * p)) < 1e-12);
}

TEST_CASE("build_calibration rejections") {
    CHECK_THROWS_AS(build_calibration(Species::SiV, line_points(1.68, 1e-3, {0.0, 10.0})),
                    Error);  // too few
    auto dup = line_points(1.68, 1e-3, {0.0, 10.0, 10.0, 20.0});
    CHECK_THROWS_AS(build_calibration(Species::SiV, dup), Error);

    auto dip = line_points(1.68, 1e-3, {0.0, 20.0, 40.0, 50.0, 60.0});
    dip[3].energy = dip[2].energy - 5e-3;  // energy decreasing between 40 and 50
    CHECK_THROWS_AS(build_calibration(Species::SiV, dip), Error);
    try {
        build_calibration(Species::SiV, dip);
    } catch (const Error& e) {
        CHECK(e.code() == errc::non_monotone);
        CHECK(exit_code_for(e.code()) == 5);
    }
}

TEST_CASE("eval_calibration is exact at nodes and refuses extrapolation") {
    const auto pts = read_calibration_points(testutil::data_file("siv_zpl_vs_pressure.csv"));
    const auto cal = build_calibration(Species::SiV, pts);
    for (const auto& p : cal.points)
        CHECK(std::fabs(eval_calibration(cal, p.pressure) - p.energy) < 1e-12);
    CHECK_THROWS_AS(eval_calibration(cal, cal.p_min - 0.5), Error);
    CHECK_THROWS_AS(eval_calibration(cal, cal.p_max + 0.5), Error);
}

TEST_CASE("calibration interpolant is strictly increasing over its range") {
    for (const char* name : {"siv_zpl_vs_pressure.csv", "gev_zpl_vs_pressure.csv"}) {
        const auto pts = read_calibration_points(testutil::data_file(name));
        const auto species = (name[0] == 's') ? Species::SiV : Species::GeV;
        const auto cal = build_calibration(species, pts);
        double prev = -1e300;
        for (int i = 0; i <= 1000; ++i) {
            const double p = cal.p_min + (cal.p_max - cal.p_min) * i / 1000.0;
            const double e = eval_calibration(cal, p);
            CHECK(e > prev);
            prev = e;
        }
    }
}

TEST_CASE("bundled SiV dataset calibrates over [1, 180]") {
    const auto pts = read_calibration_points(testutil::data_file("siv_zpl_vs_pressure.csv"));
    CHECK(pts.size() == 18);
    const auto cal = build_calibration(Species::SiV, pts);
    CHECK(cal.p_min == 1.0);
    CHECK(cal.p_max == 180.0);
    CHECK(cal.zpl0_extrapolated);  // lowest node is 1 GPa
    CHECK(std::fabs(cal.zpl0 - 1.68) < 0.01);
}

TEST_CASE("masking drops low-pressure points and is recorded") {
    testutil::TempDir tmp("calmask");
    const auto pts = read_calibration_points(testutil::data_file("gev_zpl_vs_pressure.csv"));
    const auto cal = build_calibration(Species::GeV, pts, 20.0);
    CHECK(cal.p_min == 20.0);
    CHECK(cal.points.size() == 16);
    CHECK(cal.mask_below.has_value());

    const std::string path = tmp.file("gev.cal.kv");
    write_calibration(path, cal);
    const auto r = read_calibration(path);
    CHECK(r.mask_below.has_value());
    CHECK(*r.mask_below == 20.0);
    CHECK(r.p_min == 20.0);
}

TEST_CASE("calibration document round trip preserves everything") {
    testutil::TempDir tmp("caldoc");
    const auto pts = read_calibration_points(testutil::data_file("siv_zpl_vs_pressure.csv"));
    const auto cal = build_calibration(Species::SiV, pts);
    const std::string path = tmp.file("siv.cal.kv");
    write_calibration(path, cal);
    const auto r = read_calibration(path);
    CHECK(r.species == cal.species);
    CHECK(r.zpl0 == cal.zpl0);
    CHECK(r.p_min == cal.p_min);
    CHECK(r.p_max == cal.p_max);
    REQUIRE(r.points.size() == cal.points.size());
    for (size_t i = 0; i < r.points.size(); ++i) {
        CHECK(r.points[i].pressure == cal.points[i].pressure);
        CHECK(r.points[i].pressure_sigma == cal.points[i].pressure_sigma);
        CHECK(r.points[i].energy == cal.points[i].energy);
        CHECK(r.points[i].energy_sigma == cal.points[i].energy_sigma);
    }
}

TEST_CASE("linear_slope on exact and bundled data") {
    // exact line of slope 2.7 meV/GPa
    const auto exact = linear_slope(line_points(2.0, 2.7e-3, {0.0, 5.0, 10.0, 15.0, 20.0}),
                                    {0.0, 20.0});
    CHECK(exact.slope_mev_per_gpa == doctest::Approx(2.7).epsilon(1e-12));
    CHECK(exact.stderr_mev_per_gpa == doctest::Approx(0.0));

    const auto siv = read_calibration_points(testutil::data_file("siv_zpl_vs_pressure.csv"));
    const auto s1 = linear_slope(siv, {0.0, 20.0});
    CHECK(std::fabs(s1.slope_mev_per_gpa - 1.0) <= 0.2);

    const auto gev = read_calibration_points(testutil::data_file("gev_zpl_vs_pressure.csv"));
    const auto s2 = linear_slope(gev, {20.0, 40.0});
    CHECK(std::fabs(s2.slope_mev_per_gpa - 2.7) <= 0.3);

    CHECK_THROWS_AS(linear_slope(siv, {300.0, 400.0}), Error);  // empty window
}

TEST_CASE("slope of the interpolant matches its mean slope over [0,20]") {
    auto siv = read_calibration_points(testutil::data_file("siv_zpl_vs_pressure.csv"));
    const auto cal = build_calibration(Species::SiV, siv);
    // sample the interpolant densely inside the window and fit a line
    std::vector<CalibrationPoint> sampled;
    const double lo = cal.p_min, hi = 20.0;
    for (int i = 0; i <= 40; ++i) {
        const double p = lo + (hi - lo) * i / 40.0;
        sampled.push_back({p, 0.0, eval_calibration(cal, p), 0.0});
    }
    const auto fit = linear_slope(sampled, {lo, hi});
    const double mean_slope =
        (eval_calibration(cal, hi) - eval_calibration(cal, lo)) / (hi - lo) * 1e3;
    CHECK(fit.slope_mev_per_gpa == doctest::Approx(mean_slope).epsilon(0.02));
}

TEST_CASE("GeV-to-SiV slope ratio over [20,40] is near 2.7") {
    const auto siv = read_calibration_points(testutil::data_file("siv_zpl_vs_pressure.csv"));
    const auto gev = read_calibration_points(testutil::data_file("gev_zpl_vs_pressure.csv"));
    const double ratio = linear_slope(gev, {20.0, 40.0}).slope_mev_per_gpa /
                         linear_slope(siv, {20.0, 40.0}).slope_mev_per_gpa;
    CHECK(ratio == doctest::Approx(2.7).epsilon(0.25));
}

TEST_CASE("align_theory applies the zero-pressure offset verbatim") {
    const std::vector<std::pair<double, double>> theory = {
        {0.0, 1.57}, {50.0, 1.61}, {100.0, 1.628}, {180.0, 1.6405}};
    const auto aligned = align_theory(theory, 1.68);
    CHECK(aligned[0].second == doctest::Approx(1.68).epsilon(1e-15));
    // pairwise differences preserved exactly
    for (size_t i = 1; i < theory.size(); ++i) {
        const double want = theory[i].second - theory[0].second;
        const double got = aligned[i].second - aligned[0].second;
        CHECK(got == doctest::Approx(want).epsilon(1e-15));
    }
    // identity when already aligned
    const auto same = align_theory(aligned, aligned[0].second);
    for (size_t i = 0; i < same.size(); ++i) CHECK(same[i].second == aligned[i].second);

    const std::vector<std::pair<double, double>> no_zero = {{10.0, 1.6}, {50.0, 1.62}};
    CHECK_THROWS_AS(align_theory(no_zero, 1.68), Error);
}

TEST_CASE("bundled theory tables align to the section-published offsets") {
    const auto siv = read_pressure_energy_table(testutil::data_file("theory_zpl_siv.csv"));
    const auto gev = read_pressure_energy_table(testutil::data_file("theory_zpl_gev.csv"));
    const auto snv = read_pressure_energy_table(testutil::data_file("theory_zpl_snv.csv"));
    CHECK(std::fabs((measured_zpl0(Species::SiV) - siv[0].second) - 0.11) < 1e-12);
    CHECK(std::fabs((measured_zpl0(Species::GeV) - gev[0].second) - 0.06) < 1e-12);
    CHECK(std::fabs((measured_zpl0(Species::SnV) - snv[0].second) - 0.02) < 1e-12);
}

TEST_CASE("level trace transforms vanish at zero pressure") {
    LevelTrace t;
    t.species = Species::GeV;
    t.pressure_gpa = {0.0, 20.0, 40.0, 60.0};
    t.eps_eu = {11.5, 11.6, 11.7, 11.8};
    t.eps_eg = {13.5, 13.66, 13.81, 13.95};
    t.eps_vbm = {11.2, 11.28, 11.36, 11.43};
    t.eps_cbm = std::vector<double>{16.6, 16.8, 16.98, 17.15};

    for (auto level : {Level::eu, Level::eg, Level::cbm}) {
        const auto shift = vbm_referenced_shift(t, level);
        CHECK(shift[0].second == 0.0);
    }
    CHECK(ks_zpl_shift(t)[0].second == 0.0);

    t.eps_cbm.reset();
    CHECK_THROWS_AS(vbm_referenced_shift(t, Level::cbm), Error);
}

TEST_CASE("common-mode level motion cancels in the VBM reference") {
    LevelTrace t;
    t.species = Species::SiV;
    t.pressure_gpa = {0.0, 30.0, 60.0, 90.0};
    t.eps_vbm = {11.0, 11.1, 11.25, 11.36};
    t.eps_eu = t.eps_vbm;
    t.eps_eg = t.eps_vbm;
    for (auto& v : t.eps_eu) v += 0.4;   // rigid offset
    for (auto& v : t.eps_eg) v += 1.9;
    const auto eu = vbm_referenced_shift(t, Level::eu);
    const auto eg = vbm_referenced_shift(t, Level::eg);
    for (const auto& [p, v] : eu) CHECK(std::fabs(v) < 1e-15);
    for (const auto& [p, v] : eg) CHECK(std::fabs(v) < 1e-15);
}

TEST_CASE("synthetic slopes pass through the transforms exactly") {
    LevelTrace t;
    t.species = Species::SnV;
    t.pressure_gpa = {0.0, 10.0, 20.0, 50.0, 100.0};
    for (double p : t.pressure_gpa) {
        const double vbm = 11.0 + 0.003 * p;
        t.eps_vbm.push_back(vbm);
        t.eps_eu.push_back(vbm + 0.5 + 0.002 * p);  // drifts +2 meV/GPa vs VBM
        t.eps_eg.push_back(vbm + 0.5 + 0.002 * p + 1.98 + 0.003 * p);  // gap +3 meV/GPa
    }
    const auto eu = vbm_referenced_shift(t, Level::eu);
    const auto ks = ks_zpl_shift(t);
    for (size_t i = 0; i < t.pressure_gpa.size(); ++i) {
        CHECK(eu[i].second == doctest::Approx(0.002 * t.pressure_gpa[i]).epsilon(1e-12));
        CHECK(ks[i].second == doctest::Approx(0.003 * t.pressure_gpa[i]).epsilon(1e-12));
    }
}

TEST_CASE("bundled level traces parse and satisfy the zero-point rule") {
    for (const char* name : {"levels_siv.csv", "levels_gev.csv", "levels_snv.csv"}) {
        const auto t = read_level_trace(testutil::data_file(name), Species::SiV);
        CHECK(t.pressure_gpa.front() == 0.0);
        CHECK(t.eps_cbm.has_value());
        CHECK(ks_zpl_shift(t).front().second == 0.0);
    }
}

TEST_CASE("dataset reader accepts the two-column form") {
    testutil::TempDir tmp("ds2col");
    {
        std::FILE* f = std::fopen(tmp.file("d.csv").c_str(), "w");
        std::fputs("p_gpa,e_ev\n0,1.68\n10,1.69\n20,1.70\n", f);
        std::fclose(f);
    }
    const auto pts = read_calibration_points(tmp.file("d.csv"));
    REQUIRE(pts.size() == 3);
    CHECK(pts[1].pressure == 10.0);
    CHECK(pts[1].energy == 1.69);
    CHECK(pts[1].pressure_sigma == 0.0);
}

#include "dacspec/calib.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dacspec/error.hpp"
#include "dacspec/kvdoc.hpp"

namespace dacspec::calib {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    return out;
}

}  // namespace

const char* species_name(Species s) {
    switch (s) {
        case Species::SiV: return "SiV";
        case Species::GeV: return "GeV";
        case Species::SnV: return "SnV";
    }
    return "?";
}

Species parse_species(const std::string& name) {
    std::string low;
    for (char c : name) low.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (low == "siv") return Species::SiV;
    if (low == "gev") return Species::GeV;
    if (low == "snv") return Species::SnV;
    throw Error(errc::invalid_argument, "unknown species '" + name + "'");
}

double measured_zpl0(Species s) {
    switch (s) {
        case Species::SiV: return 1.68;
        case Species::GeV: return 2.06;
        case Species::SnV: return 2.00;
    }
    return 0.0;
}

GaugeCalibration build_calibration(Species species, std::vector<CalibrationPoint> points,
                                   std::optional<double> mask_below) {
    if (mask_below) {
        std::erase_if(points, [&](const CalibrationPoint& p) { return p.pressure < *mask_below; });
    }
    if (points.size() < 3)
        throw Error(errc::too_few_points, "calibration needs at least 3 points");
    for (const auto& p : points) {
        if (!(p.pressure >= 0.0)) throw Error(errc::invalid_argument, "negative pressure node");
        if (p.pressure_sigma < 0.0 || p.energy_sigma < 0.0)
            throw Error(errc::invalid_argument, "negative sigma");
        if (!std::isfinite(p.energy)) throw Error(errc::invalid_argument, "non-finite energy");
    }
    std::sort(points.begin(), points.end(),
              [](const CalibrationPoint& a, const CalibrationPoint& b) {
                  return a.pressure < b.pressure;
              });
    for (size_t i = 1; i < points.size(); ++i) {
        if (points[i].pressure == points[i - 1].pressure)
            throw Error(errc::duplicate_pressure, "duplicate pressure node");
        if (!(points[i].energy > points[i - 1].energy))
            throw Error(errc::non_monotone,
                        "ZPL energies must increase with pressure (blue shift)");
    }

    GaugeCalibration cal;
    cal.species = species;
    cal.points = points;
    cal.mask_below = mask_below;
    cal.p_min = points.front().pressure;
    cal.p_max = points.back().pressure;

    std::vector<double> px, ey;
    px.reserve(points.size());
    ey.reserve(points.size());
    for (const auto& p : points) {
        px.push_back(p.pressure);
        ey.push_back(p.energy);
    }
    cal.interpolant = MonotoneCubic(std::move(px), std::move(ey));

    if (cal.p_min <= 0.0) {
        cal.zpl0 = cal.interpolant.eval(0.0);
        cal.zpl0_extrapolated = false;
    } else {
        cal.zpl0 = points.front().energy;
        cal.zpl0_extrapolated = true;
    }
    return cal;
}

double eval_calibration(const GaugeCalibration& cal, double p) {
    if (cal.interpolant.empty()) throw Error(errc::invalid_argument, "empty calibration");
    if (!(p >= cal.p_min && p <= cal.p_max))
        throw Error(errc::extrapolation_refused,
                    "pressure outside calibrated range [" + format_g17(cal.p_min) + ", " +
                        format_g17(cal.p_max) + "] GPa");
    return cal.interpolant.eval(p);
}

double eval_energy_sigma(const GaugeCalibration& cal, double p) {
    const auto& pts = cal.points;
    if (pts.empty()) throw Error(errc::invalid_argument, "empty calibration");
    if (p <= pts.front().pressure) return pts.front().energy_sigma;
    if (p >= pts.back().pressure) return pts.back().energy_sigma;
    for (size_t i = 1; i < pts.size(); ++i) {
        if (p <= pts[i].pressure) {
            const double t = (p - pts[i - 1].pressure) / (pts[i].pressure - pts[i - 1].pressure);
            return (1.0 - t) * pts[i - 1].energy_sigma + t * pts[i].energy_sigma;
        }
    }
    return pts.back().energy_sigma;
}

SlopeFit linear_slope(const std::vector<CalibrationPoint>& points,
                      std::pair<double, double> window) {
    std::vector<std::pair<double, double>> sel;
    for (const auto& p : points)
        if (p.pressure >= window.first && p.pressure <= window.second)
            sel.emplace_back(p.pressure, p.energy);
    if (sel.size() < 2)
        throw Error(errc::too_few_points, "fewer than 2 points inside the slope window");

    const int n = static_cast<int>(sel.size());
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : sel) {
        mx += x;
        my += y;
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : sel) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if (sxx == 0.0) throw Error(errc::invalid_argument, "degenerate slope window");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;

    double rss = 0.0;
    for (const auto& [x, y] : sel) {
        const double r = y - (intercept + slope * x);
        rss += r * r;
    }
    SlopeFit fit;
    fit.n = n;
    fit.slope_mev_per_gpa = slope * 1e3;
    fit.stderr_mev_per_gpa = (n > 2) ? std::sqrt(rss / (n - 2) / sxx) * 1e3 : 0.0;
    return fit;
}

std::vector<std::pair<double, double>> align_theory(
    const std::vector<std::pair<double, double>>& theory, double zpl0_exp) {
    const std::pair<double, double>* zero = nullptr;
    for (const auto& pe : theory)
        if (std::fabs(pe.first) < 1e-9) zero = &pe;
    if (!zero)
        throw Error(errc::missing_input, "theory table has no zero-pressure entry");
    const double offset = zpl0_exp - zero->second;
    auto out = theory;
    for (auto& pe : out) pe.second += offset;
    return out;
}

void validate(const LevelTrace& t) {
    const size_t n = t.pressure_gpa.size();
    if (n < 2) throw Error(errc::invalid_argument, "level trace needs >= 2 pressures");
    if (t.eps_eu.size() != n || t.eps_eg.size() != n || t.eps_vbm.size() != n ||
        (t.eps_cbm && t.eps_cbm->size() != n))
        throw Error(errc::invalid_argument, "level trace column length mismatch");
    for (size_t i = 1; i < n; ++i)
        if (!(t.pressure_gpa[i] > t.pressure_gpa[i - 1]))
            throw Error(errc::invalid_argument, "level trace pressures must increase");
    bool has_zero = false;
    for (double p : t.pressure_gpa)
        if (std::fabs(p) < 1e-9) has_zero = true;
    if (!has_zero)
        throw Error(errc::invalid_argument, "level trace grid must include p = 0");
}

namespace {

size_t zero_index(const LevelTrace& t) {
    for (size_t i = 0; i < t.pressure_gpa.size(); ++i)
        if (std::fabs(t.pressure_gpa[i]) < 1e-9) return i;
    throw Error(errc::invalid_argument, "level trace grid must include p = 0");
}

}  // namespace

std::vector<std::pair<double, double>> vbm_referenced_shift(const LevelTrace& trace,
                                                            Level level) {
    validate(trace);
    const std::vector<double>* eps = nullptr;
    switch (level) {
        case Level::eu: eps = &trace.eps_eu; break;
        case Level::eg: eps = &trace.eps_eg; break;
        case Level::cbm:
            if (!trace.eps_cbm)
                throw Error(errc::missing_input, "trace carries no CBM column");
            eps = &*trace.eps_cbm;
            break;
    }
    const size_t i0 = zero_index(trace);
    const double ref0 = (*eps)[i0] - trace.eps_vbm[i0];
    std::vector<std::pair<double, double>> out;
    out.reserve(trace.pressure_gpa.size());
    for (size_t i = 0; i < trace.pressure_gpa.size(); ++i)
        out.emplace_back(trace.pressure_gpa[i],
                         ((*eps)[i] - trace.eps_vbm[i]) - ref0);
    return out;
}

std::vector<std::pair<double, double>> ks_zpl_shift(const LevelTrace& trace) {
    validate(trace);
    const size_t i0 = zero_index(trace);
    const double gap0 = trace.eps_eg[i0] - trace.eps_eu[i0];
    std::vector<std::pair<double, double>> out;
    out.reserve(trace.pressure_gpa.size());
    for (size_t i = 0; i < trace.pressure_gpa.size(); ++i)
        out.emplace_back(trace.pressure_gpa[i],
                         (trace.eps_eg[i] - trace.eps_eu[i]) - gap0);
    return out;
}

void write_calibration(const std::string& path, const GaugeCalibration& cal) {
    KeyValueDoc doc;
    doc.set("species", species_name(cal.species));
    doc.set_number("zpl0_ev", cal.zpl0);
    doc.set("range_gpa", format_g17(cal.p_min) + ", " + format_g17(cal.p_max));
    if (cal.mask_below) doc.set_number("mask_below_gpa", *cal.mask_below);
    for (const auto& p : cal.points)
        doc.rows.push_back({p.pressure, p.pressure_sigma, p.energy, p.energy_sigma});
    write_kvdoc(path, doc);
}

GaugeCalibration read_calibration(const std::string& path) {
    const KeyValueDoc doc = read_kvdoc(path);
    const Species species = parse_species(doc.require("species"));
    std::optional<double> mask;
    if (doc.has("mask_below_gpa")) mask = doc.require_number("mask_below_gpa");

    std::vector<CalibrationPoint> points;
    for (const auto& row : doc.rows) {
        if (row.size() != 4)
            throw Error(errc::parse_error, path + ": point rows need 4 columns");
        points.push_back({row[0], row[1], row[2], row[3]});
    }
    // rebuild; the stored header is a summary of the same construction
    auto cal = build_calibration(species, std::move(points), mask);
    const double zpl0 = doc.require_number("zpl0_ev");
    if (std::fabs(zpl0 - cal.zpl0) > 1e-12)
        throw Error(errc::parse_error, path + ": zpl0_ev inconsistent with point rows");
    return cal;
}

std::vector<CalibrationPoint> read_calibration_points(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(errc::missing_input, "cannot open '" + path + "'");
    std::string line;
    std::vector<CalibrationPoint> out;
    bool with_sigma = true;
    bool have_header = false;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto cells = split_csv(t);
        if (!have_header) {
            if (cells.size() == 4 && cells[0] == "p_gpa" && cells[1] == "p_sigma" &&
                cells[2] == "e_ev" && cells[3] == "e_sigma") {
                with_sigma = true;
            } else if (cells.size() == 2 && cells[0] == "p_gpa" && cells[1] == "e_ev") {
                with_sigma = false;
            } else {
                throw Error(errc::parse_error,
                            path + ": expected header 'p_gpa,p_sigma,e_ev,e_sigma' or 'p_gpa,e_ev'");
            }
            have_header = true;
            continue;
        }
        try {
            CalibrationPoint p;
            if (with_sigma) {
                if (cells.size() != 4)
                    throw Error(errc::parse_error, "expected 4 columns");
                p = {parse_number(cells[0]), parse_number(cells[1]), parse_number(cells[2]),
                     parse_number(cells[3])};
            } else {
                if (cells.size() != 2)
                    throw Error(errc::parse_error, "expected 2 columns");
                p = {parse_number(cells[0]), 0.0, parse_number(cells[1]), 0.0};
            }
            out.push_back(p);
        } catch (const Error& e) {
            throw Error(errc::parse_error, path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (out.empty()) throw Error(errc::parse_error, path + ": no data rows");
    return out;
}

std::vector<std::pair<double, double>> read_pressure_energy_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(errc::missing_input, "cannot open '" + path + "'");
    std::string line;
    std::vector<std::pair<double, double>> out;
    bool have_header = false;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto cells = split_csv(t);
        if (!have_header) {
            if (cells.size() != 2 || cells[0] != "p_gpa" || cells[1] != "e_ev")
                throw Error(errc::parse_error, path + ": expected header 'p_gpa,e_ev'");
            have_header = true;
            continue;
        }
        if (cells.size() != 2)
            throw Error(errc::parse_error, path + ":" + std::to_string(lineno) + ": expected 2 columns");
        out.emplace_back(parse_number(cells[0]), parse_number(cells[1]));
    }
    if (out.empty()) throw Error(errc::parse_error, path + ": no data rows");
    return out;
}

LevelTrace read_level_trace(const std::string& path, Species species) {
    std::ifstream in(path);
    if (!in) throw Error(errc::missing_input, "cannot open '" + path + "'");
    std::string line;
    LevelTrace t;
    t.species = species;
    bool have_header = false;
    bool with_cbm = false;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        const auto cells = split_csv(s);
        if (!have_header) {
            if (cells.size() >= 4 && cells[0] == "p_gpa" && cells[1] == "eps_eu_ev" &&
                cells[2] == "eps_eg_ev" && cells[3] == "eps_vbm_ev") {
                with_cbm = cells.size() == 5 && cells[4] == "eps_cbm_ev";
                if (!with_cbm && cells.size() != 4)
                    throw Error(errc::parse_error, path + ": malformed level-trace header");
            } else {
                throw Error(errc::parse_error, path + ": malformed level-trace header");
            }
            if (with_cbm) t.eps_cbm.emplace();
            have_header = true;
            continue;
        }
        const size_t want = with_cbm ? 5 : 4;
        if (cells.size() != want)
            throw Error(errc::parse_error,
                        path + ":" + std::to_string(lineno) + ": wrong column count");
        t.pressure_gpa.push_back(parse_number(cells[0]));
        t.eps_eu.push_back(parse_number(cells[1]));
        t.eps_eg.push_back(parse_number(cells[2]));
        t.eps_vbm.push_back(parse_number(cells[3]));
        if (with_cbm) t.eps_cbm->push_back(parse_number(cells[4]));
    }
    try {
        validate(t);
    } catch (const Error& e) {
        throw Error(errc::parse_error, path + ": " + e.what());
    }
    return t;
}

}  // namespace dacspec::calib

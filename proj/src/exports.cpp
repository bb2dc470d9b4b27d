#include "dacspec/exports.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "dacspec/error.hpp"
#include "dacspec/kvdoc.hpp"
#include "dacspec/svg.hpp"

namespace dacspec::exports {

namespace {

std::string lower_species(calib::Species s) {
    std::string n = calib::species_name(s);
    for (char& c : n) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return n;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(errc::missing_input, "cannot write '" + path + "'");
    return out;
}

// linear interpolation inside a (P, E) table; nullopt outside its range
std::optional<double> table_at(const std::vector<std::pair<double, double>>& t, double p) {
    if (t.empty() || p < t.front().first || p > t.back().first) return std::nullopt;
    for (size_t i = 1; i < t.size(); ++i) {
        if (p <= t[i].first) {
            const double f = (p - t[i - 1].first) / (t[i].first - t[i - 1].first);
            return (1.0 - f) * t[i - 1].second + f * t[i].second;
        }
    }
    return t.back().second;
}

}  // namespace

void export_fig3(const std::string& csv_path, const std::optional<std::string>& svg_path,
                 const Fig3Inputs& in) {
    if (in.calibrations.empty() && in.theory.empty())
        throw Error(errc::missing_input, "fig3 export needs calibrations or theory tables");
    if (!(in.p_step > 0.0)) throw Error(errc::invalid_argument, "p_step must be > 0");

    std::vector<std::pair<calib::Species, std::vector<std::pair<double, double>>>> aligned;
    for (const auto& [sp, table] : in.theory)
        aligned.emplace_back(sp, calib::align_theory(table, calib::measured_zpl0(sp)));

    double p_max = 0.0;
    for (const auto& c : in.calibrations) p_max = std::max(p_max, c.p_max);
    for (const auto& [sp, t] : aligned)
        if (!t.empty()) p_max = std::max(p_max, t.back().first);
    if (p_max <= 0.0) throw Error(errc::invalid_argument, "no positive-pressure content");

    auto out = open_out(csv_path);
    out << "p_gpa,x_ratio";
    for (const auto& c : in.calibrations) out << ",e_" << lower_species(c.species) << "_ev";
    for (const auto& [sp, t] : aligned) out << ",e_theory_" << lower_species(sp) << "_ev";
    out << "\n";

    std::vector<svg::Series> series(in.calibrations.size() + aligned.size());
    for (size_t i = 0; i < in.calibrations.size(); ++i) {
        series[i].name = std::string(calib::species_name(in.calibrations[i].species)) + " measured";
        series[i].markers = true;
    }
    for (size_t i = 0; i < aligned.size(); ++i)
        series[in.calibrations.size() + i].name =
            std::string(calib::species_name(aligned[i].first)) + " theory";

    for (double p = 0.0; p <= p_max + 1e-9; p += in.p_step) {
        out << format_g17(p) << ","
            << format_g17(eos::lattice_ratio_from_pressure(p, in.eos_params));
        size_t col = 0;
        for (const auto& c : in.calibrations) {
            out << ",";
            if (p >= c.p_min && p <= c.p_max) {
                const double e = calib::eval_calibration(c, p);
                out << format_g17(e);
                series[col].points.emplace_back(p, e);
            }
            ++col;
        }
        for (const auto& [sp, t] : aligned) {
            out << ",";
            if (auto e = table_at(t, p)) {
                out << format_g17(*e);
                series[col].points.emplace_back(p, *e);
            }
            ++col;
        }
        out << "\n";
    }
    if (!out.flush()) throw Error(errc::missing_input, "write failed for '" + csv_path + "'");

    if (svg_path)
        svg::write_line_plot(*svg_path, "ZPL energy vs pressure", "pressure (GPa)",
                             "ZPL energy (eV)", series);
}

void export_fig4(const std::string& csv_path, const std::optional<std::string>& svg_path,
                 const std::vector<calib::LevelTrace>& traces) {
    if (traces.empty()) throw Error(errc::missing_input, "fig4 export needs level traces");
    for (const auto& t : traces) calib::validate(t);

    // union pressure grid; traces with differing grids leave gaps
    std::vector<double> grid;
    for (const auto& t : traces)
        grid.insert(grid.end(), t.pressure_gpa.begin(), t.pressure_gpa.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    struct Column {
        std::string name;
        std::map<double, double> values;
    };
    std::vector<Column> cols;
    for (const auto& t : traces) {
        const std::string sp = lower_species(t.species);
        auto add = [&](const std::string& name,
                       const std::vector<std::pair<double, double>>& vals) {
            Column c;
            c.name = name;
            for (const auto& [p, v] : vals) c.values[p] = v;
            cols.push_back(std::move(c));
        };
        add("dzpl_ks_" + sp + "_ev", calib::ks_zpl_shift(t));
        add("deps_eu_" + sp + "_ev", calib::vbm_referenced_shift(t, calib::Level::eu));
        add("deps_eg_" + sp + "_ev", calib::vbm_referenced_shift(t, calib::Level::eg));
        if (t.eps_cbm)
            add("deps_cbm_" + sp + "_ev", calib::vbm_referenced_shift(t, calib::Level::cbm));
    }

    auto out = open_out(csv_path);
    out << "p_gpa";
    for (const auto& c : cols) out << "," << c.name;
    out << "\n";
    for (double p : grid) {
        out << format_g17(p);
        for (const auto& c : cols) {
            out << ",";
            auto it = c.values.find(p);
            if (it != c.values.end()) out << format_g17(it->second);
        }
        out << "\n";
    }
    if (!out.flush()) throw Error(errc::missing_input, "write failed for '" + csv_path + "'");

    if (svg_path) {
        std::vector<svg::Series> series;
        for (const auto& c : cols) {
            if (c.name.rfind("dzpl_ks_", 0) != 0) continue;  // main panel only
            svg::Series s;
            s.name = c.name;
            for (const auto& [p, v] : c.values) s.points.emplace_back(p, v);
            series.push_back(std::move(s));
        }
        svg::write_line_plot(*svg_path, "Kohn-Sham ZPL shift vs pressure", "pressure (GPa)",
                             "relative shift (eV)", series);
    }
}

void export_waterfall(const std::string& csv_path, const std::optional<std::string>& svg_path,
                      const WaterfallInputs& in) {
    if (in.spectra.empty()) throw Error(errc::missing_input, "waterfall export needs spectra");
    if (in.spectra.size() != in.pressures_gpa.size())
        throw Error(errc::invalid_argument, "one pressure per spectrum required");
    if (!(in.height_gpa > 0.0)) throw Error(errc::invalid_argument, "height must be > 0");

    std::vector<size_t> order(in.spectra.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return in.pressures_gpa[a] < in.pressures_gpa[b];
    });

    size_t max_rows = 0;
    for (const auto& s : in.spectra) max_rows = std::max(max_rows, s.size());

    auto out = open_out(csv_path);
    for (size_t j = 0; j < order.size(); ++j) {
        if (j) out << ",";
        out << "e_" << j + 1 << "_ev,i_" << j + 1;
    }
    out << "\n";

    std::vector<svg::Series> series(order.size());
    std::vector<std::vector<std::pair<double, double>>> shifted(order.size());
    for (size_t j = 0; j < order.size(); ++j) {
        const Spectrum& s = in.spectra[order[j]];
        const double p = in.pressures_gpa[order[j]];
        const double peak = *std::max_element(s.intensity.begin(), s.intensity.end());
        const double norm = (peak > 0.0) ? in.height_gpa / peak : 0.0;
        shifted[j].reserve(s.size());
        for (size_t i = 0; i < s.size(); ++i)
            shifted[j].emplace_back(s.axis[i], p + s.intensity[i] * norm);
        std::ostringstream name;
        name.precision(4);
        name << p << " GPa";
        series[j].name = name.str();
        series[j].points = shifted[j];
    }
    for (size_t row = 0; row < max_rows; ++row) {
        for (size_t j = 0; j < order.size(); ++j) {
            if (j) out << ",";
            if (row < shifted[j].size())
                out << format_g17(shifted[j][row].first) << ","
                    << format_g17(shifted[j][row].second);
            else
                out << ",";
        }
        out << "\n";
    }
    if (!out.flush()) throw Error(errc::missing_input, "write failed for '" + csv_path + "'");

    if (svg_path)
        svg::write_line_plot(*svg_path, "PL spectra stacked by pressure", "energy (eV)",
                             "pressure offset (GPa)", series);
}

}  // namespace dacspec::exports

// dacspec: batch CLI for diamond-anvil-cell PL/Raman pressure analysis.
//
// Subcommands: fit, pressure (ruby|raman|zpl), calibrate, eos, synth,
// export-plot. Exit codes: 0 success, 2 input/parse, 3 fit failure,
// 4 range/extrapolation, 5 calibration construction.

#include <CLI11.hpp>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include "dacspec/calib.hpp"
#include "dacspec/eos.hpp"
#include "dacspec/error.hpp"
#include "dacspec/exports.hpp"
#include "dacspec/gauges.hpp"
#include "dacspec/kvdoc.hpp"
#include "dacspec/peakfit.hpp"
#include "dacspec/runconfig.hpp"
#include "dacspec/spectrum_io.hpp"
#include "dacspec/stats.hpp"
#include "dacspec/synth.hpp"
#include "dacspec/version.hpp"

namespace fs = std::filesystem;
using namespace dacspec;

namespace {

std::string run_timestamp() {
    // DACSPEC_TIMESTAMP pins the records timestamp for reproducible runs
    if (const char* env = std::getenv("DACSPEC_TIMESTAMP"); env && *env) return env;
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

RunConfig load_config(const std::string& config_flag) {
    if (!config_flag.empty()) return read_run_config(config_flag);
    return default_run_config();
}

gauges::ScaleCoefficients load_scales(const RunConfig& cfg, const std::string& flag) {
    if (!flag.empty()) return gauges::read_scale_coefficients(flag);
    if (!cfg.scale_coefficients_path.empty())
        return gauges::read_scale_coefficients(cfg.scale_coefficients_path);
    return gauges::default_scale_coefficients();
}

eos::EosParams load_eos(const RunConfig& cfg, const std::string& params_flag,
                        const std::string& set_flag) {
    if (!params_flag.empty()) return eos::read_eos_params(params_flag);
    if (!set_flag.empty()) {
        if (set_flag == "experiment") return eos::experiment_params();
        if (set_flag == "theory") return eos::theory_params();
        throw Error(errc::invalid_argument, "--set must be 'experiment' or 'theory'");
    }
    if (!cfg.eos_params_path.empty()) return eos::read_eos_params(cfg.eos_params_path);
    return eos::experiment_params();
}

calib::GaugeCalibration load_calibration_for(const RunConfig& cfg, const std::string& flag,
                                             std::optional<calib::Species> species) {
    if (!flag.empty()) return calib::read_calibration(flag);
    for (const auto& path : cfg.calibration_paths) {
        auto cal = calib::read_calibration(path);
        if (!species || cal.species == *species) return cal;
    }
    throw Error(errc::missing_input,
                "no calibration supplied (use --calibration or a config with calibrations)");
}

std::pair<calib::Species, std::string> parse_species_file(const std::string& arg) {
    auto eq = arg.find('=');
    if (eq == std::string::npos)
        throw Error(errc::invalid_argument,
                    "expected SPECIES=FILE, e.g. siv=theory_zpl_siv.csv, got '" + arg + "'");
    return {calib::parse_species(arg.substr(0, eq)), arg.substr(eq + 1)};
}

int fail(const Error& e) {
    std::cerr << "error (" << errc_name(e.code()) << "): " << e.what() << "\n";
    return exit_code_for(e.code());
}

// ---------------------------------------------------------------- fit ----

struct FitJob {
    std::string input;
    bool parse_failed = false;
    bool fit_failed = false;
    std::string message;
    peakfit::FitResult fit;
    MeasurementStat center;
    std::optional<gauges::PressureEstimate> pressure;
    std::string spectrum_id;
};

int cmd_fit(const std::vector<std::string>& files, const std::string& peaks_mode,
            const std::string& out_dir, const std::string& calibration_flag,
            int parallelism, const RunConfig& cfg) {
    fs::create_directories(out_dir);

    std::optional<calib::GaugeCalibration> cal;
    if (!calibration_flag.empty()) cal = calib::read_calibration(calibration_flag);

    std::vector<FitJob> jobs(files.size());
    for (size_t i = 0; i < files.size(); ++i) jobs[i].input = files[i];

    const int workers = std::max(1, parallelism > 0 ? parallelism : cfg.parallelism);
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            FitJob& job = jobs[i];
            try {
                Spectrum s = read_spectrum(job.input);
                if (auto it = s.meta.find("sample_id"); it != s.meta.end())
                    job.spectrum_id = it->second;
                else
                    job.spectrum_id = fs::path(job.input).stem().string();
                s = resample_to_energy(s);
                if (peaks_mode == "auto")
                    job.fit = peakfit::select_model(s);
                else
                    job.fit = peakfit::fit_peaks(s, peaks_mode == "2" ? 2 : 1);
                if (!job.fit.converged) {
                    job.fit_failed = true;
                    job.message = "fit did not converge";
                    continue;
                }
                job.center = peakfit::center_energy(job.fit);
                if (cal) {
                    const double sigma_e = job.center.half_width_95 / kZ95;
                    job.pressure = gauges::zpl_pressure(job.center.mean, *cal, sigma_e);
                }
            } catch (const Error& e) {
                const int code = exit_code_for(e.code());
                job.parse_failed = (code == 2);
                job.fit_failed = !job.parse_failed;
                job.message = std::string(errc_name(e.code())) + ": " + e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    // output strictly in input order, independent of worker scheduling
    const std::string stamp = run_timestamp();
    std::ofstream records(fs::path(out_dir) / "pipeline_records.csv", std::ios::app);
    bool any_parse = false, any_fit = false;
    for (const auto& job : jobs) {
        if (job.parse_failed || job.fit_failed) {
            (job.parse_failed ? any_parse : any_fit) = true;
            std::cout << job.input << ": FAILED (" << job.message << ")\n";
            continue;
        }
        const std::string doc_name = fs::path(job.input).stem().string() + ".fit.kv";
        const fs::path out_path = fs::path(out_dir) / doc_name;
        peakfit::write_fit_result(out_path.string(), job.fit);
        std::cout << job.input << ": peaks=" << job.fit.peaks.size()
                  << " center=" << format_g17(job.center.mean) << " eV"
                  << " ci95=" << format_g17(job.center.half_width_95) << " eV";
        if (job.pressure)
            std::cout << " pressure=" << format_g17(job.pressure->value_gpa) << " GPa"
                      << " sigma=" << format_g17(job.pressure->sigma_gpa) << " GPa";
        std::cout << " -> " << out_path.string() << "\n";
        // document name kept relative so a records file travels with its run
        records << stamp << "," << kVersion << "," << job.spectrum_id << "," << doc_name
                << "," << format_g17(job.center.mean) << ","
                << format_g17(job.center.half_width_95);
        if (job.pressure)
            records << "," << format_g17(job.pressure->value_gpa) << ","
                    << format_g17(job.pressure->sigma_gpa) << ","
                    << gauges::gauge_name(job.pressure->gauge);
        records << "\n";
    }
    if (any_parse) return 2;
    if (any_fit) return 3;
    return 0;
}

// ----------------------------------------------------------- pressure ----

int cmd_pressure_common(const gauges::PressureEstimate& est, const std::string& out_dir,
                        const std::string& out_flag) {
    std::cout << "pressure = " << format_g17(est.value_gpa) << " GPa  sigma = "
              << format_g17(est.sigma_gpa) << " GPa  gauge = " << gauges::gauge_name(est.gauge)
              << "\n";
    std::string out_path = out_flag;
    if (out_path.empty()) {
        fs::create_directories(out_dir);
        out_path =
            (fs::path(out_dir) / (std::string("pressure_") + gauges::gauge_name(est.gauge) + ".kv"))
                .string();
    }
    KeyValueDoc doc;
    doc.set_number("value_gpa", est.value_gpa);
    doc.set_number("sigma_gpa", est.sigma_gpa);
    doc.set("gauge", gauges::gauge_name(est.gauge));
    doc.set_number("feature", est.feature);
    doc.set("feature_unit", est.feature_unit);
    write_kvdoc(out_path, doc);
    return 0;
}

// ---------------------------------------------------------- calibrate ----

int cmd_calibrate(const std::string& dataset, const std::string& species_name,
                  std::optional<double> mask_below, const std::string& out_flag) {
    const calib::Species species = calib::parse_species(species_name);
    auto points = calib::read_calibration_points(dataset);
    // the GeV run carries a known low-pressure bias; mask below 20 GPa
    // unless the caller overrides
    if (!mask_below && species == calib::Species::GeV) mask_below = 20.0;
    if (mask_below && *mask_below <= 0.0) mask_below.reset();

    // slope windows reported over the full dataset, before masking
    auto cal = calib::build_calibration(species, points, mask_below);

    std::string out_path = out_flag;
    if (out_path.empty()) out_path = fs::path(dataset).stem().string() + ".cal.kv";
    calib::write_calibration(out_path, cal);

    std::cout << "species = " << calib::species_name(cal.species) << "\n"
              << "range_gpa = [" << format_g17(cal.p_min) << ", " << format_g17(cal.p_max)
              << "]\n"
              << "zpl0_ev = " << format_g17(cal.zpl0)
              << (cal.zpl0_extrapolated ? " (lowest-node energy; 0 GPa not covered)" : "")
              << "\n";
    for (const auto& win : {std::pair{0.0, 20.0}, std::pair{20.0, 40.0}}) {
        try {
            const auto fit = calib::linear_slope(points, win);
            std::cout << "slope[" << win.first << "," << win.second
                      << "] = " << fit.slope_mev_per_gpa << " +- " << fit.stderr_mev_per_gpa
                      << " meV/GPa (n=" << fit.n << ")\n";
        } catch (const Error&) {
            // window without enough points: nothing to report
        }
    }
    std::cout << "-> " << out_path << "\n";
    return 0;
}

// ---------------------------------------------------------------- eos ----

int cmd_eos(std::optional<double> pressure, std::optional<double> ratio,
            const eos::EosParams& params) {
    if (pressure.has_value() == ratio.has_value())
        throw Error(errc::invalid_argument, "give exactly one of --pressure or --ratio");
    eos::LatticeState st;
    if (pressure) {
        st.pressure = *pressure;
        st.x = eos::lattice_ratio_from_pressure(*pressure, params);
    } else {
        st.x = *ratio;
        st.pressure = eos::vinet_pressure(*ratio, params);
    }
    std::cout << "pressure_gpa = " << format_g17(st.pressure) << "\n"
              << "x_ratio = " << format_g17(st.x) << "\n"
              << "a_angstrom = " << format_g17(st.x * params.a0_angstrom) << "\n"
              << "eos = " << (params.label.empty() ? "custom" : params.label) << "\n";
    return 0;
}

// -------------------------------------------------------------- synth ----

int cmd_synth(const std::vector<double>& centers, const std::vector<double>& fwhms,
              const std::vector<double>& amplitudes, double baseline, double noise,
              std::uint64_t seed, const std::string& grid_spec,
              const std::vector<std::string>& meta, const std::string& out_path) {
    if (centers.empty() || centers.size() != fwhms.size() ||
        centers.size() != amplitudes.size())
        throw Error(errc::invalid_argument,
                    "--center/--fwhm/--amplitude must be given once per peak");
    GridSpec grid;
    {
        std::stringstream ss(grid_spec);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(ss, cell, ',')) vals.push_back(parse_number(cell));
        if (vals.size() != 3)
            throw Error(errc::invalid_argument, "--grid expects lo,hi,n");
        grid = {vals[0], vals[1], static_cast<int>(vals[2])};
    }
    std::vector<LorentzianParams> peaks;
    for (size_t i = 0; i < centers.size(); ++i)
        peaks.push_back({centers[i], fwhms[i], amplitudes[i]});
    Spectrum s = synth_spectrum(peaks, baseline, noise, seed, grid);
    for (const auto& kv : meta) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw Error(errc::invalid_argument, "--meta expects key=value");
        s.meta[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    write_spectrum(out_path, s);
    std::cout << "wrote " << out_path << " (" << s.size() << " points)\n";
    return 0;
}

// -------------------------------------------------------- export-plot ----

int cmd_export_fig3(const std::vector<std::string>& calibration_files,
                    const std::vector<std::string>& theory_args, const eos::EosParams& params,
                    double step, const std::string& out_csv, const std::string& svg_flag) {
    exports::Fig3Inputs in;
    in.eos_params = params;
    in.p_step = step;
    for (const auto& f : calibration_files)
        in.calibrations.push_back(calib::read_calibration(f));
    for (const auto& arg : theory_args) {
        const auto [sp, file] = parse_species_file(arg);
        in.theory.emplace_back(sp, calib::read_pressure_energy_table(file));
    }
    std::optional<std::string> svg;
    if (!svg_flag.empty()) svg = svg_flag;
    exports::export_fig3(out_csv, svg, in);
    std::cout << "wrote " << out_csv << (svg ? " and " + *svg : "") << "\n";
    return 0;
}

int cmd_export_fig4(const std::vector<std::string>& trace_args, const std::string& out_csv,
                    const std::string& svg_flag) {
    std::vector<calib::LevelTrace> traces;
    for (const auto& arg : trace_args) {
        const auto [sp, file] = parse_species_file(arg);
        traces.push_back(calib::read_level_trace(file, sp));
    }
    std::optional<std::string> svg;
    if (!svg_flag.empty()) svg = svg_flag;
    exports::export_fig4(out_csv, svg, traces);
    std::cout << "wrote " << out_csv << (svg ? " and " + *svg : "") << "\n";
    return 0;
}

int cmd_export_spectra(const std::vector<std::string>& files,
                       const std::vector<double>& pressures, double height,
                       const std::string& out_csv, const std::string& svg_flag) {
    exports::WaterfallInputs in;
    in.height_gpa = height;
    if (!pressures.empty() && pressures.size() != files.size())
        throw Error(errc::invalid_argument, "--pressure count must match the file count");
    for (size_t i = 0; i < files.size(); ++i) {
        Spectrum s = resample_to_energy(read_spectrum(files[i]));
        double p;
        if (!pressures.empty()) {
            p = pressures[i];
        } else {
            auto it = s.meta.find("pressure_gpa");
            if (it == s.meta.end())
                throw Error(errc::missing_input,
                            files[i] + ": no pressure_gpa metadata (or pass --pressure)");
            p = parse_number(it->second);
        }
        in.spectra.push_back(std::move(s));
        in.pressures_gpa.push_back(p);
    }
    std::optional<std::string> svg;
    if (!svg_flag.empty()) svg = svg_flag;
    exports::export_waterfall(out_csv, svg, in);
    std::cout << "wrote " << out_csv << (svg ? " and " + *svg : "") << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pressure metrology for diamond-anvil-cell PL/Raman spectra"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string config_flag;
    app.add_option("--config", config_flag, "run-config file (default: $DACSPEC_CONFIG)");

    // fit
    auto* fit = app.add_subcommand("fit", "fit Lorentzian peaks in spectra");
    std::vector<std::string> fit_files;
    std::string fit_peaks_mode = "auto", fit_out = ".", fit_cal;
    int fit_parallelism = 0;
    fit->add_option("files", fit_files, "spectrum CSV files")->required()->expected(-1);
    fit->add_option("--peaks", fit_peaks_mode, "auto|1|2 (default auto)")
        ->check(CLI::IsMember({"auto", "1", "2"}));
    fit->add_option("--out", fit_out, "output directory");
    fit->add_option("--calibration", fit_cal, "ZPL calibration: also report pressure");
    fit->add_option("--parallelism", fit_parallelism, "worker threads");

    // pressure
    auto* pressure = app.add_subcommand("pressure", "pressure from a spectral feature");
    pressure->require_subcommand(1);
    double feat_ruby = 0.0, feat_raman = 0.0, feat_zpl = 0.0, feature_sigma = 0.0;
    std::string scales_flag, pressure_out, zpl_species = "siv", zpl_cal_flag;
    auto* ruby = pressure->add_subcommand("ruby", "from the ruby R1 line (nm)");
    ruby->add_option("lambda_nm", feat_ruby, "line position in nm")->required();
    auto* raman = pressure->add_subcommand("raman", "from the anvil Raman edge (cm-1)");
    raman->add_option("nu_cm1", feat_raman, "edge position in cm-1")->required();
    auto* zpl = pressure->add_subcommand("zpl", "from a G4V ZPL energy (eV)");
    zpl->add_option("energy_ev", feat_zpl, "ZPL energy in eV")->required();
    zpl->add_option("--species", zpl_species, "siv|gev|snv (default siv)");
    zpl->add_option("--calibration", zpl_cal_flag, "calibration document");
    for (auto* sc : {ruby, raman, zpl}) {
        sc->add_option("--feature-sigma", feature_sigma,
                       "uncertainty of the feature, in its own unit");
        sc->add_option("--out", pressure_out, "output document path");
    }
    ruby->add_option("--scales", scales_flag, "scale-coefficient file");
    raman->add_option("--scales", scales_flag, "scale-coefficient file");

    // calibrate
    auto* calibrate = app.add_subcommand("calibrate", "build a ZPL-vs-pressure calibration");
    std::string cal_dataset, cal_species, cal_out;
    double cal_mask = -1.0;
    calibrate->add_option("dataset", cal_dataset, "CSV of calibration points")->required();
    calibrate->add_option("--species", cal_species, "siv|gev|snv")->required();
    calibrate->add_option("--mask-below", cal_mask,
                          "drop points below this pressure (GPa); 0 disables. "
                          "GeV defaults to 20");
    calibrate->add_option("--out", cal_out, "calibration document path");

    // eos
    auto* eos_cmd = app.add_subcommand("eos", "diamond EOS: pressure <-> lattice ratio");
    double eos_pressure = 0.0, eos_ratio = 0.0;
    std::string eos_params_flag, eos_set_flag;
    auto* opt_p = eos_cmd->add_option("--pressure", eos_pressure, "pressure in GPa");
    auto* opt_x = eos_cmd->add_option("--ratio", eos_ratio, "lattice ratio a/a0");
    eos_cmd->add_option("--params", eos_params_flag, "EOS parameter file");
    eos_cmd->add_option("--set", eos_set_flag, "experiment|theory (default experiment)");

    // synth
    auto* synth = app.add_subcommand("synth", "deterministic synthetic spectrum");
    std::vector<double> sy_centers, sy_fwhms, sy_amplitudes;
    double sy_baseline = 0.0, sy_noise = 0.0;
    std::uint64_t sy_seed = 0;
    std::string sy_grid = "1.6,1.8,200", sy_out = "synthetic.csv";
    std::vector<std::string> sy_meta;
    synth->add_option("--center", sy_centers, "peak center (eV); repeat per peak")->required();
    synth->add_option("--fwhm", sy_fwhms, "peak FWHM (eV); repeat per peak")->required();
    synth->add_option("--amplitude", sy_amplitudes, "peak height; repeat per peak")->required();
    synth->add_option("--baseline", sy_baseline, "constant baseline");
    synth->add_option("--noise", sy_noise, "Gaussian noise sigma");
    synth->add_option("--seed", sy_seed, "noise seed");
    synth->add_option("--grid", sy_grid, "lo,hi,n (default 1.6,1.8,200)");
    synth->add_option("--meta", sy_meta, "extra metadata key=value; repeatable");
    synth->add_option("--out", sy_out, "output spectrum CSV");

    // export-plot
    auto* export_plot = app.add_subcommand("export-plot", "plot-ready CSV (and optional SVG)");
    export_plot->require_subcommand(1);
    std::vector<std::string> ex_cal_files, ex_theory, ex_traces, ex_spectra;
    std::vector<double> ex_pressures;
    std::string ex_out = "export.csv", ex_svg, ex_eos_params, ex_eos_set;
    double ex_step = 2.0, ex_height = 8.0;
    auto* fig3 = export_plot->add_subcommand("fig3", "calibrations + aligned theory vs pressure");
    fig3->add_option("--calibration", ex_cal_files, "calibration documents; repeatable");
    fig3->add_option("--theory", ex_theory, "SPECIES=FILE theory table; repeatable");
    fig3->add_option("--params", ex_eos_params, "EOS parameter file for the x = a/a0 axis");
    fig3->add_option("--set", ex_eos_set, "experiment|theory (default experiment)");
    fig3->add_option("--step", ex_step, "pressure grid step (GPa)");
    auto* fig4 = export_plot->add_subcommand("fig4", "Kohn-Sham level shift transforms");
    fig4->add_option("--trace", ex_traces, "SPECIES=FILE level trace; repeatable")->required();
    auto* spectra_sub = export_plot->add_subcommand("spectra", "waterfall of spectra by pressure");
    spectra_sub->add_option("files", ex_spectra, "spectrum CSV files")->required()->expected(-1);
    spectra_sub->add_option("--pressure", ex_pressures,
                            "pressure per file (GPa); default from metadata");
    spectra_sub->add_option("--height", ex_height, "normalized trace height (GPa units)");
    for (auto* sc : {fig3, fig4, spectra_sub}) {
        sc->add_option("--out", ex_out, "output CSV path");
        sc->add_option("--svg", ex_svg, "also render an SVG to this path");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        const RunConfig cfg = load_config(config_flag);

        if (*fit)
            return cmd_fit(fit_files, fit_peaks_mode, fit_out, fit_cal, fit_parallelism, cfg);

        if (*pressure) {
            const auto scales = load_scales(cfg, scales_flag);
            gauges::PressureEstimate est;
            if (*ruby) est = gauges::ruby_pressure(feat_ruby, scales, feature_sigma);
            else if (*raman) est = gauges::raman_edge_pressure(feat_raman, scales, feature_sigma);
            else {
                const auto species = calib::parse_species(zpl_species);
                const auto cal = load_calibration_for(cfg, zpl_cal_flag, species);
                est = gauges::zpl_pressure(feat_zpl, cal, feature_sigma);
            }
            return cmd_pressure_common(est, cfg.output_dir, pressure_out);
        }

        if (*calibrate) {
            std::optional<double> mask;
            if (calibrate->count("--mask-below")) mask = cal_mask;
            return cmd_calibrate(cal_dataset, cal_species, mask, cal_out);
        }

        if (*eos_cmd) {
            std::optional<double> p, x;
            if (opt_p->count()) p = eos_pressure;
            if (opt_x->count()) x = eos_ratio;
            return cmd_eos(p, x, load_eos(cfg, eos_params_flag, eos_set_flag));
        }

        if (*synth)
            return cmd_synth(sy_centers, sy_fwhms, sy_amplitudes, sy_baseline, sy_noise,
                             sy_seed, sy_grid, sy_meta, sy_out);

        if (*export_plot) {
            if (*fig3)
                return cmd_export_fig3(ex_cal_files, ex_theory,
                                       load_eos(cfg, ex_eos_params, ex_eos_set), ex_step,
                                       ex_out, ex_svg);
            if (*fig4) return cmd_export_fig4(ex_traces, ex_out, ex_svg);
            return cmd_export_spectra(ex_spectra, ex_pressures, ex_height, ex_out, ex_svg);
        }
    } catch (const Error& e) {
        return fail(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

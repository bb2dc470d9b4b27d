#pragma once

#include <optional>
#include <string>
#include <vector>

namespace dacspec {

/// Batch-run configuration. Relative paths are resolved against the
/// directory holding the config file itself. DACSPEC_CONFIG names the
/// default config file.
struct RunConfig {
    std::string scale_coefficients_path;
    std::string eos_params_path;
    std::vector<std::string> calibration_paths;
    std::string output_dir = ".";
    int parallelism = 1;
};

// Keys: scale_coefficients, eos_params, calibrations (comma separated),
// output_dir, parallelism. Referenced files must exist.
RunConfig read_run_config(const std::string& path);

// Config from DACSPEC_CONFIG when set, otherwise defaults.
RunConfig default_run_config();

}  // namespace dacspec

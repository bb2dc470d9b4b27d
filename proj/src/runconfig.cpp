#include "dacspec/runconfig.hpp"

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "dacspec/error.hpp"
#include "dacspec/kvdoc.hpp"

namespace dacspec {

namespace fs = std::filesystem;

namespace {

std::string resolve(const fs::path& base, const std::string& p) {
    fs::path path(p);
    if (path.is_absolute()) return path.string();
    return (base / path).lexically_normal().string();
}

void require_exists(const std::string& p, const std::string& role) {
    if (!fs::exists(p))
        throw Error(errc::missing_input, role + " file '" + p + "' does not exist");
}

}  // namespace

RunConfig read_run_config(const std::string& path) {
    const KeyValueDoc doc = read_kvdoc(path);
    const fs::path base = fs::path(path).parent_path();

    RunConfig cfg;
    if (auto v = doc.get("scale_coefficients")) {
        cfg.scale_coefficients_path = resolve(base, *v);
        require_exists(cfg.scale_coefficients_path, "scale coefficient");
    }
    if (auto v = doc.get("eos_params")) {
        cfg.eos_params_path = resolve(base, *v);
        require_exists(cfg.eos_params_path, "EOS parameter");
    }
    if (auto v = doc.get("calibrations")) {
        std::stringstream ss(*v);
        std::string item;
        while (std::getline(ss, item, ',')) {
            size_t a = item.find_first_not_of(" \t");
            size_t b = item.find_last_not_of(" \t");
            if (a == std::string::npos) continue;
            const std::string trimmed = item.substr(a, b - a + 1);
            cfg.calibration_paths.push_back(resolve(base, trimmed));
            require_exists(cfg.calibration_paths.back(), "calibration");
        }
    }
    if (auto v = doc.get("output_dir")) cfg.output_dir = resolve(base, *v);
    if (auto v = doc.get_number("parallelism")) {
        cfg.parallelism = static_cast<int>(*v);
        if (cfg.parallelism < 1)
            throw Error(errc::invalid_argument, "parallelism must be >= 1");
    }
    return cfg;
}

RunConfig default_run_config() {
    if (const char* env = std::getenv("DACSPEC_CONFIG"); env && *env)
        return read_run_config(env);
    return {};
}

}  // namespace dacspec

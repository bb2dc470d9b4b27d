#include "dacspec/spectrum_io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "dacspec/error.hpp"
#include "dacspec/kvdoc.hpp"

namespace dacspec {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

}  // namespace

Spectrum read_spectrum(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(errc::missing_input, "cannot open '" + path + "'");

    Spectrum s;
    bool have_unit = false;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            const std::string body = trim(t.substr(1));
            auto eq = body.find('=');
            if (eq == std::string::npos) continue;  // free-form comment
            const std::string key = trim(body.substr(0, eq));
            const std::string val = trim(body.substr(eq + 1));
            if (key == "axis_unit") {
                s.axis_unit = parse_axis_unit(val);
                have_unit = true;
            } else if (!key.empty()) {
                s.meta[key] = val;
            }
            continue;
        }
        if (t == "axis,intensity") continue;  // optional column header
        auto comma = t.find(',');
        if (comma == std::string::npos)
            throw Error(errc::parse_error,
                        path + ":" + std::to_string(lineno) + ": expected 'axis,intensity'");
        try {
            s.axis.push_back(parse_number(t.substr(0, comma)));
            s.intensity.push_back(parse_number(t.substr(comma + 1)));
        } catch (const Error& e) {
            throw Error(errc::parse_error,
                        path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (!have_unit)
        throw Error(errc::parse_error, path + ": missing mandatory '# axis_unit=' header");
    if (s.axis.empty()) throw Error(errc::parse_error, path + ": no data rows");
    try {
        validate(s);
    } catch (const Error& e) {
        throw Error(errc::parse_error, path + ": " + e.what());
    }
    return s;
}

void write_spectrum(const std::string& path, const Spectrum& s) {
    validate(s);
    std::ofstream out(path);
    if (!out) throw Error(errc::missing_input, "cannot write '" + path + "'");
    out << "# axis_unit=" << axis_unit_name(s.axis_unit) << "\n";
    for (const auto& kv : s.meta) out << "# " << kv.first << "=" << kv.second << "\n";
    out << "axis,intensity\n";
    for (size_t i = 0; i < s.size(); ++i)
        out << format_g17(s.axis[i]) << "," << format_g17(s.intensity[i]) << "\n";
    if (!out.flush()) throw Error(errc::missing_input, "write failed for '" + path + "'");
}

}  // namespace dacspec

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dacspec {

// Textual key-value document: `key=value` lines, optional `#` comments,
// optional trailing data rows of comma-separated numbers. Used for fit
// results, calibrations, EOS parameter sets and gauge scale coefficients.
struct KeyValueDoc {
    std::vector<std::pair<std::string, std::string>> entries;  // insertion order
    std::vector<std::vector<double>> rows;

    void set(const std::string& key, const std::string& value);
    void set_number(const std::string& key, double value);
    bool has(const std::string& key) const;
    std::optional<std::string> get(const std::string& key) const;

    // Throw Error(parse_error/missing_input) on absent or malformed values.
    std::string require(const std::string& key) const;
    double require_number(const std::string& key) const;
    std::optional<double> get_number(const std::string& key) const;
};

// Round-trip-exact formatting for doubles (17 significant digits).
std::string format_g17(double v);

double parse_number(const std::string& text);  // strict: full token must parse

KeyValueDoc read_kvdoc(const std::string& path);
void write_kvdoc(const std::string& path, const KeyValueDoc& doc);

}  // namespace dacspec

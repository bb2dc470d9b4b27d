#include "dacspec/kvdoc.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dacspec/error.hpp"

namespace dacspec {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

}  // namespace

void KeyValueDoc::set(const std::string& key, const std::string& value) {
    for (auto& e : entries) {
        if (e.first == key) {
            e.second = value;
            return;
        }
    }
    entries.emplace_back(key, value);
}

void KeyValueDoc::set_number(const std::string& key, double value) {
    set(key, format_g17(value));
}

bool KeyValueDoc::has(const std::string& key) const {
    for (const auto& e : entries)
        if (e.first == key) return true;
    return false;
}

std::optional<std::string> KeyValueDoc::get(const std::string& key) const {
    for (const auto& e : entries)
        if (e.first == key) return e.second;
    return std::nullopt;
}

std::string KeyValueDoc::require(const std::string& key) const {
    auto v = get(key);
    if (!v) throw Error(errc::parse_error, "missing mandatory key '" + key + "'");
    return *v;
}

double KeyValueDoc::require_number(const std::string& key) const {
    return parse_number(require(key));
}

std::optional<double> KeyValueDoc::get_number(const std::string& key) const {
    auto v = get(key);
    if (!v) return std::nullopt;
    return parse_number(*v);
}

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_number(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) throw Error(errc::parse_error, "empty numeric field");
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size())
        throw Error(errc::parse_error, "malformed number '" + t + "'");
    return v;
}

KeyValueDoc read_kvdoc(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(errc::missing_input, "cannot open '" + path + "'");
    KeyValueDoc doc;
    std::string line;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto eq = t.find('=');
        if (eq != std::string::npos) {
            doc.entries.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
            continue;
        }
        // data row: comma-separated numbers
        std::vector<double> row;
        std::stringstream ss(t);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(parse_number(cell));
        if (row.empty()) throw Error(errc::parse_error, path + ": unparseable line '" + t + "'");
        doc.rows.push_back(std::move(row));
    }
    return doc;
}

void write_kvdoc(const std::string& path, const KeyValueDoc& doc) {
    std::ofstream out(path);
    if (!out) throw Error(errc::missing_input, "cannot write '" + path + "'");
    for (const auto& e : doc.entries) out << e.first << "=" << e.second << "\n";
    for (const auto& row : doc.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out << ", ";
            out << format_g17(row[i]);
        }
        out << "\n";
    }
    if (!out.flush()) throw Error(errc::missing_input, "write failed for '" + path + "'");
}

}  // namespace dacspec

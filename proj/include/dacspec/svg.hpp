#pragma once

#include <string>
#include <utility>
#include <vector>

namespace dacspec::svg {

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
    bool markers = false;  // draw point markers in addition to the line
};

/// Minimal static line plot. Thin layer over the CSV exports; nothing here
/// is interactive.
void write_line_plot(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<Series>& series, int width = 760, int height = 540);

}  // namespace dacspec::svg

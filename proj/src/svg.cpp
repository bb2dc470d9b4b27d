#include "dacspec/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "dacspec/error.hpp"

namespace dacspec::svg {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// round the axis range outward to "nice" tick positions
std::vector<double> ticks(double lo, double hi, int target = 5) {
    if (!(hi > lo)) return {lo};
    const double raw = (hi - lo) / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double mult : {1.0, 2.0, 5.0, 10.0}) {
        if (mag * mult >= raw) {
            step = mag * mult;
            break;
        }
    }
    std::vector<double> out;
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-12 * step; t += step)
        out.push_back(t);
    return out;
}

}  // namespace

void write_line_plot(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<Series>& series, int width, int height) {
    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
    double ylo = xlo, yhi = -xlo;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            xlo = std::min(xlo, x);
            xhi = std::max(xhi, x);
            ylo = std::min(ylo, y);
            yhi = std::max(yhi, y);
        }
    if (!(xhi >= xlo))
        throw Error(errc::invalid_argument, "svg plot needs at least one point");
    if (xhi == xlo) xhi = xlo + 1.0;
    if (yhi == ylo) yhi = ylo + 1.0;
    const double ypad = 0.04 * (yhi - ylo);
    ylo -= ypad;
    yhi += ypad;

    const double ml = 72, mr = 24, mt = 36, mb = 52;
    const double pw = width - ml - mr, ph = height - mt - mb;
    auto X = [&](double x) { return ml + (x - xlo) / (xhi - xlo) * pw; };
    auto Y = [&](double y) { return mt + ph - (y - ylo) / (yhi - ylo) * ph; };

    std::ofstream out(path);
    if (!out) throw Error(errc::missing_input, "cannot write '" + path + "'");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
        << title << "</text>\n";

    out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double t : ticks(xlo, xhi)) {
        out << "<line x1=\"" << X(t) << "\" y1=\"" << mt + ph << "\" x2=\"" << X(t) << "\" y2=\""
            << mt + ph + 5 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << X(t) << "\" y=\"" << mt + ph + 18
            << "\" text-anchor=\"middle\">" << fmt(t) << "</text>\n";
    }
    for (double t : ticks(ylo, yhi)) {
        out << "<line x1=\"" << ml - 5 << "\" y1=\"" << Y(t) << "\" x2=\"" << ml << "\" y2=\""
            << Y(t) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << ml - 8 << "\" y=\"" << Y(t) + 4
            << "\" text-anchor=\"end\">" << fmt(t) << "</text>\n";
    }
    out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 10
        << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
    out << "<text x=\"16\" y=\"" << mt + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << mt + ph / 2 << ")\">" << y_label << "</text>\n";

    for (size_t i = 0; i < series.size(); ++i) {
        const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
        const auto& s = series[i];
        if (s.points.empty()) continue;
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [x, y] : s.points) out << fmt(X(x)) << "," << fmt(Y(y)) << " ";
        out << "\"/>\n";
        if (s.markers)
            for (const auto& [x, y] : s.points)
                out << "<circle cx=\"" << fmt(X(x)) << "\" cy=\"" << fmt(Y(y))
                    << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
        const double lx = ml + pw - 150, ly = mt + 16 + 16.0 * static_cast<double>(i);
        out << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 22 << "\" y2=\""
            << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << lx + 28 << "\" y=\"" << ly << "\">" << s.name << "</text>\n";
    }
    out << "</svg>\n";
    if (!out.flush()) throw Error(errc::missing_input, "write failed for '" + path + "'");
}

}  // namespace dacspec::svg

#include "langford/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "langford/errors.hpp"

namespace langford {

namespace {

std::string coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

void write_phase_svg(const std::filesystem::path& file, const std::vector<Vec3>& points,
                     int axis_h, int axis_v, const std::string& label_h,
                     const std::string& label_v) {
    if (points.empty()) throw std::invalid_argument("write_phase_svg: no points");
    if (axis_h < 0 || axis_h > 2 || axis_v < 0 || axis_v > 2)
        throw std::invalid_argument("write_phase_svg: axis index out of range");

    double hmin = points[0][axis_h], hmax = hmin;
    double vmin = points[0][axis_v], vmax = vmin;
    for (const auto& p : points) {
        hmin = std::min(hmin, p[axis_h]);
        hmax = std::max(hmax, p[axis_h]);
        vmin = std::min(vmin, p[axis_v]);
        vmax = std::max(vmax, p[axis_v]);
    }
    double hspan = hmax - hmin, vspan = vmax - vmin;
    if (hspan == 0) hspan = 1;
    if (vspan == 0) vspan = 1;
    const double margin = 0.05;
    hmin -= margin * hspan;
    hmax += margin * hspan;
    vmin -= margin * vspan;
    vmax += margin * vspan;

    const double size = 800.0;
    auto sx = [&](double h) { return size * (h - hmin) / (hmax - hmin); };
    auto sy = [&](double v) { return size * (vmax - v) / (vmax - vmin); };  // y grows downward

    std::ofstream out(file);
    if (!out) throw ParseError("cannot write '" + file.string() + "'");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
           "viewBox=\"0 0 800 800\">\n";
    out << "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n";
    out << "<text x=\"400\" y=\"795\" text-anchor=\"middle\" font-size=\"16\">" << label_h
        << "</text>\n";
    out << "<text x=\"12\" y=\"400\" text-anchor=\"middle\" font-size=\"16\" "
           "transform=\"rotate(-90 12 400)\">"
        << label_v << "</text>\n";
    out << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"0.5\" points=\"";
    for (size_t i = 0; i < points.size(); ++i) {
        if (i) out << " ";
        out << coord(sx(points[i][axis_h])) << "," << coord(sy(points[i][axis_v]));
    }
    out << "\"/>\n</svg>\n";
}

}  // namespace langford

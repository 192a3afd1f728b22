#ifndef ELLSPEC_CLI_PLOT_HPP
#define ELLSPEC_CLI_PLOT_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "../weierstrass_surface.hpp"
#include "json_writer.hpp"

namespace ellspec::cli
{

/// SVG 1.1 line plot of Re and Im of every sheet against the path parameter (two stacked panels).
inline std::string sheets_svg(const std::vector<std::vector<cplx>> &tracks, std::size_t samples)
{
    static const char *colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    const double width = 640.0, panel = 240.0, margin = 40.0;
    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"640\" height=\"560\" viewBox=\"0 0 640 560\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"560\" fill=\"white\"/>\n";
    for (int part = 0; part < 2; ++part) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const auto &t : tracks) {
            for (const cplx z : t) {
                const double v = part == 0 ? z.real() : z.imag();
                if (std::isfinite(v)) {
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
            }
        }
        if (!std::isfinite(lo)) {
            lo = -1.0;
            hi = 1.0;
        }
        if (hi - lo < 1e-12) {
            lo -= 0.5;
            hi += 0.5;
        }
        const double top = margin + part * (panel + margin);
        s += "<g>\n";
        s += "<text x=\"" + format_double(margin) + "\" y=\"" + format_double(top - 8.0) + "\" font-family=\"sans-serif\" font-size=\"12\">"
             + std::string(part == 0 ? "Re mu" : "Im mu") + " [" + format_double(lo) + ", " + format_double(hi) + "]</text>\n";
        s += "<rect x=\"" + format_double(margin) + "\" y=\"" + format_double(top) + "\" width=\"" + format_double(width - 2 * margin)
             + "\" height=\"" + format_double(panel) + "\" fill=\"none\" stroke=\"black\"/>\n";
        for (std::size_t i = 0; i < tracks.size(); ++i) {
            std::string pts;
            for (std::size_t k = 0; k < tracks[i].size(); ++k) {
                const double v = part == 0 ? tracks[i][k].real() : tracks[i][k].imag();
                if (!std::isfinite(v)) {
                    continue;
                }
                const double x = margin + (width - 2 * margin) * (samples > 1 ? static_cast<double>(k) / static_cast<double>(samples - 1) : 0.5);
                const double y = top + panel * (hi - v) / (hi - lo);
                pts += format_double(x) + "," + format_double(y) + " ";
            }
            if (!pts.empty()) {
                pts.pop_back();
            }
            s += "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" + std::string(colors[i % 6]) + "\" points=\"" + pts + "\"/>\n";
        }
        s += "</g>\n";
    }
    s += "</svg>\n";
    return s;
}

/// ASCII OBJ of a surface sampled on an nx x ny grid (row by row); quads with a dropped corner are skipped.
/**
 * A surface that collapses to a single point is written as one vertex.
 */
inline std::string surface_obj(const SurfaceSample &s, std::size_t nx, std::size_t ny)
{
    std::string out = "# ellspec surface\n";
    bool collapsed = true;
    for (std::size_t k = 0; k < s.xyz.size(); ++k) {
        if (s.dropped(k)) {
            continue;
        }
        for (std::size_t j = 0; j < 3; ++j) {
            collapsed = collapsed && s.xyz[k][j] == s.base_xyz[j];
        }
    }
    if (collapsed) {
        out += "v " + format_double(s.base_xyz[0]) + " " + format_double(s.base_xyz[1]) + " " + format_double(s.base_xyz[2]) + "\n";
        return out;
    }
    std::vector<std::size_t> index(s.xyz.size(), 0);
    std::size_t next = 1;
    for (std::size_t k = 0; k < s.xyz.size(); ++k) {
        if (s.dropped(k)) {
            continue;
        }
        index[k] = next++;
        out += "v " + format_double(s.xyz[k][0]) + " " + format_double(s.xyz[k][1]) + " " + format_double(s.xyz[k][2]) + "\n";
    }
    for (std::size_t j = 0; j + 1 < ny; ++j) {
        for (std::size_t i = 0; i + 1 < nx; ++i) {
            const std::size_t a = index[j * nx + i], b = index[j * nx + i + 1];
            const std::size_t c = index[(j + 1) * nx + i + 1], d = index[(j + 1) * nx + i];
            if (a && b && c && d) {
                out += "f " + std::to_string(a) + " " + std::to_string(b) + " " + std::to_string(c) + "\n";
                out += "f " + std::to_string(a) + " " + std::to_string(c) + " " + std::to_string(d) + "\n";
            }
        }
    }
    return out;
}

}

#endif

#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>

#include "attractor.hpp"
#include "errors.hpp"

namespace sfif {

// Minimal static plot: one polyline with framed axes and corner labels
// in an 800x600 viewBox.
inline std::string svg_to_string(const SampledGraph& g) {
    const double W = 800, H = 600;
    const double ml = 60, mr = 20, mt = 20, mb = 40;
    const double pw = W - ml - mr, ph = H - mt - mb;

    double xmin = g.x.front(), xmax = g.x.back();
    auto mm = std::minmax_element(g.y.begin(), g.y.end());
    double ymin = *mm.first, ymax = *mm.second;
    double xr = xmax - xmin, yr = ymax - ymin;
    if (!(xr > 0.0)) xr = 1.0;
    if (!(yr > 0.0)) yr = 1.0;

    auto px = [&](double x) { return ml + (x - xmin) / xr * pw; };
    auto py = [&](double y) { return H - mb - (y - ymin) / yr * ph; };

    char buf[160];
    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 "
           "600\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" "
           "fill=\"white\"/>\n";
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" "
                  "height=\"%.1f\" fill=\"none\" stroke=\"#444\"/>\n",
                  ml, mt, pw, ph);
    svg += buf;
    auto label = [&](double x, double y, const char* anchor, double v) {
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.1f\" y=\"%.1f\" font-size=\"13\" "
                      "font-family=\"sans-serif\" text-anchor=\"%s\" "
                      "fill=\"#222\">%.6g</text>\n",
                      x, y, anchor, v);
        svg += buf;
    };
    label(ml, H - mb + 16, "middle", xmin);
    label(W - mr, H - mb + 16, "middle", xmax);
    label(ml - 6, H - mb, "end", ymin);
    label(ml - 6, mt + 10, "end", ymax);

    svg += "<polyline fill=\"none\" stroke=\"#0b57d0\" stroke-width=\"0.8\" "
           "points=\"";
    for (std::size_t i = 0; i < g.x.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(g.x[i]), py(g.y[i]));
        svg += buf;
    }
    svg += "\"/>\n</svg>\n";
    return svg;
}

inline void save_svg(const std::string& path, const SampledGraph& g) {
    if (g.x.size() < 2) fail(errc::insufficient_samples, "nothing to plot");
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(errc::io_error, "cannot open " + path + " for writing");
    out << svg_to_string(g);
    if (!out) fail(errc::io_error, "short write to " + path);
}

} // namespace sfif

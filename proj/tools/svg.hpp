#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace unisr::cli {

struct SvgPoint {
    double x = 0.0;
    double y = 0.0;
};

struct SvgSeries {
    std::string color;
    std::string label;
    /// Each inner vector is drawn as one polyline.
    std::vector<std::vector<SvgPoint>> pieces;
};

struct SvgPlot {
    double x_min = 0.0;
    double x_max = 1.0;
    double y_min = 0.0;
    double y_max = 1.0;
    std::string x_label;
    std::string y_label;
    std::string title;
    std::vector<SvgSeries> series;
};

/// SVG 1.1 document with a framed plot area, axis labels, tick values at the
/// ends of each axis and a legend of distinct series labels.
void write_svg(std::ostream& os, const SvgPlot& plot, int width = 720, int height = 480);

}  // namespace unisr::cli

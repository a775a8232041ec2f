#include "svg.hpp"

#include <cstdio>
#include <set>

namespace unisr::cli {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

}  // namespace

void write_svg(std::ostream& os, const SvgPlot& plot, int width, int height) {
    const double left = 70.0;
    const double right = 150.0;
    const double top = 40.0;
    const double bottom = 50.0;
    const double pw = width - left - right;
    const double ph = height - top - bottom;
    const double dx = plot.x_max > plot.x_min ? plot.x_max - plot.x_min : 1.0;
    const double dy = plot.y_max > plot.y_min ? plot.y_max - plot.y_min : 1.0;
    const auto sx = [&](double x) { return left + (x - plot.x_min) / dx * pw; };
    const auto sy = [&](double y) { return top + (plot.y_max - y) / dy * ph; };

    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
       << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << num(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" "
       << "font-family=\"sans-serif\" font-size=\"14\">" << escape(plot.title) << "</text>\n";
    os << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw)
       << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

    const auto text = [&](double x, double y, const std::string& anchor, const std::string& s) {
        os << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" text-anchor=\"" << anchor
           << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(s) << "</text>\n";
    };
    text(left, top + ph + 18, "middle", num(plot.x_min));
    text(left + pw, top + ph + 18, "middle", num(plot.x_max));
    text(left - 6, top + ph + 4, "end", num(plot.y_min));
    text(left - 6, top + 4, "end", num(plot.y_max));
    text(left + pw / 2, top + ph + 38, "middle", plot.x_label);
    text(left - 40, top + ph / 2, "middle", plot.y_label);
    if (plot.y_min < 0.0 && plot.y_max > 0.0) {
        os << "<line x1=\"" << num(left) << "\" y1=\"" << num(sy(0.0)) << "\" x2=\""
           << num(left + pw) << "\" y2=\"" << num(sy(0.0))
           << "\" stroke=\"#bbbbbb\" stroke-dasharray=\"4 4\"/>\n";
    }

    for (const auto& s : plot.series) {
        for (const auto& piece : s.pieces) {
            if (piece.size() < 2) continue;
            os << "<polyline fill=\"none\" stroke=\"" << s.color
               << "\" stroke-width=\"1\" points=\"";
            for (std::size_t i = 0; i < piece.size(); ++i) {
                if (i) os << ' ';
                os << num(sx(piece[i].x)) << ',' << num(sy(piece[i].y));
            }
            os << "\"/>\n";
        }
    }

    std::set<std::string> seen;
    double ly = top + 10;
    for (const auto& s : plot.series) {
        if (s.label.empty() || !seen.insert(s.label).second) continue;
        os << "<line x1=\"" << num(left + pw + 15) << "\" y1=\"" << num(ly) << "\" x2=\""
           << num(left + pw + 35) << "\" y2=\"" << num(ly) << "\" stroke=\"" << s.color
           << "\" stroke-width=\"2\"/>\n";
        text(left + pw + 40, ly + 4, "start", s.label);
        ly += 18;
    }
    os << "</svg>\n";
}

}  // namespace unisr::cli

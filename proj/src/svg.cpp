#include "ksr/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "ksr/errors.hpp"

namespace ksr {

namespace {

constexpr double kWidth = 840.0;
constexpr double kHeight = 520.0;
constexpr double kMarginLeft = 64.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 48.0;

std::string escape_xml(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

} // namespace

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::vector<PlotSeries>& series) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.xs.size(); ++i) {
            if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i])) continue;
            xmin = std::min(xmin, s.xs[i]);
            xmax = std::max(xmax, s.xs[i]);
            ymin = std::min(ymin, s.ys[i]);
            ymax = std::max(ymax, s.ys[i]);
        }
    }
    if (!(xmax > xmin)) { xmin -= 1.0; xmax += 1.0; }
    if (!(ymax > ymin)) { ymin -= 1.0; ymax += 1.0; }
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    auto px = [&](double x) { return kMarginLeft + (x - xmin) / (xmax - xmin) * plot_w; };
    auto py = [&](double y) { return kMarginTop + (ymax - y) / (ymax - ymin) * plot_h; };

    std::ofstream os(path);
    if (!os) throw precondition_error("cannot write svg: " + path);
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
       << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
       << "font-family=\"sans-serif\" font-size=\"16\">" << escape_xml(title) << "</text>\n";

    // axes box and ticks
    os << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\"" << plot_w
       << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 5.0;
        const double yv = ymin + (ymax - ymin) * i / 5.0;
        os << "<line x1=\"" << px(xv) << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\""
           << px(xv) << "\" y2=\"" << kMarginTop + plot_h + 5 << "\" stroke=\"#444\"/>\n";
        os << "<text x=\"" << px(xv) << "\" y=\"" << kMarginTop + plot_h + 20
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
           << fmt(xv) << "</text>\n";
        os << "<line x1=\"" << kMarginLeft - 5 << "\" y1=\"" << py(yv) << "\" x2=\""
           << kMarginLeft << "\" y2=\"" << py(yv) << "\" stroke=\"#444\"/>\n";
        os << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << py(yv) + 4
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
           << fmt(yv) << "</text>\n";
    }

    double legend_y = kMarginTop + 14;
    for (const auto& s : series) {
        if (s.markers) {
            for (std::size_t i = 0; i < s.xs.size(); ++i) {
                const double cx = px(s.xs[i]);
                const double cy = py(s.ys[i]);
                os << "<polygon points=\"" << cx << "," << cy - 4 << " " << cx - 4 << ","
                   << cy + 3 << " " << cx + 4 << "," << cy + 3 << "\" fill=\"" << s.color
                   << "\"/>\n";
            }
        } else {
            os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
            if (s.dashed) os << " stroke-dasharray=\"6 4\"";
            os << " points=\"";
            for (std::size_t i = 0; i < s.xs.size(); ++i) {
                if (!std::isfinite(s.ys[i])) continue;
                os << px(s.xs[i]) << "," << py(std::clamp(s.ys[i], ymin, ymax)) << " ";
            }
            os << "\"/>\n";
        }
        os << "<rect x=\"" << kMarginLeft + plot_w - 150 << "\" y=\"" << legend_y - 9
           << "\" width=\"12\" height=\"12\" fill=\"" << s.color << "\"/>\n";
        os << "<text x=\"" << kMarginLeft + plot_w - 132 << "\" y=\"" << legend_y + 2
           << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape_xml(s.label)
           << "</text>\n";
        legend_y += 18;
    }
    os << "</svg>\n";
}

} // namespace ksr

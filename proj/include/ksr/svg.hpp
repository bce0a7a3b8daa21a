#pragma once

#include <string>
#include <vector>

namespace ksr {

struct PlotSeries {
    std::string label;
    std::vector<double> xs;
    std::vector<double> ys;
    std::string color = "#1f77b4";
    bool dashed = false;
    bool markers = false; // triangles instead of a line
};

// Minimal static line plot; output is standalone valid XML.
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::vector<PlotSeries>& series);

} // namespace ksr

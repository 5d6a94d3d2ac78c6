#pragma once

#include <string>
#include <vector>

namespace liouville::cli {

struct PlotSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

/// Minimal line chart writer: axes, ticks, polylines, legend, and the data
/// embedded as CSV in a <desc> element.  log_y plots log10|y|.
void write_svg_chart(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<PlotSeries>& series, bool log_y = false);

}  // namespace liouville::cli

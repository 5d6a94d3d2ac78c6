#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "config.hpp"

namespace liouville::cli {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                         "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

void write_svg_chart(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<PlotSeries>& series, bool log_y) {
    constexpr double W = 640, H = 400;
    constexpr double ML = 70, MR = 20, MT = 40, MB = 50;

    auto ty = [&](double y) { return log_y ? std::log10(std::max(std::abs(y), 1e-300)) : y; };

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const PlotSeries& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, ty(s.y[i]));
            ymax = std::max(ymax, ty(s.y[i]));
        }
    }
    if (!(xmax > xmin)) xmax = xmin + 1.0;
    if (!(ymax > ymin)) ymax = ymin + 1.0;
    const double xpad = 0.02 * (xmax - xmin), ypad = 0.05 * (ymax - ymin);
    xmin -= xpad;
    xmax += xpad;
    ymin -= ypad;
    ymax += ypad;

    auto px = [&](double x) { return ML + (x - xmin) / (xmax - xmin) * (W - ML - MR); };
    auto py = [&](double y) { return H - MB - (ty(y) - ymin) / (ymax - ymin) * (H - MT - MB); };

    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path + " for writing");
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << W << ' ' << H
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<desc>\n" << x_label;
    for (const PlotSeries& s : series) os << ',' << s.name;
    os << '\n';
    std::size_t rows = 0;
    for (const PlotSeries& s : series) rows = std::max(rows, s.x.size());
    for (std::size_t i = 0; i < rows; ++i) {
        if (i < series[0].x.size()) os << fmt(series[0].x[i]);
        for (const PlotSeries& s : series) {
            os << ',';
            if (i < s.y.size()) os << fmt(s.y[i]);
        }
        os << '\n';
    }
    os << "</desc>\n";

    os << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title
       << "</text>\n";
    os << "<line x1=\"" << ML << "\" y1=\"" << H - MB << "\" x2=\"" << W - MR << "\" y2=\""
       << H - MB << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ML << "\" y1=\"" << MT << "\" x2=\"" << ML << "\" y2=\"" << H - MB
       << "\" stroke=\"black\"/>\n";

    for (int t = 0; t <= 4; ++t) {
        const double xv = xmin + (xmax - xmin) * t / 4.0;
        const double yv = ymin + (ymax - ymin) * t / 4.0;
        os << "<text x=\"" << px(xv) << "\" y=\"" << H - MB + 18
           << "\" text-anchor=\"middle\">" << fmt(xv) << "</text>\n";
        os << "<text x=\"" << ML - 8 << "\" y=\"" << H - MB - (H - MT - MB) * t / 4.0 + 4
           << "\" text-anchor=\"end\">" << fmt(yv) << "</text>\n";
    }
    os << "<text x=\"" << (ML + W - MR) / 2 << "\" y=\"" << H - 12
       << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
    os << "<text x=\"16\" y=\"" << (MT + H - MB) / 2
       << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << (MT + H - MB) / 2 << ")\">"
       << (log_y ? "log10 |" + y_label + "|" : y_label) << "</text>\n";

    int color = 0;
    double legend_y = MT + 4;
    for (const PlotSeries& s : series) {
        os << "<polyline fill=\"none\" stroke=\"" << kColors[color % 8]
           << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            os << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i])) << ' ';
        }
        os << "\"/>\n";
        os << "<text x=\"" << W - MR - 140 << "\" y=\"" << legend_y << "\" fill=\""
           << kColors[color % 8] << "\">" << s.name << "</text>\n";
        legend_y += 16;
        ++color;
    }
    os << "</svg>\n";
    if (!os) throw IoError("failed writing " + path);
}

}  // namespace liouville::cli

// Deterministic SVG line plots: fixed 800x600 viewBox, 1-2-5 tick ladder,
// and series emitted as polylines whose point list carries the data values
// verbatim (the viewport mapping lives in a group transform).
#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace viscodiff {

struct PlotSeries {
    std::string label;
    std::span<const double> x;
    std::span<const double> y;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<PlotSeries> series;
};

void write_line_plot(std::ostream& os, const PlotSpec& spec);
void write_line_plot_file(const std::string& path, const PlotSpec& spec);

// 1-2-5 ladder tick positions covering [lo, hi]; deterministic.
std::vector<double> nice_ticks(double lo, double hi, int target_count = 6);

}  // namespace viscodiff

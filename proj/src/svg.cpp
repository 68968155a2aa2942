#include "viscodiff/svg.hpp"

#include "viscodiff/csv.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace viscodiff {

namespace {

constexpr int kWidth = 800;
constexpr int kHeight = 600;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 25.0;
constexpr double kMarginTop = 45.0;
constexpr double kMarginBottom = 55.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void include(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }

    void widen_if_degenerate() {
        if (lo > hi) {  // no finite data at all
            lo = 0.0;
            hi = 1.0;
        } else if (lo == hi) {
            const double pad = std::max(1.0, std::abs(lo)) * 0.5;
            lo -= pad;
            hi += pad;
        }
    }
};

std::string short_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::vector<double> nice_ticks(double lo, double hi, int target_count) {
    std::vector<double> ticks;
    if (!(hi > lo) || target_count < 2) return ticks;
    const double raw = (hi - lo) / (target_count - 1);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    double step;
    if (norm <= 1.5)
        step = 1.0;
    else if (norm <= 3.5)
        step = 2.0;
    else if (norm <= 7.5)
        step = 5.0;
    else
        step = 10.0;
    step *= mag;
    const double first = std::ceil(lo / step - 1e-9) * step;
    for (double t = first; t <= hi + 1e-9 * step; t += step) {
        // snap values that should be exact zeros
        ticks.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
    }
    return ticks;
}

void write_line_plot(std::ostream& os, const PlotSpec& spec) {
    Range rx, ry;
    for (const auto& s : spec.series) {
        for (double v : s.x) rx.include(v);
        for (double v : s.y) ry.include(v);
    }
    rx.widen_if_degenerate();
    ry.widen_if_degenerate();

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    const double sx = plot_w / (rx.hi - rx.lo);
    const double sy = plot_h / (ry.hi - ry.lo);
    const double tx = kMarginLeft - rx.lo * sx;
    const double ty = kMarginTop + ry.hi * sy;
    const auto px = [&](double x) { return kMarginLeft + (x - rx.lo) * sx; };
    const auto py = [&](double y) { return kMarginTop + (ry.hi - y) * sy; };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kWidth << " " << kHeight
       << "\" width=\"" << kWidth << "\" height=\"" << kHeight << "\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
       << "font-family=\"sans-serif\" font-size=\"16\">" << xml_escape(spec.title)
       << "</text>\n";

    // frame and ticks
    os << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\"" << plot_w
       << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double t : nice_ticks(rx.lo, rx.hi)) {
        const double x = px(t);
        os << "<line x1=\"" << x << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\"" << x
           << "\" y2=\"" << kMarginTop + plot_h + 5 << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << x << "\" y=\"" << kMarginTop + plot_h + 20
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
           << short_num(t) << "</text>\n";
    }
    for (double t : nice_ticks(ry.lo, ry.hi)) {
        const double y = py(t);
        os << "<line x1=\"" << kMarginLeft - 5 << "\" y1=\"" << y << "\" x2=\"" << kMarginLeft
           << "\" y2=\"" << y << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << y + 4
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
           << short_num(t) << "</text>\n";
    }
    os << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
       << xml_escape(spec.x_label) << "</text>\n";
    os << "<text x=\"18\" y=\"" << kMarginTop + plot_h / 2
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
       << "transform=\"rotate(-90 18 " << kMarginTop + plot_h / 2 << ")\">"
       << xml_escape(spec.y_label) << "</text>\n";

    // data polylines: points carry the raw values, the transform maps to the
    // viewport, so the plotted series matches the CSV text exactly
    os << "<defs><clipPath id=\"plotclip\"><rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop
       << "\" width=\"" << plot_w << "\" height=\"" << plot_h << "\"/></clipPath></defs>\n";
    os << "<g clip-path=\"url(#plotclip)\">\n";
    int color = 0;
    for (const auto& s : spec.series) {
        if (s.x.empty()) continue;
        os << "<g transform=\"translate(" << format_double(tx) << " " << format_double(ty)
           << ") scale(" << format_double(sx) << " " << format_double(-sy) << ")\">\n";
        os << "<polyline fill=\"none\" stroke=\"" << kPalette[color % 6]
           << "\" stroke-width=\"1.5\" vector-effect=\"non-scaling-stroke\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (i) os << ' ';
            os << format_double(s.x[i]) << ',' << format_double(s.y[i]);
        }
        os << "\"/>\n</g>\n";
        ++color;
    }
    os << "</g>\n";

    // legend
    int row = 0;
    for (const auto& s : spec.series) {
        if (s.label.empty()) {
            ++row;
            continue;
        }
        const double ly = kMarginTop + 16.0 + 18.0 * row;
        os << "<line x1=\"" << kWidth - kMarginRight - 150 << "\" y1=\"" << ly - 4 << "\" x2=\""
           << kWidth - kMarginRight - 125 << "\" y2=\"" << ly - 4 << "\" stroke=\""
           << kPalette[row % 6] << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << kWidth - kMarginRight - 118 << "\" y=\"" << ly
           << "\" font-family=\"sans-serif\" font-size=\"12\">" << xml_escape(s.label)
           << "</text>\n";
        ++row;
    }

    os << "</svg>\n";
}

void write_line_plot_file(const std::string& path, const PlotSpec& spec) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("svg: cannot open '" + path + "' for writing");
    write_line_plot(os, spec);
    if (!os.flush()) throw std::runtime_error("svg: write to '" + path + "' failed");
}

}  // namespace viscodiff

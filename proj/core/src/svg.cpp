#include "itrader/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace itrader {

namespace {

constexpr int kWidth = 860;
constexpr int kHeight = 420;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 50;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&') out += "&amp;";
        else if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else out += c;
    }
    return out;
}

}  // namespace

void write_line_plot_svg(const std::string& path, const std::string& title,
                         const std::vector<LineSeries>& series) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);

    double lo = 0.0, hi = 0.0;
    std::size_t n = 0;
    for (const LineSeries& s : series) {
        n = std::max(n, s.y.size());
        for (double v : s.y) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (hi <= lo) hi = lo + 1.0;
    if (n < 2) n = 2;

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    auto sx = [&](double i) { return kMarginLeft + plot_w * i / static_cast<double>(n - 1); };
    auto sy = [&](double v) { return kMarginTop + plot_h * (hi - v) / (hi - lo); };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
        << "font-family=\"sans-serif\">" << escape(title) << "</text>\n";

    // Axes and horizontal grid.
    for (int g = 0; g <= 4; ++g) {
        double v = lo + (hi - lo) * g / 4.0;
        double y = sy(v);
        out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << fmt(y) << "\" x2=\""
            << kWidth - kMarginRight << "\" y2=\"" << fmt(y)
            << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << fmt(y + 4)
            << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << fmt(v)
            << "</text>\n";
    }

    for (std::size_t k = 0; k < series.size(); ++k) {
        const LineSeries& s = series[k];
        if (s.y.empty()) continue;
        const char* color = kPalette[k % 6];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.y.size(); ++i)
            out << fmt(sx(static_cast<double>(i))) << "," << fmt(sy(s.y[i])) << " ";
        out << "\"/>\n";
        out << "<text x=\"" << kMarginLeft + 8 << "\" y=\"" << kMarginTop + 16 + 16 * k
            << "\" font-size=\"12\" font-family=\"sans-serif\" fill=\"" << color << "\">"
            << escape(s.label) << "</text>\n";
    }
    out << "</svg>\n";
}

void write_bar_plot_svg(const std::string& path, const std::string& title,
                        const std::vector<std::string>& labels,
                        const std::vector<double>& values) {
    if (labels.size() != values.size())
        throw std::invalid_argument("write_bar_plot_svg: label/value mismatch");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);

    double lo = 0.0, hi = 0.0;
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi <= lo) hi = lo + 1.0;

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    const std::size_t n = std::max<std::size_t>(values.size(), 1);
    const double slot = plot_w / static_cast<double>(n);
    auto sy = [&](double v) { return kMarginTop + plot_h * (hi - v) / (hi - lo); };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
        << "font-family=\"sans-serif\">" << escape(title) << "</text>\n";

    const double zero_y = sy(0.0);
    out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << fmt(zero_y) << "\" x2=\""
        << kWidth - kMarginRight << "\" y2=\"" << fmt(zero_y)
        << "\" stroke=\"#888888\" stroke-width=\"1\"/>\n";

    for (std::size_t i = 0; i < values.size(); ++i) {
        const double x = kMarginLeft + slot * i + slot * 0.15;
        const double w = slot * 0.7;
        const double top = std::min(sy(values[i]), zero_y);
        const double h = std::abs(sy(values[i]) - zero_y);
        out << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(w)
            << "\" height=\"" << fmt(std::max(h, 0.5)) << "\" fill=\""
            << (values[i] >= 0 ? "#1f77b4" : "#d62728") << "\"/>\n";
        out << "<text x=\"" << fmt(x + w / 2) << "\" y=\"" << kHeight - kMarginBottom + 14
            << "\" text-anchor=\"end\" font-size=\"10\" font-family=\"sans-serif\" "
            << "transform=\"rotate(-45 " << fmt(x + w / 2) << " "
            << kHeight - kMarginBottom + 14 << ")\">" << escape(labels[i]) << "</text>\n";
    }

    for (int g = 0; g <= 4; ++g) {
        double v = lo + (hi - lo) * g / 4.0;
        out << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << fmt(sy(v) + 4)
            << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << fmt(v)
            << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace itrader

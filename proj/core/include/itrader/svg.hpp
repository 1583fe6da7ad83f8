#pragma once

#include <string>
#include <vector>

namespace itrader {

struct LineSeries {
    std::string label;
    std::vector<double> y;  // plotted against 0..n-1
};

// Minimal static plots for report bundles.
void write_line_plot_svg(const std::string& path, const std::string& title,
                         const std::vector<LineSeries>& series);

void write_bar_plot_svg(const std::string& path, const std::string& title,
                        const std::vector<std::string>& labels, const std::vector<double>& values);

}  // namespace itrader

#pragma once

#include <string>
#include <vector>

namespace crowdyn::cli::svg {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

// Polyline plot with linear axes; long series are decimated for drawing.
std::string line_plot(const std::vector<Series>& series, const std::string& title, const std::string& x_label,
                      const std::string& y_label);

// values[row][col] over rows = y samples, cols = x samples, drawn as a
// grey-scale cell map.
std::string heat_map(const std::vector<double>& x, const std::vector<double>& y,
                     const std::vector<std::vector<double>>& values, const std::string& title,
                     const std::string& x_label, const std::string& y_label);

} // namespace crowdyn::cli::svg

#include "crowdyn/cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace crowdyn::cli::svg {

namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 80, kRight = 160, kTop = 40, kBottom = 60;
constexpr std::size_t kMaxPoints = 2000;

const char* const kColours[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Frame {
    double x0, x1, y0, y1;
    double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
    double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

void widen(double& lo, double& hi) {
    if (!(lo < hi)) {
        const double pad = std::max(1.0, std::abs(lo)) * 0.5;
        lo -= pad;
        hi += pad;
    }
}

std::string axes(const Frame& f, const std::string& title, const std::string& xl, const std::string& yl) {
    std::string s;
    const double xa = kLeft, xb = kWidth - kRight, ya = kTop, yb = kHeight - kBottom;
    s += "<rect x=\"" + num(xa) + "\" y=\"" + num(ya) + "\" width=\"" + num(xb - xa) + "\" height=\"" + num(yb - ya) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = f.x0 + (f.x1 - f.x0) * i / 4.0;
        const double yv = f.y0 + (f.y1 - f.y0) * i / 4.0;
        s += "<text x=\"" + num(f.px(xv)) + "\" y=\"" + num(yb + 18) + "\" text-anchor=\"middle\" font-size=\"12\">" +
             num(xv) + "</text>\n";
        s += "<text x=\"" + num(xa - 6) + "\" y=\"" + num(f.py(yv) + 4) + "\" text-anchor=\"end\" font-size=\"12\">" +
             num(yv) + "</text>\n";
    }
    s += "<text x=\"" + num((xa + xb) / 2) + "\" y=\"" + num(kHeight - 15) +
         "\" text-anchor=\"middle\" font-size=\"14\">" + escape(xl) + "</text>\n";
    s += "<text x=\"20\" y=\"" + num((ya + yb) / 2) + "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 20 " +
         num((ya + yb) / 2) + ")\">" + escape(yl) + "</text>\n";
    s += "<text x=\"" + num((xa + xb) / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" + escape(title) +
         "</text>\n";
    return s;
}

std::string header() {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
           "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

} // namespace

std::string line_plot(const std::vector<Series>& series, const std::string& title, const std::string& x_label,
                      const std::string& y_label) {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, s.y[i]);
            y1 = std::max(y1, s.y[i]);
        }
    }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    widen(x0, x1);
    widen(y0, y1);
    const Frame f{x0, x1, y0, y1};

    std::string out = header() + axes(f, title, x_label, y_label);
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const std::size_t stride = std::max<std::size_t>(1, s.x.size() / kMaxPoints);
        std::string pts;
        for (std::size_t i = 0; i < s.x.size(); i += stride) {
            if (!std::isfinite(s.y[i])) continue;
            pts += num(f.px(s.x[i])) + "," + num(f.py(s.y[i])) + " ";
        }
        const char* colour = kColours[k % std::size(kColours)];
        out += "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"1.2\" points=\"" + pts +
               "\"/>\n";
        const double ly = kTop + 16.0 * static_cast<double>(k + 1);
        out += "<line x1=\"" + num(kWidth - kRight + 10) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" +
               num(kWidth - kRight + 30) + "\" y2=\"" + num(ly - 4) + "\" stroke=\"" + colour + "\"/>\n";
        out += "<text x=\"" + num(kWidth - kRight + 34) + "\" y=\"" + num(ly) + "\" font-size=\"12\">" +
               escape(s.label) + "</text>\n";
    }
    return out + "</svg>\n";
}

std::string heat_map(const std::vector<double>& x, const std::vector<double>& y,
                     const std::vector<std::vector<double>>& values, const std::string& title,
                     const std::string& x_label, const std::string& y_label) {
    double x0 = x.empty() ? 0.0 : x.front(), x1 = x.empty() ? 1.0 : x.back();
    double y0 = y.empty() ? 0.0 : y.front(), y1 = y.empty() ? 1.0 : y.back();
    widen(x0, x1);
    widen(y0, y1);
    double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
    for (const auto& row : values) {
        for (double v : row) {
            vmin = std::min(vmin, v);
            vmax = std::max(vmax, v);
        }
    }
    if (!(vmin < vmax)) vmax = vmin + 1.0;
    const Frame f{x0, x1, y0, y1};
    std::string out = header();
    const std::size_t stride = std::max<std::size_t>(1, x.size() / 300);
    const double cell_h = y.size() > 1 ? (f.py(y0) - f.py(y1)) / static_cast<double>(y.size() - 1) : kHeight - kTop - kBottom;
    for (std::size_t r = 0; r < y.size(); ++r) {
        for (std::size_t c = 0; c < x.size(); c += stride) {
            const double xa = f.px(x[c]);
            const double xb = f.px(x[std::min(c + stride, x.size() - 1)]);
            const int shade = static_cast<int>(std::lround(255.0 * (1.0 - (values[r][c] - vmin) / (vmax - vmin))));
            out += "<rect x=\"" + num(xa) + "\" y=\"" + num(f.py(y[r]) - cell_h / 2) + "\" width=\"" +
                   num(std::max(xb - xa, 0.5)) + "\" height=\"" + num(cell_h) + "\" fill=\"rgb(" +
                   std::to_string(shade) + "," + std::to_string(shade) + "," + std::to_string(shade) + ")\"/>\n";
        }
    }
    out += axes(f, title, x_label, y_label);
    out += "<text x=\"" + num(kWidth - kRight + 10) + "\" y=\"" + num(kTop + 16) + "\" font-size=\"12\">black = " +
           num(vmax) + "</text>\n";
    out += "<text x=\"" + num(kWidth - kRight + 10) + "\" y=\"" + num(kTop + 32) + "\" font-size=\"12\">white = " +
           num(vmin) + "</text>\n";
    return out + "</svg>\n";
}

} // namespace crowdyn::cli::svg

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "fracepi/types.hpp"

namespace fracepi::cli {

inline std::string format_double(double x, int significant = 17) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", significant, x);
    return buf;
}

/// Short alpha label used in file names and legends ("1", "0.99", ...).
inline std::string alpha_label(double alpha) { return format_double(alpha, 6); }

/// Trajectory as CSV: `t,Q_S,Q_I[,Q_R],N`, 17 significant digits.
inline std::string trajectory_csv(const Trajectory& traj) {
    static constexpr const char* names[] = {"Q_S", "Q_I", "Q_R"};
    const std::size_t d = traj.dimension();
    std::string out = "t";
    for (std::size_t i = 0; i < d; ++i) {
        out += ',';
        out += i < 3 ? names[i] : ("y" + std::to_string(i));
    }
    out += ",N\n";
    out.reserve(out.size() + traj.size() * (d + 2) * 24);
    for (std::size_t k = 0; k < traj.size(); ++k) {
        out += format_double(traj.times()[k]);
        double total = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            out += ',';
            out += format_double(traj(k, i));
            total += traj(k, i);
        }
        out += ',';
        out += format_double(total);
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// SVG
// ---------------------------------------------------------------------------

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

struct Panel {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
};

inline constexpr int svg_width = 800;
inline constexpr int svg_height = 600;
inline constexpr std::size_t max_points_per_series = 1500;

inline constexpr std::array<const char*, 6> palette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

namespace detail {

inline std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<':
                out += "&lt;";
                break;
            case '>':
                out += "&gt;";
                break;
            case '&':
                out += "&amp;";
                break;
            default:
                out += c;
        }
    }
    return out;
}

inline void render_panel(std::string& svg, const Panel& panel, double x0, double y0, double w, double h) {
    const double left = 60, right = 15, top = 28, bottom = 42;
    const double px = x0 + left, py = y0 + top, pw = w - left - right, ph = h - top - bottom;

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : panel.series) {
        for (auto [x, y] : s.points) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin + 1.0;
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;

    auto sx = [&](double x) { return px + (x - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double y) { return py + ph - (y - ymin) / (ymax - ymin) * ph; };

    svg += "<rect x=\"" + fmt2(px) + "\" y=\"" + fmt2(py) + "\" width=\"" + fmt2(pw) + "\" height=\"" + fmt2(ph) +
           "\" fill=\"none\" stroke=\"#333\"/>\n";
    svg += "<text x=\"" + fmt2(px + pw / 2) + "\" y=\"" + fmt2(y0 + 18) +
           "\" text-anchor=\"middle\" font-size=\"14\">" + escape(panel.title) + "</text>\n";
    svg += "<text x=\"" + fmt2(px + pw / 2) + "\" y=\"" + fmt2(y0 + h - 6) +
           "\" text-anchor=\"middle\" font-size=\"12\">" + escape(panel.x_label) + "</text>\n";
    svg += "<text x=\"" + fmt2(x0 + 14) + "\" y=\"" + fmt2(py + ph / 2) +
           "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 " + fmt2(x0 + 14) + " " +
           fmt2(py + ph / 2) + ")\">" + escape(panel.y_label) + "</text>\n";

    for (int k = 0; k <= 4; ++k) {
        const double fx = xmin + (xmax - xmin) * k / 4.0;
        const double fy = ymin + (ymax - ymin) * k / 4.0;
        svg += "<text x=\"" + fmt2(sx(fx)) + "\" y=\"" + fmt2(py + ph + 14) +
               "\" text-anchor=\"middle\" font-size=\"10\">" + format_double(fx, 4) + "</text>\n";
        svg += "<text x=\"" + fmt2(px - 4) + "\" y=\"" + fmt2(sy(fy) + 3) +
               "\" text-anchor=\"end\" font-size=\"10\">" + format_double(fy, 4) + "</text>\n";
    }

    for (std::size_t s = 0; s < panel.series.size(); ++s) {
        const auto& series = panel.series[s];
        const char* color = palette[s % palette.size()];
        const std::size_t n = series.points.size();
        const std::size_t stride = std::max<std::size_t>(1, (n + max_points_per_series - 1) / max_points_per_series);
        svg += "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"";
        svg += color;
        svg += "\" points=\"";
        for (std::size_t k = 0; k < n; k += stride) {
            svg += fmt2(sx(series.points[k].first)) + "," + fmt2(sy(series.points[k].second)) + " ";
        }
        if (n > 0 && (n - 1) % stride != 0) {
            svg += fmt2(sx(series.points.back().first)) + "," + fmt2(sy(series.points.back().second));
        }
        svg += "\"/>\n";

        const double ly = py + 12 + 14.0 * static_cast<double>(s);
        const double lx = px + pw - 110;
        svg += "<line x1=\"" + fmt2(lx) + "\" y1=\"" + fmt2(ly - 4) + "\" x2=\"" + fmt2(lx + 20) + "\" y2=\"" +
               fmt2(ly - 4) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + fmt2(lx + 25) + "\" y=\"" + fmt2(ly) + "\" font-size=\"11\">" + escape(series.label) +
               "</text>\n";
    }
}

}  // namespace detail

/// Renders panels on a fixed 800x600 canvas in a grid with `columns` columns.
inline std::string render_svg(const std::vector<Panel>& panels, std::size_t columns = 1) {
    columns = std::max<std::size_t>(1, std::min(columns, panels.size()));
    const std::size_t rows = panels.empty() ? 1 : (panels.size() + columns - 1) / columns;
    const double cw = static_cast<double>(svg_width) / static_cast<double>(columns);
    const double ch = static_cast<double>(svg_height) / static_cast<double>(rows);

    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n";
    svg += "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
    for (std::size_t p = 0; p < panels.size(); ++p) {
        const double x0 = cw * static_cast<double>(p % columns);
        const double y0 = ch * static_cast<double>(p / columns);
        detail::render_panel(svg, panels[p], x0, y0, cw, ch);
    }
    svg += "</svg>\n";
    return svg;
}

inline Series time_series(const Trajectory& traj, std::size_t component, std::string label) {
    Series s{std::move(label), {}};
    s.points.reserve(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) s.points.emplace_back(traj.times()[k], traj(k, component));
    return s;
}

/// Q_I plotted against Q_S.
inline Series phase_series(const Trajectory& traj, std::string label) {
    Series s{std::move(label), {}};
    s.points.reserve(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) s.points.emplace_back(traj(k, 0), traj(k, 1));
    return s;
}

}  // namespace fracepi::cli

#pragma once

// Static SVG line charts for telemetry time series: the three body-rate
// components or the three applied-moment components against time. Output is
// plain SVG 1.1 text with no external references, and byte-identical for
// identical input.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "detumble/errors.hpp"
#include "detumble/telemetry.hpp"

namespace detumble {

enum class PlotChannels { rates, moments };

namespace plot_detail {

// Canvas geometry [px]. The wide right margin hosts the legend.
inline constexpr double canvas_w = 860.0;
inline constexpr double canvas_h = 480.0;
inline constexpr double margin_left = 72.0;
inline constexpr double margin_right = 150.0;
inline constexpr double margin_top = 28.0;
inline constexpr double margin_bottom = 52.0;

inline constexpr std::array<const char*, 3> series_colors{"#c0392b", "#27ae60", "#2980b9"};

inline std::string coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

} // namespace plot_detail

// Render one chart of the selected channel set. Requires at least two
// records (a single point has no time extent to draw).
inline void emit_plot(const SimResult& result, PlotChannels channels, std::ostream& sink) {
    using namespace plot_detail;
    if (result.records.size() < 2)
        throw IoError("need at least two telemetry records to plot");

    const bool rates = channels == PlotChannels::rates;
    const std::array<const char*, 3> names =
        rates ? std::array<const char*, 3>{"p", "q", "r"}
              : std::array<const char*, 3>{"L", "M", "N"};
    const char* y_label = rates ? "angular rate [rad/s]" : "control moment [N*m]";
    auto component = [rates](const TelemetryRecord& rec, int i) {
        const Vec3& v = rates ? rec.omega_body : rec.moment_applied;
        return i == 0 ? v.x : i == 1 ? v.y : v.z;
    };

    double t_min = result.records.front().t;
    double t_max = t_min;
    double y_min = component(result.records.front(), 0);
    double y_max = y_min;
    for (const TelemetryRecord& rec : result.records) {
        t_min = std::min(t_min, rec.t);
        t_max = std::max(t_max, rec.t);
        for (int i = 0; i < 3; ++i) {
            y_min = std::min(y_min, component(rec, i));
            y_max = std::max(y_max, component(rec, i));
        }
    }
    if (!(t_max > t_min))
        t_max = t_min + 1.0;
    // Pad the value range so extremes do not sit on the frame; a flat series
    // gets a unit band around it.
    double pad = 0.05 * (y_max - y_min);
    if (!(pad > 0.0))
        pad = 1.0;
    y_min -= pad;
    y_max += pad;

    const double plot_w = canvas_w - margin_left - margin_right;
    const double plot_h = canvas_h - margin_top - margin_bottom;
    auto x_of = [&](double t) { return margin_left + (t - t_min) / (t_max - t_min) * plot_w; };
    auto y_of = [&](double v) { return margin_top + (y_max - v) / (y_max - y_min) * plot_h; };

    sink << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << (int)canvas_w
         << "\" height=\"" << (int)canvas_h << "\" viewBox=\"0 0 " << (int)canvas_w << " "
         << (int)canvas_h << "\">\n";
    sink << "<rect width=\"" << (int)canvas_w << "\" height=\"" << (int)canvas_h
         << "\" fill=\"white\"/>\n";
    sink << "<rect x=\"" << coord(margin_left) << "\" y=\"" << coord(margin_top) << "\" width=\""
         << coord(plot_w) << "\" height=\"" << coord(plot_h)
         << "\" fill=\"none\" stroke=\"#444444\"/>\n";

    // Axis ticks and grid labels, five per axis.
    for (int i = 0; i <= 4; ++i) {
        double f = (double)i / 4.0;
        double tx = x_of(t_min + f * (t_max - t_min));
        double by = margin_top + plot_h;
        sink << "<line x1=\"" << coord(tx) << "\" y1=\"" << coord(by) << "\" x2=\"" << coord(tx)
             << "\" y2=\"" << coord(by + 6.0) << "\" stroke=\"#444444\"/>\n";
        sink << "<text x=\"" << coord(tx) << "\" y=\"" << coord(by + 22.0)
             << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">"
             << tick_label(t_min + f * (t_max - t_min)) << "</text>\n";

        double vy = y_of(y_min + f * (y_max - y_min));
        sink << "<line x1=\"" << coord(margin_left - 6.0) << "\" y1=\"" << coord(vy) << "\" x2=\""
             << coord(margin_left) << "\" y2=\"" << coord(vy) << "\" stroke=\"#444444\"/>\n";
        sink << "<text x=\"" << coord(margin_left - 10.0) << "\" y=\"" << coord(vy + 4.0)
             << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">"
             << tick_label(y_min + f * (y_max - y_min)) << "</text>\n";
    }

    // Dashed zero line when zero is inside the value range.
    if (y_min < 0.0 && y_max > 0.0) {
        double zy = y_of(0.0);
        sink << "<line x1=\"" << coord(margin_left) << "\" y1=\"" << coord(zy) << "\" x2=\""
             << coord(margin_left + plot_w) << "\" y2=\"" << coord(zy)
             << "\" stroke=\"#999999\" stroke-dasharray=\"5,4\"/>\n";
    }

    for (int i = 0; i < 3; ++i) {
        sink << "<polyline fill=\"none\" stroke=\"" << series_colors[(size_t)i]
             << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (const TelemetryRecord& rec : result.records) {
            if (!first)
                sink << ' ';
            first = false;
            sink << coord(x_of(rec.t)) << ',' << coord(y_of(component(rec, i)));
        }
        sink << "\"/>\n";
    }

    // Legend, to the right of the plot frame.
    for (int i = 0; i < 3; ++i) {
        double ly = margin_top + 16.0 + 22.0 * (double)i;
        double lx = margin_left + plot_w + 18.0;
        sink << "<line x1=\"" << coord(lx) << "\" y1=\"" << coord(ly) << "\" x2=\""
             << coord(lx + 26.0) << "\" y2=\"" << coord(ly) << "\" stroke=\""
             << series_colors[(size_t)i] << "\" stroke-width=\"1.5\"/>\n";
        sink << "<text x=\"" << coord(lx + 32.0) << "\" y=\"" << coord(ly + 4.0)
             << "\" font-family=\"sans-serif\" font-size=\"12\">" << names[(size_t)i]
             << "</text>\n";
    }

    sink << "<text x=\"" << coord(margin_left + plot_w / 2.0) << "\" y=\""
         << coord(canvas_h - 14.0)
         << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">time [s]"
         << "</text>\n";
    sink << "<text x=\"18\" y=\"" << coord(margin_top + plot_h / 2.0)
         << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" "
         << "transform=\"rotate(-90 18 " << coord(margin_top + plot_h / 2.0) << ")\">" << y_label
         << "</text>\n";
    sink << "</svg>\n";
    if (!sink)
        throw IoError("SVG plot write failed");
}

} // namespace detumble

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "mcphy/common.hpp"
#include "mcphy/harness.hpp"

namespace mcphy {

/*
 * Renders sweep results as a self-contained SVG: transmit SNR on a linear
 * x axis, bit-error rate on a log y axis, one polyline per scheme/pulse
 * series.  Points with zero measured errors have no log-scale position and
 * are left out of their series.
 */

namespace detail {

inline std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

inline std::string svg_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&') out += "&amp;";
        else if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else out += c;
    }
    return out;
}

}  // namespace detail

inline std::string render_ber_plot(const std::vector<BerRecord>& records,
                                   const std::string& title = "Bit error rate") {
    // Series keyed by scheme plus pulse name when one is in play.
    std::map<std::string, std::vector<const BerRecord*>> series;
    double x_min = 0.0, x_max = 1.0, ber_min = 1.0, ber_max = 0.0;
    for (const BerRecord& r : records) {
        std::string key = r.scheme;
        if (r.filter != "none" && !r.filter.empty()) key += " / " + r.filter;
        series[key].push_back(&r);
        if (r.ber <= 0.0) continue;
        ber_min = std::min(ber_min, r.ber);
        ber_max = std::max(ber_max, r.ber);
    }
    bool any_x = false;
    for (const BerRecord& r : records) {  // zero-error points still widen the x axis
        if (!any_x) {
            x_min = x_max = r.snr_db;
            any_x = true;
        } else {
            x_min = std::min(x_min, r.snr_db);
            x_max = std::max(x_max, r.snr_db);
        }
    }
    if (x_max <= x_min) x_max = x_min + 1.0;
    if (ber_max <= 0.0) {  // nothing plottable; keep a sane empty frame
        ber_min = 1e-6;
        ber_max = 1.0;
    }

    const int decade_hi = static_cast<int>(std::ceil(std::log10(ber_max)));
    const int decade_lo = static_cast<int>(std::floor(std::log10(ber_min)));
    const double y_top = std::min(0, decade_hi);        // log10 scale, capped at 1.0
    double y_bot = static_cast<double>(decade_lo);
    if (y_bot >= y_top) y_bot = y_top - 1.0;

    const double width = 860.0, height = 560.0;
    const double ml = 80.0, mr = 210.0, mt = 40.0, mb = 60.0;
    const double pw = width - ml - mr, ph = height - mt - mb;
    auto x_of = [&](double snr) { return ml + pw * (snr - x_min) / (x_max - x_min); };
    auto y_of = [&](double ber) {
        const double l = std::log10(ber);
        return mt + ph * (y_top - l) / (y_top - y_bot);
    };

    std::string svg;
    char buf[512];
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"860\" height=\"560\" "
           "viewBox=\"0 0 860 560\">\n";
    svg += "<rect width=\"860\" height=\"560\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.1f\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" "
                  "text-anchor=\"middle\">%s</text>\n",
                  ml + pw / 2.0, detail::svg_escape(title).c_str());
    svg += buf;

    // Decade grid and y tick labels.
    for (int d = decade_lo; d <= static_cast<int>(y_top); ++d) {
        const double y = y_of(std::pow(10.0, d));
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#dddddd\"/>\n",
                      ml, y, ml + pw, y);
        svg += buf;
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"12\" "
                      "text-anchor=\"end\">1e%d</text>\n",
                      ml - 8.0, y + 4.0, d);
        svg += buf;
    }
    // About eight x ticks on round values.
    const double raw_step = (x_max - x_min) / 8.0;
    double step = std::pow(10.0, std::floor(std::log10(raw_step)));
    if (raw_step / step > 5.0) step *= 5.0;
    else if (raw_step / step > 2.0) step *= 2.0;
    for (double t = std::ceil(x_min / step) * step; t <= x_max + 1e-9; t += step) {
        const double x = x_of(t);
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#dddddd\"/>\n",
                      x, mt, x, mt + ph);
        svg += buf;
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"12\" "
                      "text-anchor=\"middle\">%s</text>\n",
                      x, mt + ph + 18.0, detail::format_number(t).c_str());
        svg += buf;
    }
    // Frame and axis titles.
    std::snprintf(buf, sizeof(buf),
                  "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" "
                  "stroke=\"black\"/>\n",
                  ml, mt, pw, ph);
    svg += buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"13\" "
                  "text-anchor=\"middle\">transmit SNR (dB)</text>\n",
                  ml + pw / 2.0, height - 16.0);
    svg += buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"22\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"13\" "
                  "text-anchor=\"middle\" transform=\"rotate(-90 22 %.1f)\">bit error rate</text>\n",
                  mt + ph / 2.0, mt + ph / 2.0);
    svg += buf;

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    std::size_t idx = 0;
    for (const auto& [name, points] : series) {
        const char* color = palette[idx % (sizeof(palette) / sizeof(palette[0]))];
        std::vector<const BerRecord*> sorted(points);
        std::sort(sorted.begin(), sorted.end(),
                  [](const BerRecord* a, const BerRecord* b) { return a->snr_db < b->snr_db; });
        std::string path;
        for (const BerRecord* r : sorted) {
            if (r->ber <= 0.0) continue;
            std::snprintf(buf, sizeof(buf), "%s%.2f,%.2f", path.empty() ? "" : " ",
                          x_of(r->snr_db), y_of(r->ber));
            path += buf;
        }
        if (!path.empty()) {
            std::snprintf(buf, sizeof(buf),
                          "<polyline points=\"%s\" fill=\"none\" stroke=\"%s\" "
                          "stroke-width=\"1.6\"/>\n",
                          path.c_str(), color);
            svg += buf;
        }
        for (const BerRecord* r : sorted) {
            if (r->ber <= 0.0) continue;
            std::snprintf(buf, sizeof(buf),
                          "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"%s\"/>\n",
                          x_of(r->snr_db), y_of(r->ber), color);
            svg += buf;
        }
        // Legend entry.
        const double ly = mt + 14.0 + 20.0 * static_cast<double>(idx);
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"%s\" "
                      "stroke-width=\"2\"/>\n",
                      ml + pw + 14.0, ly, ml + pw + 40.0, ly, color);
        svg += buf;
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" "
                      "font-size=\"12\">%s</text>\n",
                      ml + pw + 46.0, ly + 4.0, detail::svg_escape(name).c_str());
        svg += buf;
        ++idx;
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace mcphy

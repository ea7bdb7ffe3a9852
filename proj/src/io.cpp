#include "fixpoint/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace fixpoint::io {

namespace {

std::string printf_double(const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
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

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kPaletteSize = 8;

constexpr int kWidth = 800;
constexpr int kHeight = 600;

struct PixelRect {
    double x0, y0, x1, y1;  // drawable area, y grows downward
};

std::string px(double v) { return printf_double("%.2f", v); }

}  // namespace

std::string format_real(double v) { return printf_double("%.17g", v); }

std::string format_short(double v) { return printf_double("%.6g", v); }

void write_file_atomic(const std::string& path, const std::string& contents) {
    std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out += ',';
        out += header[i];
    }
    out += '\n';
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw std::invalid_argument("csv row width does not match the header");
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_real(row[i]);
        }
        out += '\n';
    }
    return out;
}

namespace {

void render_panel(std::string& svg, const ChartPanel& panel, const PixelRect& outer) {
    ChartPanel p = panel;
    if (!p.fixed_bounds) {
        bool any = false;
        double lo_x = 0, hi_x = 0, lo_y = 0, hi_y = 0;
        for (const auto& s : p.series) {
            for (const auto& pt : s.points) {
                if (!std::isfinite(pt[0]) || !std::isfinite(pt[1])) continue;
                if (!any) {
                    lo_x = hi_x = pt[0];
                    lo_y = hi_y = pt[1];
                    any = true;
                } else {
                    lo_x = std::min(lo_x, pt[0]);
                    hi_x = std::max(hi_x, pt[0]);
                    lo_y = std::min(lo_y, pt[1]);
                    hi_y = std::max(hi_y, pt[1]);
                }
            }
        }
        if (!any) throw std::invalid_argument("chart panel has no finite points");
        double pad_x = (hi_x - lo_x) * 0.05 + 1e-12;
        double pad_y = (hi_y - lo_y) * 0.05 + 1e-12;
        p.x_min = lo_x - pad_x;
        p.x_max = hi_x + pad_x;
        p.y_min = lo_y - pad_y;
        p.y_max = hi_y + pad_y;
    }
    if (!(p.x_max > p.x_min) || !(p.y_max > p.y_min))
        throw std::invalid_argument("chart panel bounds are degenerate");

    PixelRect plot{outer.x0 + 62, outer.y0 + 34, outer.x1 - 14, outer.y1 - 46};
    auto map_x = [&](double x) {
        return plot.x0 + (x - p.x_min) / (p.x_max - p.x_min) * (plot.x1 - plot.x0);
    };
    auto map_y = [&](double y) {
        return plot.y1 - (y - p.y_min) / (p.y_max - p.y_min) * (plot.y1 - plot.y0);
    };

    svg += "<rect x=\"" + px(plot.x0) + "\" y=\"" + px(plot.y0) + "\" width=\"" +
           px(plot.x1 - plot.x0) + "\" height=\"" + px(plot.y1 - plot.y0) +
           "\" fill=\"white\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

    for (int i = 0; i <= 4; ++i) {
        double fx = p.x_min + (p.x_max - p.x_min) * i / 4.0;
        double fy = p.y_min + (p.y_max - p.y_min) * i / 4.0;
        double gx = map_x(fx);
        double gy = map_y(fy);
        if (i > 0 && i < 4) {
            svg += "<line x1=\"" + px(gx) + "\" y1=\"" + px(plot.y0) + "\" x2=\"" + px(gx) +
                   "\" y2=\"" + px(plot.y1) + "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
            svg += "<line x1=\"" + px(plot.x0) + "\" y1=\"" + px(gy) + "\" x2=\"" + px(plot.x1) +
                   "\" y2=\"" + px(gy) + "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        }
        svg += "<text x=\"" + px(gx) + "\" y=\"" + px(plot.y1 + 16) +
               "\" font-size=\"11\" text-anchor=\"middle\" fill=\"#333333\">" +
               printf_double("%.3g", fx) + "</text>\n";
        svg += "<text x=\"" + px(plot.x0 - 6) + "\" y=\"" + px(gy + 4) +
               "\" font-size=\"11\" text-anchor=\"end\" fill=\"#333333\">" +
               printf_double("%.3g", fy) + "</text>\n";
    }

    svg += "<text x=\"" + px((plot.x0 + plot.x1) / 2) + "\" y=\"" + px(outer.y0 + 20) +
           "\" font-size=\"14\" text-anchor=\"middle\" fill=\"#111111\">" +
           escape_xml(p.title) + "</text>\n";
    svg += "<text x=\"" + px((plot.x0 + plot.x1) / 2) + "\" y=\"" + px(plot.y1 + 34) +
           "\" font-size=\"12\" text-anchor=\"middle\" fill=\"#111111\">" +
           escape_xml(p.x_label) + "</text>\n";
    svg += "<text x=\"" + px(outer.x0 + 14) + "\" y=\"" + px((plot.y0 + plot.y1) / 2) +
           "\" font-size=\"12\" text-anchor=\"middle\" fill=\"#111111\" transform=\"rotate(-90 " +
           px(outer.x0 + 14) + " " + px((plot.y0 + plot.y1) / 2) + ")\">" +
           escape_xml(p.y_label) + "</text>\n";

    for (const auto& s : p.series) {
        const char* color = kPalette[((s.color % kPaletteSize) + kPaletteSize) % kPaletteSize];
        std::string dash = s.dashed ? " stroke-dasharray=\"5,3\"" : "";
        std::string run;
        int run_count = 0;
        auto flush = [&]() {
            if (run_count >= 2) {
                svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
                       "\" stroke-width=\"1.5\"" + dash + " points=\"" + run + "\"/>\n";
            } else if (run_count == 1) {
                // Isolated point: draw a dot so it is not silently lost.
                auto sep = run.find(',');
                svg += "<circle cx=\"" + run.substr(0, sep) + "\" cy=\"" + run.substr(sep + 1) +
                       "\" r=\"2\" fill=\"" + std::string(color) + "\"/>\n";
            }
            run.clear();
            run_count = 0;
        };
        for (const auto& pt : s.points) {
            bool inside = std::isfinite(pt[0]) && std::isfinite(pt[1]) &&
                          (!p.clip || (pt[0] >= p.x_min && pt[0] <= p.x_max &&
                                       pt[1] >= p.y_min && pt[1] <= p.y_max));
            if (!inside) {
                flush();
                continue;
            }
            if (run_count) run += ' ';
            run += px(map_x(pt[0])) + "," + px(map_y(pt[1]));
            ++run_count;
        }
        flush();
    }

    double ly = plot.y0 + 14;
    for (const auto& s : p.series) {
        if (s.label.empty()) continue;
        const char* color = kPalette[((s.color % kPaletteSize) + kPaletteSize) % kPaletteSize];
        svg += "<line x1=\"" + px(plot.x1 - 96) + "\" y1=\"" + px(ly - 4) + "\" x2=\"" +
               px(plot.x1 - 78) + "\" y2=\"" + px(ly - 4) + "\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"2\"" + (s.dashed ? " stroke-dasharray=\"5,3\"" : "") + "/>\n";
        svg += "<text x=\"" + px(plot.x1 - 72) + "\" y=\"" + px(ly) +
               "\" font-size=\"11\" fill=\"#111111\">" + escape_xml(s.label) + "</text>\n";
        ly += 15;
    }
}

}  // namespace

std::string render_chart(const std::vector<ChartPanel>& panels) {
    if (panels.empty() || panels.size() > 2)
        throw std::invalid_argument("chart needs one or two panels");
    for (const auto& p : panels)
        if (p.series.empty()) throw std::invalid_argument("chart panel has no series");

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
           "viewBox=\"0 0 800 600\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
    if (panels.size() == 1) {
        render_panel(svg, panels[0], PixelRect{0, 0, kWidth, kHeight});
    } else {
        render_panel(svg, panels[0], PixelRect{0, 0, kWidth / 2.0, kHeight});
        render_panel(svg, panels[1], PixelRect{kWidth / 2.0, 0, kWidth, kHeight});
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace fixpoint::io

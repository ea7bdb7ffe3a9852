#pragma once

#include <array>
#include <string>
#include <vector>

namespace fixpoint::io {

/// 17 significant digits: round-trips any double exactly.
std::string format_real(double v);
/// 6 significant digits for human-facing summaries.
std::string format_short(double v);

/// Write contents to path via a temp file and rename, so readers never see a
/// partial file. Parent directories must exist.
void write_file_atomic(const std::string& path, const std::string& contents);

/// Serialize a numeric table; every cell printed with format_real.
std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows);

struct ChartSeries {
    std::string label;  // empty label: drawn but left out of the legend
    std::vector<std::array<double, 2>> points;
    int color = 0;      // palette index, wraps
    bool dashed = false;
};

struct ChartPanel {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<ChartSeries> series;
    bool fixed_bounds = false;  // otherwise fit to the data
    double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
    bool clip = true;           // drop out-of-range points (lines break there)
};

/// Standalone 800x600 SVG with one or two panels side by side. Deterministic
/// for fixed input: fixed-precision coordinates, no timestamps.
/// Throws std::invalid_argument when there is nothing to draw.
std::string render_chart(const std::vector<ChartPanel>& panels);

}  // namespace fixpoint::io

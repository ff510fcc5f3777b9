#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include "errors.hpp"

namespace abe {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream in(line);
    std::string field;
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct Series {
    std::string label;
    bool dashed = false;
    std::vector<std::pair<double, double>> points; // (x, mse)
};

constexpr const char* palette[] = {"#1f6fb4", "#d94f30", "#3d9943", "#8050a0",
                                   "#b58a1f", "#4fa6a6", "#c05f86", "#5c6b70"};

} // namespace

void render_plot(std::istream& csv, std::ostream& svg) {
    std::string line;
    std::vector<std::string> header;
    std::map<std::string, std::size_t> col;
    std::vector<Series> series;
    std::map<std::string, std::size_t> series_index;

    auto series_for = [&](const std::string& label, bool dashed) -> Series& {
        const std::string key = label + (dashed ? "|dashed" : "");
        auto it = series_index.find(key);
        if (it == series_index.end()) {
            it = series_index.emplace(key, series.size()).first;
            series.push_back(Series{label, dashed, {}});
        }
        return series[it->second];
    };

    while (std::getline(csv, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields = split_csv_line(line);
        if (header.empty()) {
            header = fields;
            for (std::size_t i = 0; i < header.size(); ++i)
                col[header[i]] = i;
            require(col.count("seed") && col.count("sweep_value") &&
                        col.count("mse_empirical") && col.count("estimator") &&
                        col.count("loss") && col.count("mse_pred"),
                    ErrorCode::config, "CSV lacks the sweep summary columns");
            continue;
        }
        if (fields.size() < header.size()) continue;
        if (fields[col["seed"]] != "summary") continue;
        const std::string label =
            fields[col["estimator"]] + "/" + fields[col["loss"]];
        const std::string x_text = fields[col["sweep_value"]];
        const std::string mse_text = fields[col["mse_empirical"]];
        const std::string pred_text = fields[col["mse_pred"]];
        char* end = nullptr;
        const double x = std::strtod(x_text.c_str(), &end);
        if (end == x_text.c_str()) continue;
        if (!mse_text.empty() && mse_text.rfind("fail", 0) != 0 &&
            mse_text != "inf") {
            const double y = std::strtod(mse_text.c_str(), nullptr);
            if (y > 0.0 && std::isfinite(y))
                series_for(label, false).points.push_back({x, y});
        }
        if (!pred_text.empty() && pred_text.rfind("fail", 0) != 0 &&
            pred_text != "inf") {
            const double y = std::strtod(pred_text.c_str(), nullptr);
            if (y > 0.0 && std::isfinite(y))
                series_for(label + " (pred)", true).points.push_back({x, y});
        }
    }
    require(!header.empty(), ErrorCode::config, "malformed CSV: no header row");

    for (Series& s : series)
        std::sort(s.points.begin(), s.points.end());

    // frame
    const double width = 760, height = 480;
    const double left = 70, right = 560, top = 30, bottom = 430;

    double xmin = 0.0, xmax = 1.0, ymin_log = -1.0, ymax_log = 1.0;
    bool have_data = false;
    for (const Series& s : series) {
        for (const auto& [x, y] : s.points) {
            if (!have_data) {
                xmin = xmax = x;
                ymin_log = ymax_log = std::log10(y);
                have_data = true;
            } else {
                xmin = std::min(xmin, x);
                xmax = std::max(xmax, x);
                ymin_log = std::min(ymin_log, std::log10(y));
                ymax_log = std::max(ymax_log, std::log10(y));
            }
        }
    }
    if (xmax <= xmin) xmax = xmin + 1.0;
    if (ymax_log <= ymin_log) ymax_log = ymin_log + 1.0;
    ymin_log = std::floor(ymin_log);
    ymax_log = std::ceil(ymax_log);

    auto sx = [&](double x) {
        return left + (x - xmin) / (xmax - xmin) * (right - left);
    };
    auto sy = [&](double y) {
        const double l = std::log10(y);
        return bottom - (l - ymin_log) / (ymax_log - ymin_log) * (bottom - top);
    };

    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
        << height << "\">\n";
    svg << "<rect width=\"" << width << "\" height=\"" << height
        << "\" fill=\"white\"/>\n";
    svg << "<g font-family=\"sans-serif\" font-size=\"12\">\n";

    // axes
    svg << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right
        << "\" y2=\"" << bottom << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left
        << "\" y2=\"" << bottom << "\" stroke=\"black\"/>\n";

    // y ticks at powers of ten
    for (int e = static_cast<int>(ymin_log); e <= static_cast<int>(ymax_log);
         ++e) {
        const double y = sy(std::pow(10.0, e));
        svg << "<line x1=\"" << left - 4 << "\" y1=\"" << fmt(y) << "\" x2=\""
            << left << "\" y2=\"" << fmt(y) << "\" stroke=\"black\"/>\n";
        svg << "<line x1=\"" << left << "\" y1=\"" << fmt(y) << "\" x2=\""
            << right << "\" y2=\"" << fmt(y)
            << "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
        svg << "<text x=\"" << left - 8 << "\" y=\"" << fmt(y + 4)
            << "\" text-anchor=\"end\">1e" << e << "</text>\n";
    }
    // x ticks: six evenly spaced
    for (int i = 0; i <= 5; ++i) {
        const double x = xmin + (xmax - xmin) * i / 5.0;
        svg << "<line x1=\"" << fmt(sx(x)) << "\" y1=\"" << bottom << "\" x2=\""
            << fmt(sx(x)) << "\" y2=\"" << bottom + 4
            << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << fmt(sx(x)) << "\" y=\"" << bottom + 18
            << "\" text-anchor=\"middle\">" << fmt(x) << "</text>\n";
    }
    svg << "<text x=\"" << (left + right) / 2 << "\" y=\"" << bottom + 36
        << "\" text-anchor=\"middle\">sweep value</text>\n";
    svg << "<text x=\"18\" y=\"" << (top + bottom) / 2
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << (top + bottom) / 2 << ")\">MSE</text>\n";

    // series
    std::size_t color_index = 0;
    std::map<std::string, std::string> label_color;
    double legend_y = top + 10;
    for (const Series& s : series) {
        std::string base = s.label;
        const auto pos = base.find(" (pred)");
        if (pos != std::string::npos) base = base.substr(0, pos);
        if (!label_color.count(base)) {
            label_color[base] = palette[color_index % 8];
            ++color_index;
        }
        const std::string& color = label_color[base];
        if (!s.points.empty()) {
            svg << "<polyline fill=\"none\" stroke=\"" << color
                << "\" stroke-width=\"1.5\"";
            if (s.dashed) svg << " stroke-dasharray=\"6,4\"";
            svg << " points=\"";
            for (const auto& [x, y] : s.points)
                svg << fmt(sx(x)) << "," << fmt(sy(y)) << " ";
            svg << "\"/>\n";
            for (const auto& [x, y] : s.points)
                svg << "<circle cx=\"" << fmt(sx(x)) << "\" cy=\"" << fmt(sy(y))
                    << "\" r=\"2.2\" fill=\"" << color << "\"/>\n";
        }
        svg << "<line x1=\"" << right + 16 << "\" y1=\"" << fmt(legend_y - 4)
            << "\" x2=\"" << right + 44 << "\" y2=\"" << fmt(legend_y - 4)
            << "\" stroke=\"" << color << "\" stroke-width=\"1.5\""
            << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n";
        svg << "<text x=\"" << right + 50 << "\" y=\"" << fmt(legend_y) << "\">"
            << s.label << "</text>\n";
        legend_y += 18;
    }
    svg << "</g>\n</svg>\n";
}

} // namespace abe

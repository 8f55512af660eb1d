/*
* Copyright (C) 2026 fracstab contributors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*/
#include "experiment.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace fracstab::cli {

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(std::ostream& os, const CsvTable& table)
{
    for (std::size_t i = 0; i < table.header.size(); ++i)
        os << (i ? "," : "") << table.header[i];
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << format_double(row[i]);
        os << '\n';
    }
}

namespace {

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ','))
        cells.push_back(cell);
    if (!line.empty() && line.back() == ',')
        cells.emplace_back();
    return cells;
}

} // namespace

CsvTable read_csv(std::istream& is)
{
    CsvTable t;
    std::string line;
    if (!std::getline(is, line))
        throw CommandError(exit_config_error, "csv: empty input");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    t.header = split(line);
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        const auto cells = split(line);
        if (cells.size() != t.header.size())
            throw CommandError(exit_config_error, "csv: line " + std::to_string(lineno) + " has " +
                                                      std::to_string(cells.size()) + " cells, expected " +
                                                      std::to_string(t.header.size()));
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) {
            char* end = nullptr;
            errno = 0;
            const double v = std::strtod(c.c_str(), &end);
            if (c.empty() || end != c.c_str() + c.size())
                throw CommandError(exit_config_error, "csv: line " + std::to_string(lineno) + ": bad number '" + c + "'");
            row.push_back(v);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

CsvTable trajectory_table(const OrderRun& run, const std::vector<std::string>& state_labels)
{
    CsvTable t;
    t.header.push_back("t");
    for (const auto& l : state_labels)
        t.header.push_back(l);
    for (const auto& l : run.functional_labels)
        t.header.push_back(l);
    for (const auto& l : run.functional_labels)
        t.header.push_back("dcaputo_" + l);

    double t0 = 0.0, h = 0.0;
    size_t n_steps = 0;
    fs_trajectory_grid(run.traj.get(), &t0, &h, &n_steps);
    const std::size_t dim = fs_trajectory_dimension(run.traj.get());
    std::vector<double> state(dim);
    for (std::size_t k = 0; k <= n_steps; ++k) {
        check(fs_trajectory_state(run.traj.get(), k, state.data()), "trajectory state");
        std::vector<double> row;
        row.reserve(t.header.size());
        row.push_back(t0 + static_cast<double>(k) * h);
        row.insert(row.end(), state.begin(), state.end());
        for (const auto& v : run.functional_values)
            row.push_back(v[k]);
        for (const auto& v : run.functional_caputo)
            row.push_back(v[k]);
        t.rows.push_back(std::move(row));
    }
    return t;
}

namespace {

const char* curve_colour(std::size_t i)
{
    static const char* palette[] = {"#1f4fd1", "#d62728", "#e3b505", "#2ca02c", "#9467bd", "#8c564b"};
    return palette[i % (sizeof palette / sizeof palette[0])];
}

std::string fmt_tick(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

} // namespace

std::string render_svg(const std::vector<OrderRun>& runs, const std::vector<std::string>& state_labels,
                       const std::string& title)
{
    constexpr double panel_w = 420, panel_h = 280, margin_l = 70, margin_r = 20, margin_t = 40, margin_b = 40;
    constexpr std::size_t cols = 2;
    // Thin long trajectories to at most this many points per curve.
    constexpr std::size_t max_points = 1500;

    const std::size_t n_panels = state_labels.size();
    const std::size_t rows = (n_panels + cols - 1) / cols;
    const double cell_w = margin_l + panel_w + margin_r;
    const double cell_h = margin_t + panel_h + margin_b;
    const double width = cols * cell_w;
    const double height = rows * cell_h + 50;

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";

    for (std::size_t p = 0; p < n_panels; ++p) {
        const double ox = static_cast<double>(p % cols) * cell_w + margin_l;
        const double oy = static_cast<double>(p / cols) * cell_h + margin_t + 10;

        double tmin = std::numeric_limits<double>::infinity(), tmax = -tmin;
        double ymin = tmin, ymax = -tmin;
        std::vector<std::vector<std::pair<double, double>>> curves;
        for (const auto& run : runs) {
            double t0 = 0.0, h = 0.0;
            size_t n = 0;
            fs_trajectory_grid(run.traj.get(), &t0, &h, &n);
            std::vector<double> comp(n + 1);
            check(fs_trajectory_component(run.traj.get(), p, comp.data()), "trajectory component");
            const std::size_t stride = std::max<std::size_t>(1, (n + 1) / max_points);
            std::vector<std::pair<double, double>> pts;
            for (std::size_t k = 0; k <= n; k += stride)
                pts.emplace_back(t0 + static_cast<double>(k) * h, comp[k]);
            if ((n % stride) != 0)
                pts.emplace_back(t0 + static_cast<double>(n) * h, comp[n]);
            for (const auto& [t, y] : pts) {
                tmin = std::min(tmin, t);
                tmax = std::max(tmax, t);
                ymin = std::min(ymin, y);
                ymax = std::max(ymax, y);
            }
            curves.push_back(std::move(pts));
        }
        if (curves.empty())
            continue;
        if (ymax - ymin <= 1e-300) {
            ymax += 0.5 * std::max(1.0, std::abs(ymax));
            ymin -= 0.5 * std::max(1.0, std::abs(ymin));
        }
        if (tmax <= tmin)
            tmax = tmin + 1.0;
        auto sx = [&](double t) { return ox + (t - tmin) / (tmax - tmin) * panel_w; };
        auto sy = [&](double y) { return oy + panel_h - (y - ymin) / (ymax - ymin) * panel_h; };

        os << "<g>\n";
        os << "<rect x=\"" << ox << "\" y=\"" << oy << "\" width=\"" << panel_w << "\" height=\"" << panel_h
           << "\" fill=\"none\" stroke=\"black\"/>\n";
        for (int i = 0; i <= 4; ++i) {
            const double fy = ymin + (ymax - ymin) * i / 4.0;
            const double fx = tmin + (tmax - tmin) * i / 4.0;
            os << "<line x1=\"" << ox - 4 << "\" y1=\"" << sy(fy) << "\" x2=\"" << ox << "\" y2=\"" << sy(fy)
               << "\" stroke=\"black\"/>\n";
            os << "<text x=\"" << ox - 6 << "\" y=\"" << sy(fy) + 4 << "\" text-anchor=\"end\">" << fmt_tick(fy)
               << "</text>\n";
            os << "<line x1=\"" << sx(fx) << "\" y1=\"" << oy + panel_h << "\" x2=\"" << sx(fx) << "\" y2=\""
               << oy + panel_h + 4 << "\" stroke=\"black\"/>\n";
            os << "<text x=\"" << sx(fx) << "\" y=\"" << oy + panel_h + 17 << "\" text-anchor=\"middle\">"
               << fmt_tick(fx) << "</text>\n";
        }
        os << "<text x=\"" << ox + panel_w / 2 << "\" y=\"" << oy - 8 << "\" text-anchor=\"middle\" font-size=\"14\">"
           << state_labels[p] << "(t)</text>\n";
        os << "<text x=\"" << ox + panel_w / 2 << "\" y=\"" << oy + panel_h + 33 << "\" text-anchor=\"middle\">t</text>\n";

        for (std::size_t c = 0; c < curves.size(); ++c) {
            os << "<polyline fill=\"none\" stroke=\"" << curve_colour(c) << "\" stroke-width=\"1.5\" points=\"";
            for (const auto& [t, y] : curves[c]) {
                char buf[64];
                std::snprintf(buf, sizeof buf, "%.2f,%.2f ", sx(t), sy(y));
                os << buf;
            }
            os << "\"/>\n";
        }
        os << "</g>\n";
    }

    const double ly = rows * cell_h + 30;
    for (std::size_t c = 0; c < runs.size(); ++c) {
        const double lx = 80 + 140.0 * static_cast<double>(c);
        os << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 30 << "\" y2=\"" << ly << "\" stroke=\""
           << curve_colour(c) << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << lx + 36 << "\" y=\"" << ly + 4 << "\">order " << fmt_tick(runs[c].order) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace fracstab::cli

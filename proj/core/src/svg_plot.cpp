#include "csid/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

namespace csid {

namespace {

constexpr double kWidth = 760.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0, kRight = 30.0, kTop = 44.0, kBottom = 56.0;
constexpr double kPlotW = kWidth - kLeft - kRight;
constexpr double kPlotH = kHeight - kTop - kBottom;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct Axis {
    double lo = 0.0, hi = 1.0;
    bool log = false;

    double to_unit(double v) const {
        if (log) return (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo));
        return (v - lo) / (hi - lo);
    }
};

Axis make_axis(std::vector<double> values, bool log) {
    Axis ax;
    ax.log = log;
    if (log) {
        std::erase_if(values, [](double v) { return !(v > 0.0) || !std::isfinite(v); });
    } else {
        std::erase_if(values, [](double v) { return !std::isfinite(v); });
    }
    if (values.empty()) values = {log ? 1.0 : 0.0};
    ax.lo = *std::min_element(values.begin(), values.end());
    ax.hi = *std::max_element(values.begin(), values.end());
    if (log) {
        ax.lo = std::pow(10.0, std::floor(std::log10(ax.lo)));
        ax.hi = std::pow(10.0, std::ceil(std::log10(ax.hi)));
        if (ax.lo == ax.hi) ax.hi *= 10.0;
    } else {
        if (ax.lo == ax.hi) {
            ax.lo -= 1.0;
            ax.hi += 1.0;
        }
        const double pad = 0.05 * (ax.hi - ax.lo);
        if (ax.lo != 0.0) ax.lo -= pad;
        ax.hi += pad;
    }
    return ax;
}

std::vector<double> axis_ticks(const Axis& ax) {
    std::vector<double> ticks;
    if (ax.log) {
        for (double d = std::log10(ax.lo); d <= std::log10(ax.hi) + 1e-9; d += 1.0)
            ticks.push_back(std::pow(10.0, d));
        return ticks;
    }
    const double span = ax.hi - ax.lo;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (raw <= m * mag) {
            step = m * mag;
            break;
        }
    }
    for (double t = std::ceil(ax.lo / step) * step; t <= ax.hi + 1e-9 * span; t += step)
        ticks.push_back(t);
    return ticks;
}

class SvgCanvas {
public:
    SvgCanvas(const std::string& title, const std::string& xlabel, const std::string& ylabel,
              Axis x, Axis y)
        : x_(x), y_(y) {
        char head[256];
        std::snprintf(head, sizeof(head),
                      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
                      "viewBox=\"0 0 %.0f %.0f\" font-family=\"Helvetica,Arial,sans-serif\">\n",
                      kWidth, kHeight, kWidth, kHeight);
        body_ = head;
        body_ += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        body_ += "<text x=\"" + fmt(kWidth / 2) + "\" y=\"24\" font-size=\"15\" text-anchor=\"middle\">" +
                 title + "</text>\n";
        draw_axes(xlabel, ylabel);
    }

    double px(double v) const { return kLeft + x_.to_unit(v) * kPlotW; }
    double py(double v) const { return kTop + (1.0 - y_.to_unit(v)) * kPlotH; }

    void polyline(const std::vector<double>& xs, const std::vector<double>& ys, const char* color) {
        std::string pts;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (y_.log && !(ys[i] > 0.0)) continue;
            pts += fmt(px(xs[i])) + "," + fmt(py(ys[i])) + " ";
        }
        body_ += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
                 "\" stroke-width=\"1.8\" points=\"" + pts + "\"/>\n";
    }

    void markers(const std::vector<double>& xs, const std::vector<double>& ys, const char* color) {
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (y_.log && !(ys[i] > 0.0)) continue;
            body_ += "<circle cx=\"" + fmt(px(xs[i])) + "\" cy=\"" + fmt(py(ys[i])) +
                     "\" r=\"3\" fill=\"" + std::string(color) + "\"/>\n";
        }
    }

    void bar(double x0, double x1, double y, const char* color) {
        const double top = py(y);
        const double base = kTop + kPlotH;
        body_ += "<rect x=\"" + fmt(px(x0)) + "\" y=\"" + fmt(top) + "\" width=\"" +
                 fmt(px(x1) - px(x0)) + "\" height=\"" + fmt(base - top) + "\" fill=\"" +
                 std::string(color) + "\"/>\n";
    }

    void bottom_label(double x, const std::string& text) {
        body_ += "<text x=\"" + fmt(px(x)) + "\" y=\"" + fmt(kTop + kPlotH + 18) +
                 "\" font-size=\"11\" text-anchor=\"middle\">" + text + "</text>\n";
    }

    void legend(const std::vector<std::pair<std::string, const char*>>& entries) {
        double y = kTop + 10.0;
        for (const auto& [label, color] : entries) {
            const double x = kLeft + kPlotW - 180.0;
            body_ += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(x + 26) +
                     "\" y2=\"" + fmt(y) + "\" stroke=\"" + std::string(color) +
                     "\" stroke-width=\"2\"/>\n";
            body_ += "<text x=\"" + fmt(x + 32) + "\" y=\"" + fmt(y + 4) + "\" font-size=\"12\">" +
                     label + "</text>\n";
            y += 18.0;
        }
    }

    std::string finish() {
        body_ += "</svg>\n";
        return body_;
    }

private:
    void draw_axes(const std::string& xlabel, const std::string& ylabel) {
        body_ += "<rect x=\"" + fmt(kLeft) + "\" y=\"" + fmt(kTop) + "\" width=\"" + fmt(kPlotW) +
                 "\" height=\"" + fmt(kPlotH) + "\" fill=\"none\" stroke=\"#444\"/>\n";
        for (double t : axis_ticks(x_)) {
            const double x = px(t);
            body_ += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(kTop) + "\" x2=\"" + fmt(x) +
                     "\" y2=\"" + fmt(kTop + kPlotH) + "\" stroke=\"#ddd\"/>\n";
            body_ += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(kTop + kPlotH + 16) +
                     "\" font-size=\"11\" text-anchor=\"middle\">" + fmt(t) + "</text>\n";
        }
        for (double t : axis_ticks(y_)) {
            const double y = py(t);
            body_ += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(y) + "\" x2=\"" +
                     fmt(kLeft + kPlotW) + "\" y2=\"" + fmt(y) + "\" stroke=\"#ddd\"/>\n";
            body_ += "<text x=\"" + fmt(kLeft - 6) + "\" y=\"" + fmt(y + 4) +
                     "\" font-size=\"11\" text-anchor=\"end\">" + fmt(t) + "</text>\n";
        }
        body_ += "<text x=\"" + fmt(kLeft + kPlotW / 2) + "\" y=\"" + fmt(kHeight - 12) +
                 "\" font-size=\"13\" text-anchor=\"middle\">" + xlabel + "</text>\n";
        body_ += "<text x=\"18\" y=\"" + fmt(kTop + kPlotH / 2) +
                 "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
                 fmt(kTop + kPlotH / 2) + ")\">" + ylabel + "</text>\n";
    }

    Axis x_, y_;
    std::string body_;
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

// Rows grouped by method, preserving first-seen order.
std::vector<std::pair<std::string, std::vector<const ResultRow*>>> by_method(
    const ResultTable& table) {
    std::vector<std::pair<std::string, std::vector<const ResultRow*>>> groups;
    for (const auto& row : table.rows) {
        auto it = std::find_if(groups.begin(), groups.end(),
                               [&](const auto& g) { return g.first == row.method; });
        if (it == groups.end()) {
            groups.push_back({row.method, {}});
            it = groups.end() - 1;
        }
        it->second.push_back(&row);
    }
    return groups;
}

std::string render_xy(const ResultTable& table, const std::string& title,
                      const std::string& xlabel, bool logx) {
    if (table.rows.empty()) throw std::invalid_argument("render_plot: empty table");
    std::vector<double> xs, ys;
    for (const auto& r : table.rows) {
        xs.push_back(r.swept_value);
        ys.push_back(r.mean_distortion);
    }
    SvgCanvas canvas(title, xlabel, "mean distortion", make_axis(xs, logx), make_axis(ys, true));
    std::vector<std::pair<std::string, const char*>> legend;
    int c = 0;
    for (const auto& [method, rows] : by_method(table)) {
        std::vector<double> mx, my;
        for (const auto* r : rows) {
            mx.push_back(r->swept_value);
            my.push_back(r->mean_distortion);
        }
        const char* color = kPalette[c++ % 6];
        canvas.polyline(mx, my, color);
        canvas.markers(mx, my, color);
        legend.push_back({method, color});
    }
    canvas.legend(legend);
    return canvas.finish();
}

std::string render_bars(const ResultTable& table) {
    if (table.rows.empty()) throw std::invalid_argument("render_plot: empty table");
    // Two bars per row: iterations to convergence and transmitted pilots.
    std::vector<double> ys;
    for (const auto& r : table.rows) {
        if (std::isfinite(r.mean_convergence_iter)) ys.push_back(r.mean_convergence_iter);
        if (std::isfinite(r.mean_pilots)) ys.push_back(r.mean_pilots);
    }
    ys.push_back(0.0);
    Axis x{0.0, static_cast<double>(table.rows.size()), false};
    SvgCanvas canvas("Iterations and transmitted pilots to convergence", "", "count", x,
                     make_axis(ys, false));
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& r = table.rows[i];
        const double base = static_cast<double>(i);
        if (std::isfinite(r.mean_convergence_iter))
            canvas.bar(base + 0.15, base + 0.45, r.mean_convergence_iter, kPalette[0]);
        if (std::isfinite(r.mean_pilots))
            canvas.bar(base + 0.55, base + 0.85, r.mean_pilots, kPalette[1]);
        std::string label = r.method;
        if (r.swept_param != "none") label += " @" + fmt(r.swept_value);
        canvas.bottom_label(base + 0.5, label);
    }
    canvas.legend({{"iterations", kPalette[0]}, {"pilots", kPalette[1]}});
    return canvas.finish();
}

}  // namespace

PlotKind plot_kind_from_string(const std::string& name) {
    if (name == "distortion_vs_noise") return PlotKind::distortion_vs_noise;
    if (name == "convergence_curve") return PlotKind::convergence_curve;
    if (name == "distortion_vs_k") return PlotKind::distortion_vs_k;
    if (name == "iterations_bar") return PlotKind::iterations_bar;
    throw std::invalid_argument("unknown plot kind: " + name);
}

std::string to_string(PlotKind kind) {
    switch (kind) {
        case PlotKind::distortion_vs_noise: return "distortion_vs_noise";
        case PlotKind::convergence_curve: return "convergence_curve";
        case PlotKind::distortion_vs_k: return "distortion_vs_k";
        case PlotKind::iterations_bar: return "iterations_bar";
    }
    return "?";
}

std::string render_plot(const ResultTable& table, PlotKind kind) {
    switch (kind) {
        case PlotKind::distortion_vs_noise:
            return render_xy(table, "Mean distortion vs noise variance", "noise variance", true);
        case PlotKind::distortion_vs_k:
            return render_xy(table, "Mean distortion vs sparsity", "nonzero taps k", false);
        case PlotKind::iterations_bar:
            return render_bars(table);
        case PlotKind::convergence_curve:
            throw std::invalid_argument("convergence_curve renders from trajectory tables");
    }
    throw std::invalid_argument("render_plot: bad kind");
}

std::string render_convergence_plot(const std::vector<TrajectoryTable>& trajectories) {
    if (trajectories.empty()) throw std::invalid_argument("render_convergence_plot: no data");
    std::vector<double> xs, ys;
    for (const auto& t : trajectories) {
        for (auto i : t.iterations) xs.push_back(static_cast<double>(i));
        for (double v : t.mean) ys.push_back(v);
    }
    SvgCanvas canvas("Convergence curves", "iteration", "mean distortion", make_axis(xs, false),
                     make_axis(ys, true));
    std::vector<std::pair<std::string, const char*>> legend;
    int c = 0;
    for (const auto& t : trajectories) {
        std::vector<double> mx(t.iterations.begin(), t.iterations.end());
        const char* color = kPalette[c++ % 6];
        canvas.polyline(mx, t.mean, color);
        legend.push_back({t.method, color});
    }
    canvas.legend(legend);
    return canvas.finish();
}

void emit_plot(const ResultTable& table, PlotKind kind, const std::string& path) {
    write_file(path, render_plot(table, kind));
}

void emit_plot(const std::vector<TrajectoryTable>& trajectories, const std::string& path) {
    write_file(path, render_convergence_plot(trajectories));
}

}  // namespace csid

#include "lwpt/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace lwpt {

namespace {

// Stable palette: series k always gets color k regardless of map order.
const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kPaletteSize = 8;

constexpr double kW = 800.0, kH = 500.0;
constexpr double kMarginL = 70.0, kMarginR = 30.0, kMarginT = 40.0, kMarginB = 50.0;

std::ofstream open_svg(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("io: cannot write " + path);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    return out;
}

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(6);
    ss << v;
    return ss.str();
}

struct Scale {
    double lo, hi, px0, px1;
    double operator()(double v) const {
        double t = (hi > lo) ? (v - lo) / (hi - lo) : 0.5;
        return px0 + t * (px1 - px0);
    }
};

void draw_axes(std::ofstream& out, const Scale& sx, const Scale& sy, const std::string& xlabel,
               const std::string& ylabel) {
    out << "<rect x=\"0\" y=\"0\" width=\"" << kW << "\" height=\"" << kH
        << "\" fill=\"white\"/>\n";
    out << "<line x1=\"" << kMarginL << "\" y1=\"" << kH - kMarginB << "\" x2=\"" << kW - kMarginR
        << "\" y2=\"" << kH - kMarginB << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << kMarginL << "\" y1=\"" << kMarginT << "\" x2=\"" << kMarginL
        << "\" y2=\"" << kH - kMarginB << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        double t = i / 4.0;
        double xv = sx.lo + t * (sx.hi - sx.lo);
        double yv = sy.lo + t * (sy.hi - sy.lo);
        out << "<text x=\"" << sx(xv) << "\" y=\"" << kH - kMarginB + 18
            << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt(xv) << "</text>\n";
        out << "<text x=\"" << kMarginL - 8 << "\" y=\"" << sy(yv) + 4
            << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(yv) << "</text>\n";
    }
    out << "<text x=\"" << (kMarginL + kW - kMarginR) / 2 << "\" y=\"" << kH - 12
        << "\" font-size=\"13\" text-anchor=\"middle\">" << xlabel << "</text>\n";
    out << "<text x=\"16\" y=\"" << (kMarginT + kH - kMarginB) / 2
        << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << (kMarginT + kH - kMarginB) / 2 << ")\">" << ylabel << "</text>\n";
}

std::vector<double> moving_average(const std::vector<double>& v, int window) {
    std::vector<double> out(v.size());
    double acc = 0.0;
    for (size_t i = 0; i < v.size(); ++i) {
        acc += v[i];
        if (i >= static_cast<size_t>(window)) acc -= v[i - window];
        size_t n = std::min(i + 1, static_cast<size_t>(window));
        out[i] = acc / static_cast<double>(n);
    }
    return out;
}

}  // namespace

void write_learning_curve_svg(const std::string& path,
                              const std::map<std::string, std::vector<EpisodeRecord>>& series,
                              int smooth_window) {
    std::ofstream out = open_svg(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
        << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n";

    double xmax = 1.0;
    double ymin = std::numeric_limits<double>::infinity();
    double ymax = -std::numeric_limits<double>::infinity();
    std::map<std::string, std::vector<double>> smoothed;
    for (const auto& [name, recs] : series) {
        std::vector<double> rets;
        for (const EpisodeRecord& r : recs) rets.push_back(r.ret);
        std::vector<double> sm = moving_average(rets, smooth_window);
        for (double v : sm) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
        xmax = std::max(xmax, static_cast<double>(rets.size()));
        smoothed[name] = std::move(sm);
    }
    if (!std::isfinite(ymin)) { ymin = 0.0; ymax = 1.0; }
    if (ymax <= ymin) ymax = ymin + 1.0;
    double pad = 0.05 * (ymax - ymin);
    Scale sx{0.0, xmax, kMarginL, kW - kMarginR};
    Scale sy{ymin - pad, ymax + pad, kH - kMarginB, kMarginT};
    draw_axes(out, sx, sy, "episode", "return (smoothed)");

    int k = 0;
    for (const auto& [name, sm] : smoothed) {
        const char* color = kPalette[k % kPaletteSize];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (size_t i = 0; i < sm.size(); ++i)
            out << fmt(sx(static_cast<double>(i))) << ',' << fmt(sy(sm[i])) << ' ';
        out << "\"/>\n";
        double ly = kMarginT + 16.0 * k;
        out << "<line x1=\"" << kW - 190 << "\" y1=\"" << ly << "\" x2=\"" << kW - 165 << "\" y2=\""
            << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << kW - 160 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">" << name
            << "</text>\n";
        ++k;
    }
    out << "</svg>\n";
}

void write_bar_chart_svg(const std::string& path, const std::vector<BarEntry>& entries) {
    std::ofstream out = open_svg(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
        << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << kW << "\" height=\"" << kH
        << "\" fill=\"white\"/>\n";

    double fmax = 1e-300, emax = 1e-300;
    for (const BarEntry& e : entries) {
        fmax = std::max(fmax, e.fair_data);
        emax = std::max(emax, e.energy);
    }
    double y0 = kH - kMarginB;
    double plot_h = y0 - kMarginT;
    double group_w = (kW - kMarginL - kMarginR) / std::max<size_t>(1, entries.size());
    double bar_w = group_w * 0.3;

    out << "<line x1=\"" << kMarginL << "\" y1=\"" << y0 << "\" x2=\"" << kW - kMarginR
        << "\" y2=\"" << y0 << "\" stroke=\"black\"/>\n";
    for (size_t i = 0; i < entries.size(); ++i) {
        const BarEntry& e = entries[i];
        double cx = kMarginL + group_w * (i + 0.5);
        double fh = plot_h * (e.fair_data / fmax);
        double eh = plot_h * (e.energy / emax);
        out << "<rect x=\"" << cx - bar_w << "\" y=\"" << y0 - fh << "\" width=\"" << bar_w
            << "\" height=\"" << fh << "\" fill=\"" << kPalette[0] << "\"/>\n";
        out << "<rect x=\"" << cx << "\" y=\"" << y0 - eh << "\" width=\"" << bar_w
            << "\" height=\"" << eh << "\" fill=\"" << kPalette[1] << "\"/>\n";
        out << "<text x=\"" << cx << "\" y=\"" << y0 + 18
            << "\" font-size=\"12\" text-anchor=\"middle\">" << e.label << "</text>\n";
        out << "<text x=\"" << cx - bar_w / 2 << "\" y=\"" << y0 - fh - 4
            << "\" font-size=\"10\" text-anchor=\"middle\">" << fmt(e.fair_data) << "</text>\n";
        out << "<text x=\"" << cx + bar_w / 2 << "\" y=\"" << y0 - eh - 4
            << "\" font-size=\"10\" text-anchor=\"middle\">" << fmt(e.energy) << "</text>\n";
    }
    out << "<rect x=\"" << kW - 200 << "\" y=\"" << kMarginT - 10 << "\" width=\"12\" height=\"12\" fill=\""
        << kPalette[0] << "\"/>\n";
    out << "<text x=\"" << kW - 184 << "\" y=\"" << kMarginT << "\" font-size=\"12\">fair data (bits)</text>\n";
    out << "<rect x=\"" << kW - 200 << "\" y=\"" << kMarginT + 8 << "\" width=\"12\" height=\"12\" fill=\""
        << kPalette[1] << "\"/>\n";
    out << "<text x=\"" << kW - 184 << "\" y=\"" << kMarginT + 18 << "\" font-size=\"12\">energy (J)</text>\n";
    out << "</svg>\n";
}

void write_trajectory_svg(const std::string& path, const std::vector<TraceRow>& trace,
                          const std::vector<core::Vec3>& sensors, const EnvConfig& cfg) {
    std::ofstream out = open_svg(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
        << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n";
    Scale sx{cfg.x_min, cfg.x_max, kMarginL, kW - kMarginR};
    Scale sy{cfg.y_min, cfg.y_max, kH - kMarginB, kMarginT};
    draw_axes(out, sx, sy, "x (m)", "y (m)");

    // T+1 path vertices: start position followed by the post-step positions.
    out << "<polyline fill=\"none\" stroke=\"" << kPalette[0] << "\" stroke-width=\"1.5\" points=\""
        << fmt(sx(cfg.uav_start_x)) << ',' << fmt(sy(cfg.uav_start_y)) << ' ';
    for (const TraceRow& r : trace) out << fmt(sx(r.x)) << ',' << fmt(sy(r.y)) << ' ';
    out << "\"/>\n";
    out << "<circle cx=\"" << fmt(sx(cfg.uav_start_x)) << "\" cy=\"" << fmt(sy(cfg.uav_start_y))
        << "\" r=\"5\" fill=\"" << kPalette[2] << "\"/>\n";
    if (!trace.empty()) {
        out << "<circle cx=\"" << fmt(sx(trace.back().x)) << "\" cy=\"" << fmt(sy(trace.back().y))
            << "\" r=\"5\" fill=\"" << kPalette[1] << "\"/>\n";
    }
    for (const core::Vec3& p : sensors) {
        out << "<rect class=\"sensor\" x=\"" << fmt(sx(p.x) - 3) << "\" y=\"" << fmt(sy(p.y) - 3)
            << "\" width=\"6\" height=\"6\" fill=\"" << kPalette[3] << "\"/>\n";
    }
    out << "</svg>\n";
}

}  // namespace lwpt

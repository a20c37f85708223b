#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "gbmlab/common.hpp"

namespace gbmlab {

// Minimal polyline plot writer: axes, tick labels, one color per series.
// CSV stays the ground truth; this is a quick visual check only.
class SvgPlot {
public:
    SvgPlot(std::string title, std::string x_label, std::string y_label)
        : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

    void add_line(const std::vector<double>& xs, const std::vector<double>& ys,
                  const std::string& name) {
        require(xs.size() == ys.size() && xs.size() >= 2, "plot series needs matched x/y data");
        for (double v : xs) require(std::isfinite(v), "plot data must be finite");
        for (double v : ys) require(std::isfinite(v), "plot data must be finite");
        series_.push_back({xs, ys, name});
    }

    // log-scale the y axis; only valid when every y is positive
    void set_log_y(bool on) { log_y_ = on; }

    void write(const std::string& path) const {
        require(!series_.empty(), "plot needs at least one series");
        double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
        double y_lo = x_lo, y_hi = -x_lo;
        for (const Series& s : series_) {
            for (double v : s.xs) {
                x_lo = std::min(x_lo, v);
                x_hi = std::max(x_hi, v);
            }
            for (double raw : s.ys) {
                const double v = y_value(raw);
                y_lo = std::min(y_lo, v);
                y_hi = std::max(y_hi, v);
            }
        }
        if (x_hi == x_lo) x_hi = x_lo + 1.0;
        if (y_hi == y_lo) y_hi = y_lo + 1.0;

        std::ofstream out(path, std::ios::binary);
        require(out.good(), "cannot write plot file: " + path);
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\""
            << kH << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n"
            << "<rect width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n"
            << "<text x=\"" << kW / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">"
            << title_ << "</text>\n";

        // axes
        out << "<line x1=\"" << kL << "\" y1=\"" << kH - kB << "\" x2=\"" << kW - kR
            << "\" y2=\"" << kH - kB << "\" stroke=\"black\"/>\n"
            << "<line x1=\"" << kL << "\" y1=\"" << kT << "\" x2=\"" << kL << "\" y2=\""
            << kH - kB << "\" stroke=\"black\"/>\n";
        for (int i = 0; i <= 4; ++i) {
            const double fx = x_lo + (x_hi - x_lo) * i / 4.0;
            const double px = map_x(fx, x_lo, x_hi);
            out << "<text x=\"" << px << "\" y=\"" << kH - kB + 16
                << "\" text-anchor=\"middle\" font-size=\"10\">" << tick(fx) << "</text>\n";
            const double fy = y_lo + (y_hi - y_lo) * i / 4.0;
            const double py = map_y(fy, y_lo, y_hi);
            out << "<text x=\"" << kL - 6 << "\" y=\"" << py + 3
                << "\" text-anchor=\"end\" font-size=\"10\">" << tick(display_y(fy))
                << "</text>\n";
        }
        out << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 6
            << "\" text-anchor=\"middle\" font-size=\"11\">" << x_label_ << "</text>\n"
            << "<text x=\"14\" y=\"" << kT - 6 << "\" font-size=\"11\">"
            << (log_y_ ? y_label_ + " (log)" : y_label_) << "</text>\n";

        for (std::size_t si = 0; si < series_.size(); ++si) {
            const Series& s = series_[si];
            const std::string& color = kColors[si % kColors.size()];
            out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" "
                << "points=\"";
            for (std::size_t i = 0; i < s.xs.size(); ++i)
                out << map_x(s.xs[i], x_lo, x_hi) << ","
                    << map_y(y_value(s.ys[i]), y_lo, y_hi) << " ";
            out << "\"/>\n";
            out << "<text x=\"" << kW - kR + 4 << "\" y=\"" << kT + 14 * (si + 1)
                << "\" font-size=\"10\" fill=\"" << color << "\">" << s.name << "</text>\n";
        }
        out << "</svg>\n";
    }

private:
    struct Series {
        std::vector<double> xs, ys;
        std::string name;
    };

    static constexpr int kW = 640, kH = 420, kL = 60, kR = 90, kT = 30, kB = 40;
    inline static const std::vector<std::string> kColors{"#1f77b4", "#d62728", "#2ca02c",
                                                         "#9467bd", "#ff7f0e", "#8c564b"};

    double y_value(double raw) const {
        if (!log_y_) return raw;
        require(raw > 0.0, "log-scale plot needs positive values");
        return std::log10(raw);
    }
    double display_y(double v) const { return log_y_ ? std::pow(10.0, v) : v; }

    static double map_x(double v, double lo, double hi) {
        return kL + (v - lo) / (hi - lo) * (kW - kL - kR);
    }
    static double map_y(double v, double lo, double hi) {
        return kH - kB - (v - lo) / (hi - lo) * (kH - kT - kB);
    }
    static std::string tick(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4g", v);
        return buf;
    }

    std::string title_, x_label_, y_label_;
    bool log_y_ = false;
    std::vector<Series> series_;
};

}  // namespace gbmlab

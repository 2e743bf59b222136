#include "render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace epigeo::detail {

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 480;
constexpr int kMargin = 56;

struct AxisScale {
    double lo, hi;
    double px0, px1;

    double operator()(double v) const { return px0 + (v - lo) / (hi - lo) * (px1 - px0); }
};

std::string color_for(const GeometryKind& kind) {
    return kind.is_projective() ? "#d95f02" : "#1f77b4";
}

std::string label_for(const GeometryKind& kind) {
    return kind.is_projective() ? "projective" : "euclidean";
}

void open_svg(std::ostringstream& os, const std::string& config_json) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
       << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    os << "<!-- config: " << config_json << " -->\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void draw_line(std::ostringstream& os, double x1, double y1, double x2, double y2,
               const std::string& stroke, const std::string& extra = "") {
    os << "<line x1=\"" << fixed(x1) << "\" y1=\"" << fixed(y1) << "\" x2=\"" << fixed(x2)
       << "\" y2=\"" << fixed(y2) << "\" stroke=\"" << stroke << "\"" << extra << "/>\n";
}

void draw_text(std::ostringstream& os, double x, double y, const std::string& text,
               const std::string& extra = "") {
    os << "<text x=\"" << fixed(x) << "\" y=\"" << fixed(y)
       << "\" font-family=\"sans-serif\" font-size=\"12\"" << extra << ">" << text
       << "</text>\n";
}

std::vector<double> nice_ticks(double lo, double hi, int target = 6) {
    const double span = hi - lo;
    if (!(span > 0.0)) return {lo};
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (raw <= m * mag) {
            step = m * mag;
            break;
        }
    }
    std::vector<double> ticks;
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-12 * span; t += step) {
        ticks.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
    }
    return ticks;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

void draw_axes(std::ostringstream& os, const AxisScale& xs, const AxisScale& ys,
               const std::string& xlabel, const std::string& ylabel) {
    const double bottom = ys.px1 > ys.px0 ? ys.px1 : ys.px0;
    draw_line(os, xs.px0, ys(ys.lo), xs.px1, ys(ys.lo), "#333");
    draw_line(os, xs(xs.lo), ys.px0, xs(xs.lo), ys.px1, "#333");
    for (double t : nice_ticks(xs.lo, xs.hi)) {
        draw_line(os, xs(t), ys(ys.lo), xs(t), ys(ys.lo) + 4, "#333");
        draw_text(os, xs(t) - 10, ys(ys.lo) + 18, tick_label(t));
    }
    for (double t : nice_ticks(ys.lo, ys.hi)) {
        draw_line(os, xs(xs.lo) - 4, ys(t), xs(xs.lo), ys(t), "#333");
        draw_text(os, xs(xs.lo) - 44, ys(t) + 4, tick_label(t));
    }
    draw_text(os, (xs.px0 + xs.px1) / 2 - 20, bottom + 36, xlabel);
    draw_text(os, 12, ys.px1 - 12, ylabel);
}

}  // namespace

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fixed(double v, int precision) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
    return buf;
}

std::string render_trajectories_svg(const std::vector<Trajectory>& trajectories,
                                    const Eigen::VectorXd& object,
                                    const std::string& config_json) {
    double lo_x = object(0), hi_x = object(0);
    double lo_y = object(1), hi_y = object(1);
    auto absorb = [&](const Eigen::VectorXd& p) {
        lo_x = std::min(lo_x, p(0));
        hi_x = std::max(hi_x, p(0));
        lo_y = std::min(lo_y, p(1));
        hi_y = std::max(hi_y, p(1));
    };
    for (const auto& trajectory : trajectories) {
        absorb(trajectory.initial.frame.origin);
        for (const auto& step : trajectory.steps) absorb(step.state.frame.origin);
        absorb(trajectory.last_state().frame.origin);
    }
    const double pad = std::max({0.5, (hi_x - lo_x) * 0.15, (hi_y - lo_y) * 0.15});
    lo_x -= pad;
    hi_x += pad;
    lo_y -= pad;
    hi_y += pad;

    const AxisScale xs{lo_x, hi_x, double(kMargin), double(kWidth - kMargin)};
    const AxisScale ys{lo_y, hi_y, double(kHeight - kMargin), double(kMargin)};

    std::ostringstream os;
    open_svg(os, config_json);
    draw_axes(os, xs, ys, "x (world units)", "y");

    os << "<circle cx=\"" << fixed(xs(object(0))) << "\" cy=\"" << fixed(ys(object(1)))
       << "\" r=\"6\" fill=\"#2ca02c\"/>\n";
    draw_text(os, xs(object(0)) + 10, ys(object(1)) + 4, "object");

    int legend_row = 0;
    for (const auto& trajectory : trajectories) {
        const std::string color = color_for(trajectory.config.geometry);
        std::ostringstream pts;
        auto add_point = [&](const Eigen::VectorXd& p) {
            pts << fixed(xs(p(0))) << ',' << fixed(ys(p(1))) << ' ';
        };
        add_point(trajectory.initial.frame.origin);
        for (const auto& step : trajectory.steps) add_point(step.state.frame.origin);
        add_point(trajectory.last_state().frame.origin);
        os << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\"" << color
           << "\" stroke-width=\"1.5\"/>\n";
        auto add_marker = [&](const Eigen::VectorXd& p, double r) {
            os << "<circle cx=\"" << fixed(xs(p(0))) << "\" cy=\"" << fixed(ys(p(1)))
               << "\" r=\"" << fixed(r, 1) << "\" fill=\"" << color << "\"/>\n";
        };
        add_marker(trajectory.initial.frame.origin, 4.0);
        for (const auto& step : trajectory.steps) add_marker(step.state.frame.origin, 2.0);
        add_marker(trajectory.last_state().frame.origin, 2.0);

        draw_text(os, kWidth - 180, kMargin + 16 * legend_row,
                  label_for(trajectory.config.geometry),
                  " fill=\"" + color + "\"");
        ++legend_row;
    }

    os << "</svg>\n";
    return os.str();
}

std::string render_direction_profile_svg(const std::vector<GridResult>& results,
                                         const std::string& config_json) {
    // Signed angle per bin, sorted left to right.
    auto signed_angle = [](int bin) {
        return bin <= 4 ? bin * std::numbers::pi / 4.0 : (bin - 8) * std::numbers::pi / 4.0;
    };

    double lo_v = 0.0, hi_v = 0.0;
    bool first = true;
    for (const auto& result : results) {
        for (const auto& stat : result.stats) {
            const double lo = stat.mean - 2 * stat.std_error;
            const double hi = stat.mean + 2 * stat.std_error;
            if (first) {
                lo_v = lo;
                hi_v = hi;
                first = false;
            } else {
                lo_v = std::min(lo_v, lo);
                hi_v = std::max(hi_v, hi);
            }
        }
    }
    const double pad = std::max(1e-6, (hi_v - lo_v) * 0.1);
    lo_v -= pad;
    hi_v += pad;

    const AxisScale xs{-std::numbers::pi - 0.3, std::numbers::pi + 0.3, double(kMargin),
                       double(kWidth - kMargin)};
    const AxisScale ys{lo_v, hi_v, double(kHeight - kMargin), double(kMargin)};

    std::ostringstream os;
    open_svg(os, config_json);

    // Axis with pi/2 ticks.
    draw_line(os, xs.px0, ys(lo_v), xs.px1, ys(lo_v), "#333");
    draw_line(os, xs(xs.lo), ys.px0, xs(xs.lo), ys.px1, "#333");
    const std::vector<std::pair<double, std::string>> xticks = {
        {-std::numbers::pi, "-pi"}, {-std::numbers::pi / 2, "-pi/2"}, {0.0, "0"},
        {std::numbers::pi / 2, "pi/2"}, {std::numbers::pi, "pi"}};
    for (const auto& [t, label] : xticks) {
        draw_line(os, xs(t), ys(lo_v), xs(t), ys(lo_v) + 4, "#333");
        draw_text(os, xs(t) - 10, ys(lo_v) + 18, label);
    }
    for (double t : nice_ticks(lo_v, hi_v)) {
        draw_line(os, xs(xs.lo) - 4, ys(t), xs(xs.lo), ys(t), "#333");
        draw_text(os, xs(xs.lo) - 48, ys(t) + 4, tick_label(t));
    }
    draw_text(os, (xs.px0 + xs.px1) / 2 - 90, kHeight - 16,
              "translation direction (rad, 0 = toward object)");
    draw_text(os, 12, kMargin - 12, "epistemic value");

    int legend_row = 0;
    for (const auto& result : results) {
        const std::string color = color_for(result.kind);
        std::vector<std::pair<double, const DirectionStat*>> series;
        const DirectionStat* idle = nullptr;
        for (const auto& stat : result.stats) {
            if (stat.is_idle) {
                idle = &stat;
            } else {
                series.emplace_back(signed_angle(stat.bin), &stat);
            }
        }
        std::sort(series.begin(), series.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });

        std::ostringstream pts;
        for (const auto& [angle, stat] : series) {
            pts << fixed(xs(angle)) << ',' << fixed(ys(stat->mean)) << ' ';
        }
        os << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\"" << color
           << "\" stroke-width=\"1.5\"/>\n";
        for (const auto& [angle, stat] : series) {
            const double x = xs(angle);
            draw_line(os, x, ys(stat->mean - stat->std_error), x,
                      ys(stat->mean + stat->std_error), color);
            draw_line(os, x - 3, ys(stat->mean - stat->std_error), x + 3,
                      ys(stat->mean - stat->std_error), color);
            draw_line(os, x - 3, ys(stat->mean + stat->std_error), x + 3,
                      ys(stat->mean + stat->std_error), color);
            os << "<circle cx=\"" << fixed(x) << "\" cy=\"" << fixed(ys(stat->mean))
               << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        }
        if (idle != nullptr) {
            draw_line(os, xs.px0, ys(idle->mean), xs.px1, ys(idle->mean), color,
                      " stroke-dasharray=\"6 4\" opacity=\"0.6\"");
        }
        draw_text(os, kWidth - 180, kMargin + 16 * legend_row,
                  label_for(result.kind) + " (dashed: idle)",
                  " fill=\"" + color + "\"");
        ++legend_row;
    }

    os << "</svg>\n";
    return os.str();
}

}  // namespace epigeo::detail

#include "expanderlab/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace expanderlab::io {

namespace {

// Fixed two-decimal pixel coordinates: locale-free and byte-stable.
std::string px(double v) {
    if (!std::isfinite(v)) v = 0.0;
    std::array<char, 32> buf{};
    const auto res =
        std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, 2);
    return std::string(buf.data(), res.ptr);
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void absorb(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void widen_if_degenerate() {
        if (lo > hi) {  // no finite samples at all
            lo = 0.0;
            hi = 1.0;
        } else if (hi - lo < 1e-300) {
            const double pad = std::max(1.0, std::abs(lo));
            lo -= pad;
            hi += pad;
        }
    }
    double fraction(double v) const { return (v - lo) / (hi - lo); }
};

struct Frame {
    double x0, y0, x1, y1;  // pixel corners of the data area (y grows down)
    Range xr, yr;

    double map_x(double v) const { return x0 + xr.fraction(v) * (x1 - x0); }
    double map_y(double v) const { return y1 - yr.fraction(v) * (y1 - y0); }
};

void append_header(std::string& svg, int width, int height) {
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"";
    svg += std::to_string(width);
    svg += "\" height=\"";
    svg += std::to_string(height);
    svg += "\" viewBox=\"0 0 ";
    svg += std::to_string(width);
    svg += ' ' + std::to_string(height);
    svg += "\">\n<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
}

void append_axes(std::string& svg, const Frame& f, const std::string& x_label,
                 const std::string& y_label) {
    svg += "<rect x=\"" + px(f.x0) + "\" y=\"" + px(f.y0) + "\" width=\"" + px(f.x1 - f.x0) +
           "\" height=\"" + px(f.y1 - f.y0) +
           "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double fx = f.x0 + (f.x1 - f.x0) * t / 4.0;
        const double vx = f.xr.lo + (f.xr.hi - f.xr.lo) * t / 4.0;
        svg += "<line x1=\"" + px(fx) + "\" y1=\"" + px(f.y1) + "\" x2=\"" + px(fx) + "\" y2=\"" +
               px(f.y1 + 5) + "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + px(fx) + "\" y=\"" + px(f.y1 + 18) +
               "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\">" +
               format_real_brief(vx) + "</text>\n";

        const double fy = f.y1 - (f.y1 - f.y0) * t / 4.0;
        const double vy = f.yr.lo + (f.yr.hi - f.yr.lo) * t / 4.0;
        svg += "<line x1=\"" + px(f.x0 - 5) + "\" y1=\"" + px(fy) + "\" x2=\"" + px(f.x0) +
               "\" y2=\"" + px(fy) + "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + px(f.x0 - 8) + "\" y=\"" + px(fy + 4) +
               "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"end\">" +
               format_real_brief(vy) + "</text>\n";
    }
    if (!x_label.empty())
        svg += "<text x=\"" + px((f.x0 + f.x1) / 2) + "\" y=\"" + px(f.y1 + 34) +
               "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">" + x_label +
               "</text>\n";
    if (!y_label.empty())
        svg += "<text x=\"" + px(f.x0) + "\" y=\"" + px(f.y0 - 5) +
               "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"start\">" + y_label +
               "</text>\n";
}

void append_polyline_runs(std::string& svg, const Frame& f, const Curve& curve) {
    const std::size_t count = std::min(curve.x.size(), curve.y.size());
    std::string points;
    const auto flush = [&] {
        if (points.empty()) return;
        svg += "<polyline fill=\"none\" stroke=\"" + curve.color + "\" stroke-width=\"" +
               px(curve.stroke_width) + "\" points=\"" + points + "\"/>\n";
        points.clear();
    };
    for (std::size_t i = 0; i < count; ++i) {
        if (!std::isfinite(curve.x[i]) || !std::isfinite(curve.y[i])) {
            flush();
            continue;
        }
        if (!points.empty()) points += ' ';
        points += px(f.map_x(curve.x[i])) + ',' + px(f.map_y(curve.y[i]));
    }
    flush();
}

std::string blend_hex(double t, std::array<int, 3> from, std::array<int, 3> to) {
    t = std::clamp(t, 0.0, 1.0);
    constexpr char hex[] = "0123456789abcdef";
    std::string out = "#";
    for (int c = 0; c < 3; ++c) {
        const int v =
            static_cast<int>(std::lround(from[c] + (to[c] - from[c]) * t));
        out += hex[(v >> 4) & 0xf];
        out += hex[v & 0xf];
    }
    return out;
}

} // namespace

std::string to_svg(const LinePlot& plot) {
    Frame f;
    f.x0 = 64.0;
    f.y0 = 18.0;
    f.x1 = plot.width - 16.0;
    f.y1 = plot.height - 44.0;
    for (const auto& c : plot.curves) {
        for (double v : c.x) f.xr.absorb(v);
        for (double v : c.y) f.yr.absorb(v);
    }
    f.xr.widen_if_degenerate();
    f.yr.widen_if_degenerate();

    std::string svg;
    append_header(svg, plot.width, plot.height);
    append_axes(svg, f, plot.x_label, plot.y_label);
    for (const auto& c : plot.curves) append_polyline_runs(svg, f, c);
    svg += "</svg>\n";
    return svg;
}

void write_svg(const std::filesystem::path& path, const LinePlot& plot) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    const std::string text = to_svg(plot);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw std::runtime_error("short write to " + path.string());
}

LinePlot profile_plot(const ode::RadialProfile& profile) {
    LinePlot plot;
    plot.x_label = "r";
    plot.y_label = "u";
    Curve c;
    c.x.assign(profile.grid.nodes().begin(), profile.grid.nodes().end());
    c.y = profile.values;
    plot.curves.push_back(std::move(c));
    return plot;
}

LinePlot latitude_plot(const graph::LatitudeField& field) {
    LinePlot plot;
    plot.x_label = "theta";
    plot.y_label = "u";
    Curve c;
    c.x.assign(field.theta_grid.nodes().begin(), field.theta_grid.nodes().end());
    c.y = field.values;
    c.color = "#8031a7";
    plot.curves.push_back(std::move(c));
    return plot;
}

LinePlot trajectory_plot(const flow::FlowTrajectory& trajectory) {
    LinePlot plot;
    plot.x_label = "r";
    plot.y_label = "u";
    const std::size_t count = trajectory.profiles.size();
    for (std::size_t k = 0; k < count; ++k) {
        const auto& p = trajectory.profiles[k];
        Curve c;
        c.x.assign(p.grid.nodes().begin(), p.grid.nodes().end());
        c.y = p.values;
        const double t = count > 1 ? static_cast<double>(k) / (count - 1) : 0.0;
        c.color = blend_hex(t, {0x1f, 0x2a, 0x6b}, {0xa8, 0xc4, 0xec});
        plot.curves.push_back(std::move(c));
    }
    return plot;
}

std::string graph_field_contour_svg(const graph::GraphField& field, int level_count, int size) {
    if (level_count < 1) throw std::invalid_argument("contour plot needs at least one level");
    const double margin = 28.0;
    const double scale = (size - 2.0 * margin) / (2.0 * field.R);
    const auto map_x = [&](double x) { return margin + (x + field.R) * scale; };
    const auto map_y = [&](double y) { return size - margin - (y + field.R) * scale; };

    const double limit = field.R * (1.0 + 1e-12);
    const auto in_disk = [&](std::size_t i, std::size_t j) {
        return std::hypot(field.coords[i], field.coords[j]) <= limit;
    };

    Range vr;
    for (std::size_t j = 0; j < field.side; ++j)
        for (std::size_t i = 0; i < field.side; ++i)
            if (in_disk(i, j)) vr.absorb(field.values[field.index(i, j)]);
    vr.widen_if_degenerate();

    std::string svg;
    append_header(svg, size, size);
    svg += "<circle cx=\"" + px(map_x(0.0)) + "\" cy=\"" + px(map_y(0.0)) + "\" r=\"" +
           px(field.R * scale) + "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1.2\"/>\n";

    for (int level = 1; level <= level_count; ++level) {
        const double value = vr.lo + (vr.hi - vr.lo) * level / (level_count + 1.0);
        const std::string color = blend_hex((level - 1.0) / std::max(1, level_count - 1),
                                            {0x20, 0x5d, 0xa8}, {0xc0, 0x3a, 0x2b});
        std::string segments;
        for (std::size_t j = 0; j + 1 < field.side; ++j) {
            for (std::size_t i = 0; i + 1 < field.side; ++i) {
                if (!(in_disk(i, j) && in_disk(i + 1, j) && in_disk(i, j + 1) &&
                      in_disk(i + 1, j + 1)))
                    continue;
                // corner values, counter-clockwise from lower-left
                const double v00 = field.values[field.index(i, j)];
                const double v10 = field.values[field.index(i + 1, j)];
                const double v11 = field.values[field.index(i + 1, j + 1)];
                const double v01 = field.values[field.index(i, j + 1)];
                const int mask = (v00 >= value ? 1 : 0) | (v10 >= value ? 2 : 0) |
                                 (v11 >= value ? 4 : 0) | (v01 >= value ? 8 : 0);
                if (mask == 0 || mask == 15) continue;

                const double xa = field.coords[i], xb = field.coords[i + 1];
                const double ya = field.coords[j], yb = field.coords[j + 1];
                const auto lerp = [value](double a, double b, double va, double vb) {
                    const double d = vb - va;
                    const double t = std::abs(d) < 1e-300 ? 0.5 : (value - va) / d;
                    return a + std::clamp(t, 0.0, 1.0) * (b - a);
                };
                // edge crossing points: bottom, right, top, left
                const double bx = lerp(xa, xb, v00, v10), by = ya;
                const double rx = xb, ry = lerp(ya, yb, v10, v11);
                const double tx = lerp(xa, xb, v01, v11), ty = yb;
                const double lx = xa, ly = lerp(ya, yb, v00, v01);

                const auto seg = [&](double ax, double ay, double cx, double cy) {
                    segments += "M" + px(map_x(ax)) + ' ' + px(map_y(ay)) + "L" + px(map_x(cx)) +
                                ' ' + px(map_y(cy));
                };
                switch (mask) {
                    case 1: case 14: seg(lx, ly, bx, by); break;
                    case 2: case 13: seg(bx, by, rx, ry); break;
                    case 3: case 12: seg(lx, ly, rx, ry); break;
                    case 4: case 11: seg(tx, ty, rx, ry); break;
                    case 6: case 9:  seg(bx, by, tx, ty); break;
                    case 7: case 8:  seg(lx, ly, tx, ty); break;
                    case 5: case 10: {
                        // saddle: split by the cell-average side
                        const double mean = 0.25 * (v00 + v10 + v11 + v01);
                        const bool center_high = mean >= value;
                        if ((mask == 5) == center_high) {
                            seg(lx, ly, tx, ty);
                            seg(bx, by, rx, ry);
                        } else {
                            seg(lx, ly, bx, by);
                            seg(tx, ty, rx, ry);
                        }
                        break;
                    }
                    default: break;
                }
            }
        }
        if (!segments.empty())
            svg += "<path d=\"" + segments + "\" fill=\"none\" stroke=\"" + color +
                   "\" stroke-width=\"1\"/>\n";
    }
    svg += "<text x=\"" + px(margin) + "\" y=\"" + px(size - 8.0) +
           "\" font-family=\"monospace\" font-size=\"11\">u in [" + format_real_brief(vr.lo) +
           ", " + format_real_brief(vr.hi) + "], " + std::to_string(level_count) +
           " levels</text>\n";
    svg += "</svg>\n";
    return svg;
}

void write_graph_field_contour_svg(const std::filesystem::path& path,
                                   const graph::GraphField& field, int level_count, int size) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    const std::string text = graph_field_contour_svg(field, level_count, size);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw std::runtime_error("short write to " + path.string());
}

} // namespace expanderlab::io

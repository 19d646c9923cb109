// render.hpp: static spacetime diagrams (binary PPM or SVG 1.1)
//
// Background: diverging map over mbar^2 (blue < 0, white = 0, red > 0) with a
// symmetric scale at the 99th percentile of |mbar^2|. Trajectories are black
// polylines; x runs horizontally, t upwards.

#pragma once

#include "io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

namespace kgbohm {

struct RenderInput {
    std::vector<FieldRow> field;
    int nt = 0;
    int nx = 0;
    std::vector<TrajRow> trajectories;
    bool primed = false;
};

struct Rgb {
    std::uint8_t r = 255, g = 255, b = 255;
};

namespace render_detail {

inline constexpr int plot_size = 600;
inline constexpr int margin_left = 50;
inline constexpr int margin_bottom = 50;
inline constexpr int margin_top = 20;
inline constexpr int margin_right = 20;
inline constexpr int width = margin_left + plot_size + margin_right;
inline constexpr int height = margin_top + plot_size + margin_bottom;

struct Bounds {
    double t_min, t_max, x_min, x_max;
};

inline Bounds bounds_of(const RenderInput& in)
{
    Bounds b{INFINITY, -INFINITY, INFINITY, -INFINITY};
    for (const auto& r : in.field) {
        b.t_min = std::min(b.t_min, r.t);
        b.t_max = std::max(b.t_max, r.t);
        b.x_min = std::min(b.x_min, r.x);
        b.x_max = std::max(b.x_max, r.x);
    }
    if (!(b.t_min < b.t_max) || !(b.x_min < b.x_max))
        throw ConfigError("field samples do not span a two-dimensional window");
    return b;
}

inline double color_scale(const RenderInput& in)
{
    std::vector<double> mags;
    mags.reserve(in.field.size());
    for (const auto& r : in.field)
        if (std::isfinite(r.mbar_sq))
            mags.push_back(std::abs(r.mbar_sq));
    if (mags.empty())
        return 0.0;
    const auto k = static_cast<std::size_t>(0.99 * static_cast<double>(mags.size() - 1));
    std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(k), mags.end());
    return mags[k];
}

inline Rgb diverging(double value, double scale)
{
    if (!(scale > 0.0) || !std::isfinite(value))
        return {};
    const double r = std::clamp(value / scale, -1.0, 1.0);
    const auto fade = [](double f) { return static_cast<std::uint8_t>(std::lround(255.0 * f)); };
    if (r >= 0.0)
        return {255, fade(1.0 - r), fade(1.0 - r)};
    return {fade(1.0 + r), fade(1.0 + r), 255};
}

struct Pixel {
    double px, py;
};

inline Pixel to_pixel(const Bounds& b, double t, double x)
{
    return {margin_left + (x - b.x_min) / (b.x_max - b.x_min) * (plot_size - 1),
            margin_top + (b.t_max - t) / (b.t_max - b.t_min) * (plot_size - 1)};
}

struct Cell {
    std::array<Pixel, 4> corners;
    Rgb color;
};

inline std::vector<Cell> cells_of(const RenderInput& in, const Bounds& b, double scale)
{
    if (in.nt < 2 || in.nx < 2 || in.field.size() != static_cast<std::size_t>(in.nt) * in.nx)
        throw ConfigError("field size does not match the recorded grid dimensions");
    std::vector<Cell> cells;
    cells.reserve(static_cast<std::size_t>(in.nt - 1) * (in.nx - 1));
    const auto at = [&](int it, int ix) -> const FieldRow& {
        return in.field[static_cast<std::size_t>(it) * in.nx + ix];
    };
    for (int it = 0; it + 1 < in.nt; ++it) {
        for (int ix = 0; ix + 1 < in.nx; ++ix) {
            const std::array<const FieldRow*, 4> c = {&at(it, ix), &at(it, ix + 1),
                                                      &at(it + 1, ix + 1), &at(it + 1, ix)};
            double sum = 0.0;
            int n = 0;
            Cell cell;
            for (std::size_t k = 0; k < 4; ++k) {
                cell.corners[k] = to_pixel(b, c[k]->t, c[k]->x);
                if (std::isfinite(c[k]->mbar_sq)) {
                    sum += c[k]->mbar_sq;
                    ++n;
                }
            }
            cell.color = diverging(n > 0 ? sum / n : 0.0, scale);
            cells.push_back(cell);
        }
    }
    return cells;
}

inline std::map<int, std::vector<Pixel>> polylines_of(const RenderInput& in, const Bounds& b)
{
    std::map<int, std::vector<Pixel>> lines;
    for (const auto& r : in.trajectories)
        lines[r.traj_id].push_back(to_pixel(b, r.t, r.x));
    return lines;
}

// 5x7 glyphs, one row per byte (low 5 bits, MSB on the left).
inline const std::array<std::uint8_t, 7>* glyph(char ch)
{
    static const std::array<std::uint8_t, 7> t = {0x08, 0x08, 0x1e, 0x08, 0x08, 0x09, 0x06};
    static const std::array<std::uint8_t, 7> x = {0x00, 0x00, 0x11, 0x0a, 0x04, 0x0a, 0x11};
    static const std::array<std::uint8_t, 7> prime = {0x04, 0x04, 0x08, 0x00, 0x00, 0x00, 0x00};
    switch (ch) {
    case 't': return &t;
    case 'x': return &x;
    case '\'': return &prime;
    default: return nullptr;
    }
}

class Canvas {
public:
    Canvas() : pix_(static_cast<std::size_t>(width) * height) {}

    void set(int x, int y, Rgb c)
    {
        if (x >= 0 && y >= 0 && x < width && y < height)
            pix_[static_cast<std::size_t>(y) * width + x] = c;
    }

    void fill_quad(const Cell& cell)
    {
        double lo_x = INFINITY, hi_x = -INFINITY, lo_y = INFINITY, hi_y = -INFINITY;
        for (const auto& p : cell.corners) {
            lo_x = std::min(lo_x, p.px);
            hi_x = std::max(hi_x, p.px);
            lo_y = std::min(lo_y, p.py);
            hi_y = std::max(hi_y, p.py);
        }
        const int x0 = std::max(margin_left, static_cast<int>(std::floor(lo_x)));
        const int x1 = std::min(margin_left + plot_size - 1, static_cast<int>(std::ceil(hi_x)));
        const int y0 = std::max(margin_top, static_cast<int>(std::floor(lo_y)));
        const int y1 = std::min(margin_top + plot_size - 1, static_cast<int>(std::ceil(hi_y)));
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x)
                if (inside(cell, x + 0.5, y + 0.5))
                    set(x, y, cell.color);
    }

    void line(Pixel a, Pixel b, Rgb c)
    {
        const double len = std::max(std::abs(b.px - a.px), std::abs(b.py - a.py));
        const int steps = std::max(1, static_cast<int>(std::ceil(len)));
        for (int i = 0; i <= steps; ++i) {
            const double f = static_cast<double>(i) / steps;
            const int x = static_cast<int>(std::lround(a.px + f * (b.px - a.px)));
            const int y = static_cast<int>(std::lround(a.py + f * (b.py - a.py)));
            if (x >= margin_left && x < margin_left + plot_size && y >= margin_top
                && y < margin_top + plot_size)
                set(x, y, c);
        }
    }

    void text(int x, int y, const std::string& s, int scale)
    {
        for (char ch : s) {
            if (const auto* g = glyph(ch)) {
                for (int row = 0; row < 7; ++row)
                    for (int col = 0; col < 5; ++col)
                        if ((*g)[row] & (0x10 >> col))
                            for (int dy = 0; dy < scale; ++dy)
                                for (int dx = 0; dx < scale; ++dx)
                                    set(x + col * scale + dx, y + row * scale + dy, {0, 0, 0});
            }
            x += 6 * scale;
        }
    }

    [[nodiscard]] std::string ppm() const
    {
        std::string out = "P6\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
        out.reserve(out.size() + pix_.size() * 3);
        for (const auto& p : pix_) {
            out += static_cast<char>(p.r);
            out += static_cast<char>(p.g);
            out += static_cast<char>(p.b);
        }
        return out;
    }

private:
    static bool inside(const Cell& cell, double x, double y)
    {
        int pos = 0, neg = 0;
        for (std::size_t k = 0; k < 4; ++k) {
            const auto& a = cell.corners[k];
            const auto& b = cell.corners[(k + 1) % 4];
            const double cross = (b.px - a.px) * (y - a.py) - (b.py - a.py) * (x - a.px);
            if (cross > 0)
                ++pos;
            else if (cross < 0)
                ++neg;
        }
        return pos == 0 || neg == 0;
    }

    std::vector<Rgb> pix_;
};

inline std::string fmt2(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

} // namespace render_detail

[[nodiscard]] inline std::string render_ppm(const RenderInput& in)
{
    using namespace render_detail;
    const Bounds b = bounds_of(in);
    const double scale = color_scale(in);
    Canvas canvas;
    for (const auto& cell : cells_of(in, b, scale))
        canvas.fill_quad(cell);
    for (const auto& [id, pts] : polylines_of(in, b))
        for (std::size_t i = 0; i + 1 < pts.size(); ++i)
            canvas.line(pts[i], pts[i + 1], {0, 0, 0});

    const Rgb black{0, 0, 0};
    const Pixel tl{static_cast<double>(margin_left - 1), static_cast<double>(margin_top - 1)};
    const Pixel br{static_cast<double>(margin_left + plot_size), static_cast<double>(margin_top + plot_size)};
    for (int x = static_cast<int>(tl.px); x <= static_cast<int>(br.px); ++x) {
        canvas.set(x, static_cast<int>(tl.py), black);
        canvas.set(x, static_cast<int>(br.py), black);
    }
    for (int y = static_cast<int>(tl.py); y <= static_cast<int>(br.py); ++y) {
        canvas.set(static_cast<int>(tl.px), y, black);
        canvas.set(static_cast<int>(br.px), y, black);
    }
    const std::string xl = in.primed ? "x'" : "x";
    const std::string tlab = in.primed ? "t'" : "t";
    canvas.text(margin_left + plot_size / 2 - 6, margin_top + plot_size + 18, xl, 2);
    canvas.text(14, margin_top + plot_size / 2 - 7, tlab, 2);
    return canvas.ppm();
}

[[nodiscard]] inline std::string render_svg(const RenderInput& in)
{
    using namespace render_detail;
    const Bounds b = bounds_of(in);
    const double scale = color_scale(in);

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
        + std::to_string(width) + "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 "
        + std::to_string(width) + " " + std::to_string(height) + "\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(width) + "\" height=\""
        + std::to_string(height) + "\" fill=\"white\"/>\n";
    out += "<g shape-rendering=\"crispEdges\" stroke=\"none\">\n";
    for (const auto& cell : cells_of(in, b, scale)) {
        if (cell.color.r == 255 && cell.color.g == 255 && cell.color.b == 255)
            continue;
        out += "<polygon points=\"";
        for (std::size_t k = 0; k < 4; ++k) {
            out += fmt2(cell.corners[k].px) + "," + fmt2(cell.corners[k].py);
            out += k < 3 ? " " : "";
        }
        out += "\" fill=\"rgb(" + std::to_string(cell.color.r) + "," + std::to_string(cell.color.g)
            + "," + std::to_string(cell.color.b) + ")\"/>\n";
    }
    out += "</g>\n";
    out += "<g fill=\"none\" stroke=\"black\" stroke-width=\"0.7\">\n";
    for (const auto& [id, pts] : polylines_of(in, b)) {
        out += "<polyline points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            out += fmt2(pts[i].px) + "," + fmt2(pts[i].py);
            out += i + 1 < pts.size() ? " " : "";
        }
        out += "\"/>\n";
    }
    out += "</g>\n";
    out += "<rect x=\"" + std::to_string(margin_left) + "\" y=\"" + std::to_string(margin_top)
        + "\" width=\"" + std::to_string(plot_size) + "\" height=\"" + std::to_string(plot_size)
        + "\" fill=\"none\" stroke=\"black\"/>\n";
    const std::string xl = in.primed ? "x&#8242;" : "x";
    const std::string tlab = in.primed ? "t&#8242;" : "t";
    out += "<text x=\"" + std::to_string(margin_left + plot_size / 2) + "\" y=\""
        + std::to_string(margin_top + plot_size + 35)
        + "\" font-family=\"serif\" font-size=\"18\" text-anchor=\"middle\">" + xl + "</text>\n";
    out += "<text x=\"20\" y=\"" + std::to_string(margin_top + plot_size / 2)
        + "\" font-family=\"serif\" font-size=\"18\" text-anchor=\"middle\">" + tlab + "</text>\n";
    out += "</svg>\n";
    return out;
}

} // namespace kgbohm

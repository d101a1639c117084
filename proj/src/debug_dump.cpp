#include "unfolder/debug_dump.hpp"

#include <algorithm>
#include <cmath>

namespace unfolder {

namespace {

Image to_rgb(const Image& gray) {
    Image out = Image::make(gray.width, gray.height, 3);
    for (int y = 0; y < gray.height; ++y)
        for (int x = 0; x < gray.width; ++x)
            for (int c = 0; c < 3; ++c) out.at(y, x, c) = gray.at(y, x, gray.channels == 3 ? c : 0);
    return out;
}

}  // namespace

Image edge_map_visual(const EdgeMap& em) {
    float mx = 0.0f;
    for (float v : em.data) mx = std::max(mx, v);
    Image out = Image::make(em.width, em.height, 1);
    if (mx <= 0.0f) return out;
    for (int y = 0; y < em.height; ++y)
        for (int x = 0; x < em.width; ++x)
            out.at(y, x) = static_cast<std::uint8_t>(std::lround(em.at(y, x) / mx * 255.0));
    return out;
}

Image hough_visual(const HoughImage& hi) {
    const int rows = 2 * hi.n - 1;
    double mx = 0.0;
    for (float v : hi.acc) mx = std::max(mx, std::log1p(static_cast<double>(v)));
    Image out = Image::make(hi.span, rows, 1);
    if (mx <= 0.0) return out;
    for (int u = 0; u < rows; ++u)
        for (int j = 0; j < hi.span; ++j)
            out.at(u, j) = static_cast<std::uint8_t>(std::lround(
                std::log1p(static_cast<double>(hi.acc[static_cast<std::size_t>(u) * hi.span + j])) /
                mx * 255.0));
    return out;
}

void draw_segment(Image& img, const Point2& a, const Point2& b, std::uint8_t r,
                  std::uint8_t g, std::uint8_t b_) {
    const double len = distance(a, b);
    const int steps = std::max(2, static_cast<int>(std::ceil(len * 2.0)));
    for (int i = 0; i <= steps; ++i) {
        const Point2 p = a + (b - a) * (static_cast<double>(i) / steps);
        const int x = static_cast<int>(std::floor(p.x));
        const int y = static_cast<int>(std::floor(p.y));
        if (x < 0 || y < 0 || x >= img.width || y >= img.height) continue;
        img.at(y, x, 0) = r;
        img.at(y, x, 1) = g;
        img.at(y, x, 2) = b_;
    }
}

void draw_line(Image& img, const Line2& l, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    // Clip against the image box by walking the dominant axis.
    if (std::abs(l.b) >= std::abs(l.a)) {
        for (int x = 0; x < img.width; ++x) {
            const double y = -(l.a * (x + 0.5) + l.c) / l.b;
            const int yi = static_cast<int>(std::floor(y));
            if (yi < 0 || yi >= img.height) continue;
            img.at(yi, x, 0) = r;
            img.at(yi, x, 1) = g;
            img.at(yi, x, 2) = b;
        }
    } else {
        for (int y = 0; y < img.height; ++y) {
            const double x = -(l.b * (y + 0.5) + l.c) / l.a;
            const int xi = static_cast<int>(std::floor(x));
            if (xi < 0 || xi >= img.width) continue;
            img.at(y, xi, 0) = r;
            img.at(y, xi, 1) = g;
            img.at(y, xi, 2) = b;
        }
    }
}

Image lines_overlay(const Image& work, const std::vector<LineH>& horizontal,
                    const std::vector<LineH>& vertical, const Line2& separator) {
    Image out = to_rgb(work);
    for (const LineH& l : horizontal) draw_line(out, l.line, 40, 200, 40);
    for (const LineH& l : vertical) draw_line(out, l.line, 220, 40, 40);
    draw_line(out, separator, 40, 80, 240);
    return out;
}

Image quads_overlay(const Image& work, const std::vector<ScoredQuad>& top,
                    const std::vector<ScoredQuad>& bottom) {
    Image out = to_rgb(work);
    for (const ScoredQuad& q : top)
        for (int i = 0; i < 4; ++i)
            draw_segment(out, q.quad.v[i], q.quad.v[(i + 1) % 4], 60, 200, 220);
    for (const ScoredQuad& q : bottom)
        for (int i = 0; i < 4; ++i)
            draw_segment(out, q.quad.v[i], q.quad.v[(i + 1) % 4], 230, 200, 40);
    return out;
}

Image hexangle_overlay(const Image& work, const Hexangle& h) {
    Image out = to_rgb(work);
    for (int i = 0; i < 6; ++i) draw_segment(out, h.v[i], h.v[(i + 1) % 6], 60, 230, 60);
    draw_segment(out, h.v[Hexangle::CL], h.v[Hexangle::CR], 230, 60, 230);
    return out;
}

}  // namespace unfolder

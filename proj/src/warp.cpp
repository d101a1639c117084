#include "unfolder/warp.hpp"

#include <algorithm>
#include <cmath>

namespace unfolder {

namespace {

// Fills output rows [y0, y1) through the canvas->source homography. The
// projective coordinates are advanced incrementally along each row.
void fill_rows(Image& out, const Image& src, const Homography& hom, int y0, int y1) {
    const auto& m = hom.data();
    const int w = out.width;
    const int ch = src.channels;
    for (int y = y0; y < y1; ++y) {
        const double cy = y + 0.5;
        double nx = m[0] * 0.5 + m[1] * cy + m[2];
        double ny = m[3] * 0.5 + m[4] * cy + m[5];
        double nw = m[6] * 0.5 + m[7] * cy + m[8];
        for (int x = 0; x < w; ++x) {
            const double sx = nx / nw;
            const double sy = ny / nw;
            // Inline bilinear with border clamp.
            const double u = sx - 0.5, v = sy - 0.5;
            int x0 = static_cast<int>(std::floor(u));
            int yy0 = static_cast<int>(std::floor(v));
            const double fx = u - x0, fy = v - yy0;
            const int x0c = std::clamp(x0, 0, src.width - 1);
            const int x1c = std::clamp(x0 + 1, 0, src.width - 1);
            const int y0c = std::clamp(yy0, 0, src.height - 1);
            const int y1c = std::clamp(yy0 + 1, 0, src.height - 1);
            const std::uint8_t* r0 = &src.data[(static_cast<std::size_t>(y0c) * src.width + x0c) * ch];
            const std::uint8_t* r0b = &src.data[(static_cast<std::size_t>(y0c) * src.width + x1c) * ch];
            const std::uint8_t* r1 = &src.data[(static_cast<std::size_t>(y1c) * src.width + x0c) * ch];
            const std::uint8_t* r1b = &src.data[(static_cast<std::size_t>(y1c) * src.width + x1c) * ch];
            std::uint8_t* dst = &out.data[(static_cast<std::size_t>(y) * w + x) * ch];
            for (int c = 0; c < ch; ++c) {
                const double top = r0[c] * (1.0 - fx) + r0b[c] * fx;
                const double bot = r1[c] * (1.0 - fx) + r1b[c] * fx;
                dst[c] = static_cast<std::uint8_t>(std::lround(top * (1.0 - fy) + bot * fy));
            }
            nx += m[0];
            ny += m[3];
            nw += m[6];
        }
    }
}

}  // namespace

RectifiedOutput rectify(const Image& img, const Hexangle& h, const Params& p) {
    const double w = p.out_w;
    const double hh = p.out_h;
    const double mid = hh / 2.0;

    const Quadrilateral canvas_upper =
        Quadrilateral::from({0, 0}, {w, 0}, {w, mid}, {0, mid});
    const Quadrilateral canvas_lower =
        Quadrilateral::from({0, mid}, {w, mid}, {w, hh}, {0, hh});
    const Quadrilateral src_upper = h.upper();
    const Quadrilateral src_lower = h.lower();
    if (!src_upper.valid() || !src_lower.valid())
        throw std::runtime_error("rectification failed");

    RectifiedOutput out;
    try {
        out.homographies[0] = homography_from_quad(canvas_upper, src_upper);
        out.homographies[1] = homography_from_quad(canvas_lower, src_lower);
    } catch (const std::exception&) {
        throw std::runtime_error("rectification failed");
    }
    out.hexangle = h;
    out.image = Image::make(p.out_w, p.out_h, img.channels);
    fill_rows(out.image, img, out.homographies[0], 0, p.out_h / 2);
    fill_rows(out.image, img, out.homographies[1], p.out_h / 2, p.out_h);
    return out;
}

}  // namespace unfolder

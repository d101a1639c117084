#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "unfolder/geometry.hpp"

namespace unfolder {

// 8-bit raster, row-major, interleaved channels (1 = gray, 3 = RGB).
// Pixel (row y, col x) occupies the continuous point (x + 0.5, y + 0.5).
struct Image {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<std::uint8_t> data;

    static Image make(int w, int h, int ch, std::uint8_t fill = 0);

    bool empty() const { return width == 0 || height == 0; }
    std::uint8_t& at(int y, int x, int c = 0) {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    std::uint8_t at(int y, int x, int c = 0) const {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    // Bilinear sample of one channel at continuous coordinates, clamped to
    // the image border.
    double sample(double x, double y, int c = 0) const;
};

// Per-orientation edge responses. "vertical" holds near-vertical edges
// (strong horizontal gradient); responses are integer-valued and >= 0.
struct EdgeMap {
    enum class Orientation { horizontal, vertical };

    Orientation orientation = Orientation::vertical;
    int width = 0;
    int height = 0;
    std::vector<float> data;

    static EdgeMap make(Orientation o, int w, int h);

    float at(int y, int x) const { return data[static_cast<std::size_t>(y) * width + x]; }
    float& at(int y, int x) { return data[static_cast<std::size_t>(y) * width + x]; }
    // Bilinear sample at continuous coordinates, zero outside.
    double sample(double x, double y) const;
    EdgeMap crop_rows(int y0, int y1) const;
    std::size_t nonzero_count() const;
};

// Luma conversion round(0.299 R + 0.587 G + 0.114 B); identity on 1-channel.
Image to_grayscale(const Image& img);

Image resize_bilinear(const Image& img, int out_w, int out_h);

// Exact k x k block mean (remainder rows/cols dropped).
Image box_reduce(const Image& img, int k);

struct WorkScale {
    // Continuous coordinates map as work = full * s per axis.
    double sx = 1.0;
    double sy = 1.0;

    Point2 to_full(const Point2& p) const { return {p.x / sx, p.y / sy}; }
    Point2 to_work(const Point2& p) const { return {p.x * sx, p.y * sy}; }
};

// Downscale so the longer side equals target_long (box reduce for the integer
// part, bilinear for the rest). Images already small enough pass through.
std::pair<Image, WorkScale> downscale_to_work(const Image& gray, int target_long);

// Separable Gaussian, radius ceil(3*sigma), kernel normalized to sum 1,
// borders clamped.
EdgeMap smooth(const EdgeMap& em, double sigma);

struct EdgeMaps {
    EdgeMap horizontal;
    EdgeMap vertical;
};

// Directional edge extraction on a grayscale image: box smoothing along the
// edge direction, absolute central difference across it, per-row (or
// per-column) non-maximum suppression, Otsu threshold over the non-zero
// gradient magnitudes of each map. Throws on images smaller than 16 x 16.
EdgeMaps extract_edges(const Image& gray);

}  // namespace unfolder

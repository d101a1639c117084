#include "unfolder/image.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace unfolder {

namespace {

constexpr int kBoxLen = 5;  // pre-smoothing window along the edge direction

// Otsu threshold over the non-zero values of a gradient map.
float otsu_nonzero(const std::vector<float>& grad) {
    float max_v = 0.0f;
    for (float v : grad) max_v = std::max(max_v, v);
    if (max_v <= 0.0f) return 0.0f;

    std::array<std::int64_t, 256> hist{};
    std::int64_t total = 0;
    const double scale = 255.0 / max_v;
    for (float v : grad) {
        if (v <= 0.0f) continue;
        const int bin = std::min(255, static_cast<int>(v * scale));
        ++hist[bin];
        ++total;
    }
    if (total == 0) return 0.0f;

    double sum_all = 0.0;
    for (int i = 0; i < 256; ++i) sum_all += static_cast<double>(i) * hist[i];

    double best_sigma = -1.0;
    int best_t = 0;
    double w0 = 0.0, sum0 = 0.0;
    for (int t = 0; t < 255; ++t) {
        w0 += hist[t];
        sum0 += static_cast<double>(t) * hist[t];
        const double w1 = total - w0;
        if (w0 <= 0.0 || w1 <= 0.0) continue;
        const double m0 = sum0 / w0;
        const double m1 = (sum_all - sum0) / w1;
        const double sigma = w0 * w1 * (m0 - m1) * (m0 - m1);
        if (sigma > best_sigma) {
            best_sigma = sigma;
            best_t = t;
        }
    }
    // Threshold between bins best_t and best_t + 1.
    return static_cast<float>((best_t + 0.5) / scale);
}

}  // namespace

EdgeMaps extract_edges(const Image& gray) {
    if (gray.channels != 1) throw std::invalid_argument("grayscale image required");
    if (gray.width < 16 || gray.height < 16) throw std::invalid_argument("too small");

    const int w = gray.width, h = gray.height;
    const int r = kBoxLen / 2;

    // Column sums of a vertical box window (edge direction of vertical edges)
    // and row sums for horizontal edges. Kept as plain sums so the responses
    // stay integer-valued.
    std::vector<std::int32_t> vbox(static_cast<std::size_t>(w) * h);
    std::vector<std::int32_t> hbox(static_cast<std::size_t>(w) * h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::int32_t sv = 0, sh = 0;
            for (int i = -r; i <= r; ++i) {
                sv += gray.at(std::clamp(y + i, 0, h - 1), x);
                sh += gray.at(y, std::clamp(x + i, 0, w - 1));
            }
            vbox[static_cast<std::size_t>(y) * w + x] = sv;
            hbox[static_cast<std::size_t>(y) * w + x] = sh;
        }
    }

    // Gradient magnitudes: horizontal central difference for vertical edges,
    // vertical central difference for horizontal edges.
    std::vector<float> gv(static_cast<std::size_t>(w) * h, 0.0f);
    std::vector<float> gh(static_cast<std::size_t>(w) * h, 0.0f);
    for (int y = 0; y < h; ++y) {
        for (int x = 1; x < w - 1; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            gv[i] = static_cast<float>(std::abs(vbox[i + 1] - vbox[i - 1]));
        }
    }
    for (int y = 1; y < h - 1; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            gh[i] = static_cast<float>(std::abs(hbox[i + w] - hbox[i - w]));
        }
    }

    const float tv = otsu_nonzero(gv);
    const float th = otsu_nonzero(gh);

    EdgeMaps out{EdgeMap::make(EdgeMap::Orientation::horizontal, w, h),
                 EdgeMap::make(EdgeMap::Orientation::vertical, w, h)};

    // Per-row NMS for vertical edges; plateau keeps its leftmost pixel.
    // Border pixels are excluded.
    for (int y = 0; y < h; ++y) {
        for (int x = 1; x < w - 1; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            const float g = gv[i];
            if (g > tv && g > gv[i - 1] && g >= gv[i + 1]) out.vertical.at(y, x) = g;
        }
    }
    // Per-column NMS for horizontal edges; plateau keeps its topmost pixel.
    for (int y = 1; y < h - 1; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            const float g = gh[i];
            if (g > th && g > gh[i - w] && g >= gh[i + w]) out.horizontal.at(y, x) = g;
        }
    }
    return out;
}

}  // namespace unfolder

#pragma once

#include <vector>

#include "unfolder/geometry.hpp"
#include "unfolder/image.hpp"

namespace unfolder {

struct PixelCoord {
    int x = 0;
    int y = 0;

    bool operator==(const PixelCoord&) const = default;
};

// 8-connected chain of edge pixels with at most one pixel per row (vertical
// orientation, ordered top to bottom) or per column (horizontal orientation,
// ordered left to right).
struct PathGraph {
    EdgeMap::Orientation orientation = EdgeMap::Orientation::vertical;
    std::vector<PixelCoord> pixels;

    int size() const { return static_cast<int>(pixels.size()); }
    // Continuous position of pixel i (raster index + 0.5).
    Point2 point(int i) const {
        return {pixels[i].x + 0.5, pixels[i].y + 0.5};
    }
};

// Decomposes the non-zero pixels of an edge map into path graphs. Every
// non-zero pixel belongs to exactly one chain; chains split where the
// one-pixel-per-row (or per-column) rule would break.
std::vector<PathGraph> path_graphs(const EdgeMap& em);

}  // namespace unfolder

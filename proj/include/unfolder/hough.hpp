#pragma once

#include <optional>
#include <vector>

#include "unfolder/geometry.hpp"
#include "unfolder/image.hpp"

namespace unfolder {

enum class LineFamily { horizontal, vertical };

struct LineH {
    Line2 line;          // global image coordinates
    double brightness = 0.0;
    LineFamily family = LineFamily::horizontal;
};

// Dyadic-pattern Hough accumulator. Patterns run along the primary axis
// (rows for the vertical family, columns for the horizontal one) and are
// displaced along the secondary axis. A pattern of length n with total
// displacement t >= 0 visits secondary offsets d_t(p) defined recursively:
// d over n points splits into two halves using slope floor(t/2), with the
// second half additionally shifted by ceil(t/2). Negative slopes mirror the
// source rows: cell (-t, a) sums M(q, a + d_t(pe-1-q)) over source rows q,
// where pe is the primary extent. Cell (t, j) accumulates the map values
// along the pattern anchored at secondary coordinate shift0 + j; the anchor
// sits at primary 0 for t >= 0 and at primary pe-1 for t < 0.
struct HoughImage {
    LineFamily family = LineFamily::vertical;
    int n = 0;              // pattern length (power of two >= primary extent)
    int span = 0;           // number of anchor positions
    int shift0 = 0;         // anchor coordinate of column 0
    int primary_extent = 0;
    int secondary_extent = 0;
    int x_offset = 0;       // origin of the source map inside the full image
    int y_offset = 0;
    std::vector<float> acc;  // (2n-1) rows; row u encodes slope t = u-(n-1)

    float at(int t, int anchor) const {
        return acc[static_cast<std::size_t>(t + (n - 1)) * span + (anchor - shift0)];
    }
    // Line through the pattern endpoints, in global image coordinates.
    Line2 to_line(int t, int anchor) const;
};

// Brady's fast discrete Radon approximation over both slope signs of the
// family; every cell equals the exact sum of map values along its pattern.
HoughImage fht(const EdgeMap& em, LineFamily family, int x_offset = 0, int y_offset = 0);

// k brightest local maxima after greedy non-maximum suppression with the
// given Chebyshev radius in accumulator space, brightness descending.
std::vector<LineH> top_lines(const HoughImage& hi, int k, int nms_radius);

// Brightest line whose perpendicular distance to p is below radius.
std::optional<LineH> brightest_near(const std::vector<LineH>& lines, const Point2& p,
                                    double radius);

}  // namespace unfolder

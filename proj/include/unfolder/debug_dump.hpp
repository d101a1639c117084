#pragma once

#include <string>
#include <vector>

#include "unfolder/hough.hpp"
#include "unfolder/image.hpp"
#include "unfolder/locate.hpp"

namespace unfolder {

// Visualizations written under a --debug-dir. All rasters go out as PNG.
Image edge_map_visual(const EdgeMap& em);
Image hough_visual(const HoughImage& hi);

void draw_segment(Image& img, const Point2& a, const Point2& b, std::uint8_t r,
                  std::uint8_t g, std::uint8_t b_);
void draw_line(Image& img, const Line2& l, std::uint8_t r, std::uint8_t g, std::uint8_t b);

Image lines_overlay(const Image& work, const std::vector<LineH>& horizontal,
                    const std::vector<LineH>& vertical, const Line2& separator);
Image quads_overlay(const Image& work, const std::vector<ScoredQuad>& top,
                    const std::vector<ScoredQuad>& bottom);
Image hexangle_overlay(const Image& work, const Hexangle& h);

}  // namespace unfolder

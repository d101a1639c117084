#pragma once

#include <array>

#include "unfolder/geometry.hpp"
#include "unfolder/image.hpp"
#include "unfolder/params.hpp"

namespace unfolder {

struct RectifiedOutput {
    Image image;                             // out_w x out_h, channels of the input
    Hexangle hexangle;                       // full-resolution coordinates
    std::array<Homography, 2> homographies;  // canvas -> source, upper and lower
};

// Maps the upper half of the hexangle onto canvas rows [0, out_h/2) and the
// lower half onto [out_h/2, out_h) with inverse mapping and bilinear
// interpolation; out-of-image samples clamp to the border. Throws
// std::runtime_error("rectification failed") on a degenerate half quad.
RectifiedOutput rectify(const Image& img, const Hexangle& h, const Params& p);

}  // namespace unfolder

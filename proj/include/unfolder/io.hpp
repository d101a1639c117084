#pragma once

#include <string>

#include "unfolder/image.hpp"

namespace unfolder {

// Decodes PNG/JPEG/TIFF into an 8-bit image (1 or 3 channels, RGB order).
// Throws std::runtime_error on failure.
Image load_image(const std::string& path);

// Encodes by file extension (.png, .jpg, .jpeg, .tif, .tiff).
void save_image(const std::string& path, const Image& img);

}  // namespace unfolder

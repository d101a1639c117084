#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "unfolder/image.hpp"

namespace unfolder {

std::vector<char32_t> decode_utf8(const std::string& s);

// Minimal insert/delete/substitute count over Unicode scalar values.
std::int64_t levenshtein(const std::string& a, const std::string& b);

// Five-scale MS-SSIM with an 11x11 Gaussian window (sigma 1.5), the standard
// scale weights and stabilizers from a dynamic range of 255. Inputs must be
// equal-size grayscale with min side >= 176.
double ms_ssim(const Image& a, const Image& b);

}  // namespace unfolder

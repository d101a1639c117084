#pragma once

#include <string>
#include <vector>

#include "unfolder/image.hpp"

namespace unfolder {

// External OCR process behind a command template. "{input}" is replaced by
// the path of a temporary PNG, "{langs}" by the '+'-joined language list.
struct OcrConfig {
    std::string command_template =
        "tesseract {input} stdout -l {langs} 2>/dev/null";
};

// Runs of whitespace collapse to single spaces, ends trimmed.
std::string normalize_whitespace(const std::string& s);

// Writes the image to a temporary file, runs the command and returns its
// normalized stdout. Throws std::runtime_error("ocr unavailable") when the
// command cannot run or exits nonzero.
std::string ocr_text(const Image& img, const std::vector<std::string>& languages,
                     const OcrConfig& cfg);

}  // namespace unfolder

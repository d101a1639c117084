#pragma once

#include <string>
#include <vector>

#include "unfolder/geometry.hpp"
#include "unfolder/image.hpp"

namespace unfolder {

struct FdiRecord {
    std::string id;  // image stem, e.g. "2t_001"
    std::string image_path;
    std::string reference_tiff_path;
    std::string language;
    std::string folding;  // 2fold | 3fold | 4fold | 8fold
    std::string scene;    // hand | table
    std::vector<Point2> vertices;
};

struct FdiFilter {
    std::string folding;  // empty = all
    std::string scene;    // empty or "all" = all
};

// Loads records from a dataset rooted at root_dir with images/, annotation/
// and reference/ subtrees. Enumeration follows the runlist.lst file of each
// terminal image directory; malformed entries are reported into diagnostics
// and skipped. Throws std::runtime_error("dataset layout invalid") when the
// root folders are missing.
std::vector<FdiRecord> load_fdi(const std::string& root_dir, const FdiFilter& filter,
                                std::vector<std::string>* diagnostics = nullptr);

// Axis-aligned bounding box of the vertices expanded by 20 px per side,
// clamped to the image. Throws on a degenerate box.
Image crop_c(const Image& img, const std::vector<Point2>& vertices);

}  // namespace unfolder

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "unfolder/image.hpp"
#include "unfolder/locate.hpp"
#include "unfolder/params.hpp"
#include "unfolder/warp.hpp"

namespace unfolder {

struct StageTimings {
    double prepare_ms = 0.0;   // grayscale + working-scale resize
    double edges_ms = 0.0;     // edge extraction + smoothing
    double hough_ms = 0.0;     // line detection, both halves
    double locate_ms = 0.0;    // quads, alternatives, correction, selection
    double warp_ms = 0.0;      // projective transformation
    double total_ms = 0.0;

    double localization_ms() const { return prepare_ms + edges_ms + hough_ms + locate_ms; }
    double transform_ms() const { return warp_ms; }
};

struct UnfoldResult {
    enum class Status { rectified, trivial };

    Status status = Status::trivial;
    Image output;                    // rectified canvas, or the unmodified input
    std::optional<Hexangle> hexangle;  // full-resolution coordinates
    StageTimings timings;
    std::vector<std::string> diagnostics;

    bool rectified() const { return status == Status::rectified; }
};

// The full localization + rectification pass. Algorithmic dead ends yield a
// trivial result (unmodified input); only undecodable/undersized images
// throw. Deterministic for a fixed input and parameter set.
UnfoldResult unfold(const Image& img, const Params& p);

// unfold with wall-clock stage timings populated.
UnfoldResult unfold_timed(const Image& img, const Params& p);

// unfold that also writes stage visualizations (edge maps, accumulators,
// line/quad/hexangle overlays, score ledger) into debug_dir.
UnfoldResult unfold_debug(const Image& img, const Params& p, const std::string& debug_dir);

}  // namespace unfolder

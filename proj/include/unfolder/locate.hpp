#pragma once

#include <array>
#include <optional>
#include <vector>

#include "unfolder/geometry.hpp"
#include "unfolder/hough.hpp"
#include "unfolder/image.hpp"
#include "unfolder/params.hpp"
#include "unfolder/path_graph.hpp"

namespace unfolder {

enum class Half { top, bottom };

struct ScoreBreakdown {
    double p_sum = 0.0;      // sum of edge responses along the segments
    double zero_ratio = 0.0; // zero samples over total samples
    double penalty = 0.0;    // outside-continuation penalty q
    double total = 0.0;      // p_sum / (zero_ratio + 1) - penalty
};

struct ScoredQuad {
    Quadrilateral quad;  // TL, TR, BR, BL
    Half half = Half::top;
    double score = 0.0;
    int left_graph = -1;   // assigned vertical path graphs (indices), -1 = none
    int right_graph = -1;

    Segment2 left_side() const { return {quad.v[0], quad.v[3]}; }
    Segment2 right_side() const { return {quad.v[1], quad.v[2]}; }
    // The side on the detected horizontal line (not on the separator).
    Segment2 outer_side() const {
        return half == Half::top ? Segment2{quad.v[0], quad.v[1]}
                                 : Segment2{quad.v[3], quad.v[2]};
    }
};

struct CreaseCandidate {
    Point2 vertex;
    double angle_deg = 180.0;
    std::array<Point2, 4> polyline;  // A*, B, C*, D*
};

struct HexAlternative {
    enum class Kind { h1, h2, h3, h4 };

    Hexangle hex;
    Kind kind = Kind::h1;
    int source_qt = -1;
    int source_qb = -1;
};

struct GlobalCreaseLine {
    LineH line;
    std::optional<Point2> vertex;
    bool vertex_on_left = false;
};

// All quadrilaterals formed by one horizontal line, the separator ls and two
// vertical lines, lying fully inside the given half with area at least 2% of
// it, scored over the three non-separator sides, sorted by score descending.
std::vector<ScoredQuad> enumerate_quads(const std::vector<LineH>& lh,
                                        const std::vector<LineH>& lv, const Line2& ls,
                                        Half half, int img_w, int img_h,
                                        const EdgeMap& sm_h, const EdgeMap& sm_v,
                                        const Params& p);

// Index of the path graph with the most pixels closer than delta_min_e to s;
// -1 unless that count exceeds rho_min * |s|. Ties break to the lower index.
int assign_path_graph(const Segment2& s, const std::vector<PathGraph>& graphs,
                      const Params& p);

// Maximal-boundary-fracture search along a vertical path graph.
std::optional<CreaseCandidate> detect_crease_point(const PathGraph& g, const Params& p);

// Brightest horizontal line within delta_max_c of the crease point.
std::optional<LineH> detect_crease_line_local(const Point2& crease_point,
                                              const std::vector<LineH>& lh,
                                              const Params& p);

// Crease-line search between the outer sides of the quad pair, with the
// crease vertex recovered from the intersection of the line's horizontal
// path graphs with a common vertical side graph.
std::optional<GlobalCreaseLine> detect_crease_line_global(
    const Quadrilateral& qt, const Quadrilateral& qb, const std::vector<LineH>& lh,
    const std::vector<PathGraph>& h_graphs, const PathGraph* common_left,
    const PathGraph* common_right, int img_w, int img_h, const Params& p);

struct LocateContext {
    const std::vector<PathGraph>* v_graphs = nullptr;
    const std::vector<PathGraph>* h_graphs = nullptr;
    const std::vector<LineH>* horizontal_lines = nullptr;  // both halves merged
    int img_w = 0;
    int img_h = 0;
    const Params* params = nullptr;
    // Memoized fracture results per vertical graph; sized like *v_graphs.
    std::vector<std::optional<std::optional<CreaseCandidate>>>* crease_cache = nullptr;
};

// Up to four hexangle alternatives for a quad pair sharing a vertical side
// path graph: h1 from the two fracture angles, h2/h3 from one angle plus the
// crease line, h4 from the crease line alone.
std::vector<HexAlternative> form_alternatives(const ScoredQuad& qt, const ScoredQuad& qb,
                                              LocateContext& ctx);

// Edge-support score over the six sides plus the crease segment, with the
// outside-continuation penalty at every vertex.
ScoreBreakdown contour_score(const Hexangle& h, const EdgeMap& sm_h, const EdgeMap& sm_v,
                             const Params& p);

// Correction to the concurrency criterion, aspect-ratio gate, score ranking
// of the uncorrected hexangles and the final over-correction rejection.
std::optional<Hexangle> select_hexangle(const std::vector<HexAlternative>& alts,
                                        const EdgeMap& sm_h, const EdgeMap& sm_v,
                                        int img_w, int img_h, const Params& p);

}  // namespace unfolder

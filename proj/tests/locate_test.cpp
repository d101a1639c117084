#include <doctest.h>

#include <cmath>

#include "unfolder/locate.hpp"
#include "unfolder/rng.hpp"

using namespace unfolder;

namespace {

// Writes value into the nearest-center pixel along the segment.
void raster_segment(EdgeMap& em, const Point2& a, const Point2& b, float value) {
    const double len = distance(a, b);
    const int steps = std::max(2, static_cast<int>(std::ceil(len * 2)));
    for (int i = 0; i <= steps; ++i) {
        const Point2 p = a + (b - a) * (static_cast<double>(i) / steps);
        const int x = static_cast<int>(std::lround(p.x - 0.5));
        const int y = static_cast<int>(std::lround(p.y - 0.5));
        if (x >= 0 && y >= 0 && x < em.width && y < em.height) em.at(y, x) = value;
    }
}

// Vertical chain x(y) around a fracture at row yv: both rays lean by
// tan_up/tan_dn horizontal pixels per row.
PathGraph two_ray_chain(int y0, int y1, int yv, double xv, double tan_up, double tan_dn) {
    PathGraph g;
    g.orientation = EdgeMap::Orientation::vertical;
    for (int y = y0; y < y1; ++y) {
        double x;
        if (y <= yv)
            x = xv + (yv - y) * tan_up;
        else
            x = xv + (y - yv) * tan_dn;
        g.pixels.push_back({static_cast<int>(std::lround(x)), y});
    }
    return g;
}

struct HexScene {
    Hexangle hex;
    EdgeMap eh;  // horizontal-edge map with the outline drawn in
    EdgeMap ev;  // vertical-edge map
};

HexScene make_hex_scene(int w = 640, int h = 480) {
    // Vertices sit on pixel centers; side chains bend by roughly 17 degrees
    // at the crease so the boundary fracture is well above the detection
    // threshold, and the crease runs close to the image midline.
    HexScene s{Hexangle::from_vertices({Point2{200.5, 25.5}, Point2{440.5, 30.5},
                                        Point2{475.5, 242.5}, Point2{445.5, 455.5},
                                        Point2{195.5, 450.5}, Point2{165.5, 238.5}}),
               EdgeMap::make(EdgeMap::Orientation::horizontal, w, h),
               EdgeMap::make(EdgeMap::Orientation::vertical, w, h)};
    const auto& v = s.hex.v;
    raster_segment(s.eh, v[Hexangle::TL], v[Hexangle::TR], 100.0f);
    raster_segment(s.eh, v[Hexangle::BL], v[Hexangle::BR], 100.0f);
    raster_segment(s.eh, v[Hexangle::CL], v[Hexangle::CR], 100.0f);
    raster_segment(s.ev, v[Hexangle::TL], v[Hexangle::CL], 100.0f);
    raster_segment(s.ev, v[Hexangle::CL], v[Hexangle::BL], 100.0f);
    raster_segment(s.ev, v[Hexangle::TR], v[Hexangle::CR], 100.0f);
    raster_segment(s.ev, v[Hexangle::CR], v[Hexangle::BR], 100.0f);
    return s;
}

}  // namespace

TEST_CASE("assign_path_graph") {
    Params p;
    const Segment2 s{{10.5, 0.5}, {10.5, 99.5}};

    SUBCASE("graph on the segment wins with full count") {
        PathGraph g;
        g.orientation = EdgeMap::Orientation::vertical;
        for (int y = 0; y < 100; ++y) g.pixels.push_back({10, y});
        const std::vector<PathGraph> graphs{g};
        CHECK(assign_path_graph(s, graphs, p) == 0);
    }
    SUBCASE("everything farther than delta_min_e is rejected") {
        PathGraph g;
        g.orientation = EdgeMap::Orientation::vertical;
        for (int y = 0; y < 100; ++y) g.pixels.push_back({20, y});
        CHECK(assign_path_graph(s, {g}, p) == -1);
    }
    SUBCASE("coverage ratio separates candidates") {
        PathGraph strong, weak;
        strong.orientation = weak.orientation = EdgeMap::Orientation::vertical;
        for (int y = 0; y < 80; ++y) strong.pixels.push_back({10, y});   // 80%
        for (int y = 0; y < 30; ++y) weak.pixels.push_back({11, y});     // 30%
        CHECK(assign_path_graph(s, {weak, strong}, p) == 1);
        CHECK(assign_path_graph(s, {weak}, p) == -1);  // below rho_min alone
    }
    SUBCASE("ties break to the lower index") {
        PathGraph g;
        g.orientation = EdgeMap::Orientation::vertical;
        for (int y = 0; y < 100; ++y) g.pixels.push_back({10, y});
        CHECK(assign_path_graph(s, {g, g}, p) == 0);
    }
}

TEST_CASE("detect_crease_point") {
    Params p;

    SUBCASE("straight chain has no fracture") {
        const PathGraph g = two_ray_chain(0, 100, 50, 30.0, 0.0, 0.0);
        CHECK(!detect_crease_point(g, p).has_value());
    }
    SUBCASE("leaning straight chain has no fracture") {
        const PathGraph g = two_ray_chain(0, 100, 50, 30.0, 0.21, -0.21);
        CHECK(!detect_crease_point(g, p).has_value());
    }
    SUBCASE("150-degree fracture is found at the bend") {
        // Rays 15 degrees off vertical on both sides.
        const double t = std::tan(15.0 * M_PI / 180.0);
        const PathGraph g = two_ray_chain(0, 101, 50, 50.0, t, t);
        const auto c = detect_crease_point(g, p);
        REQUIRE(c.has_value());
        CHECK(c->angle_deg == doctest::Approx(150.0).epsilon(2.0 / 150.0));
        CHECK(distance(c->vertex, Point2{50.5, 50.5}) < 1.0);
    }
    SUBCASE("175-degree bend is below the detection threshold") {
        const double t = std::tan(2.5 * M_PI / 180.0);
        const PathGraph g = two_ray_chain(0, 101, 50, 50.0, t, t);
        CHECK(!detect_crease_point(g, p).has_value());
    }
    SUBCASE("short chains are skipped") {
        const PathGraph g = two_ray_chain(0, 6, 3, 10.0, 0.5, 0.5);
        CHECK(!detect_crease_point(g, p).has_value());
    }
}

TEST_CASE("contour_score") {
    Params p;

    SUBCASE("outline on bright borders: no zeros, no penalty") {
        const HexScene s = make_hex_scene();
        const ScoreBreakdown sb = contour_score(s.hex, s.eh, s.ev, p);
        CHECK(sb.zero_ratio == doctest::Approx(0.0));
        CHECK(sb.penalty == doctest::Approx(0.0));
        CHECK(sb.total == doctest::Approx(sb.p_sum));
        CHECK(sb.p_sum > 0.0);
    }
    SUBCASE("fully dark maps: zero ratio one, zero total") {
        const HexScene s = make_hex_scene();
        const EdgeMap dark_h = EdgeMap::make(EdgeMap::Orientation::horizontal, 640, 480);
        const EdgeMap dark_v = EdgeMap::make(EdgeMap::Orientation::vertical, 640, 480);
        const ScoreBreakdown sb = contour_score(s.hex, dark_h, dark_v, p);
        CHECK(sb.p_sum == doctest::Approx(0.0));
        CHECK(sb.zero_ratio == doctest::Approx(1.0));
        CHECK(sb.penalty == doctest::Approx(0.0));
        CHECK(sb.total == doctest::Approx(0.0));
    }
    SUBCASE("an edge running past the hypothesized corner is penalized") {
        const HexScene s = make_hex_scene();
        // Corner pulled 10 px inward along the top side; the drawn top edge
        // now continues past it, so the prolongation picks up brightness.
        Hexangle undershoot = s.hex;
        const Point2 dir{-1.0, 0.0};
        undershoot.v[Hexangle::TR] = undershoot.v[Hexangle::TR] + dir * 10.0;
        const ScoreBreakdown good = contour_score(s.hex, s.eh, s.ev, p);
        const ScoreBreakdown bad = contour_score(undershoot, s.eh, s.ev, p);
        CHECK(bad.penalty > 0.0);
        CHECK(bad.total < good.total);
    }
    SUBCASE("monotone in added response") {
        const HexScene s = make_hex_scene();
        EdgeMap richer = s.eh;
        for (int x = 200; x < 400; ++x) richer.at(91, x) += 40.0f;
        const ScoreBreakdown base = contour_score(s.hex, s.eh, s.ev, p);
        const ScoreBreakdown more = contour_score(s.hex, richer, s.ev, p);
        CHECK(more.p_sum >= base.p_sum);
        CHECK(more.zero_ratio <= base.zero_ratio);
    }
}

TEST_CASE("enumerate_quads") {
    Params p;
    const int w = 640, h = 480;
    const Line2 ls = Line2::horizontal(240.0);
    const EdgeMap sm_h = EdgeMap::make(EdgeMap::Orientation::horizontal, w, h);
    const EdgeMap sm_v = EdgeMap::make(EdgeMap::Orientation::vertical, w, h);

    SUBCASE("no vertical lines, no quads") {
        const std::vector<LineH> lh{{Line2::horizontal(100.0), 10.0, LineFamily::horizontal}};
        CHECK(enumerate_quads(lh, {}, ls, Half::top, w, h, sm_h, sm_v, p).empty());
    }
    SUBCASE("one horizontal and two verticals make exactly one quad") {
        const std::vector<LineH> lh{{Line2::horizontal(80.0), 10.0, LineFamily::horizontal}};
        const std::vector<LineH> lv{{Line2::vertical(100.0), 9.0, LineFamily::vertical},
                                    {Line2::vertical(500.0), 9.0, LineFamily::vertical}};
        const auto quads = enumerate_quads(lh, lv, ls, Half::top, w, h, sm_h, sm_v, p);
        REQUIRE(quads.size() == 1);
        CHECK(quads[0].quad.v[0].x == doctest::Approx(100.0));
        CHECK(quads[0].quad.v[0].y == doctest::Approx(80.0));
        CHECK(quads[0].quad.v[2].x == doctest::Approx(500.0));
        CHECK(quads[0].quad.v[2].y == doctest::Approx(240.0));
    }
    SUBCASE("quads outside the half or too small are dropped") {
        // Horizontal below the separator cannot bound a top-half quad.
        const std::vector<LineH> lh{{Line2::horizontal(300.0), 10.0, LineFamily::horizontal}};
        const std::vector<LineH> lv{{Line2::vertical(100.0), 9.0, LineFamily::vertical},
                                    {Line2::vertical(500.0), 9.0, LineFamily::vertical}};
        CHECK(enumerate_quads(lh, lv, ls, Half::top, w, h, sm_h, sm_v, p).empty());
        // Sliver quad below the 2% area floor.
        const std::vector<LineH> lh2{{Line2::horizontal(238.0), 10.0, LineFamily::horizontal}};
        CHECK(enumerate_quads(lh2, lv, ls, Half::top, w, h, sm_h, sm_v, p).empty());
    }
    SUBCASE("all corners stay inside the stated half on random line sets") {
        Rng rng(11);
        for (int trial = 0; trial < 30; ++trial) {
            std::vector<LineH> lh, lv;
            for (int i = 0; i < 4; ++i) {
                const double y = rng.uniform(-50.0, 520.0);
                const double tilt = rng.uniform(-0.3, 0.3);
                lh.push_back({Line2::through({0.0, y}, {640.0, y + tilt * 640.0}), 1.0,
                              LineFamily::horizontal});
                const double x = rng.uniform(-50.0, 680.0);
                lv.push_back({Line2::through({x, 0.0}, {x + tilt * 480.0, 480.0}), 1.0,
                              LineFamily::vertical});
            }
            for (const Half half : {Half::top, Half::bottom}) {
                for (const ScoredQuad& q :
                     enumerate_quads(lh, lv, ls, half, w, h, sm_h, sm_v, p)) {
                    for (const Point2& c : q.quad.v) {
                        CHECK(c.x >= -1e-6);
                        CHECK(c.x <= w + 1e-6);
                        if (half == Half::top) {
                            CHECK(c.y >= -1e-6);
                            CHECK(c.y <= 240.0 + 1e-6);
                        } else {
                            CHECK(c.y >= 240.0 - 1e-6);
                            CHECK(c.y <= h + 1e-6);
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("form_alternatives on a constructed scene") {
    Params p;
    const int w = 640, h = 480;
    const HexScene scene = make_hex_scene(w, h);
    const auto& hv = scene.hex.v;

    // Side chains with a fracture at the crease vertices.
    std::vector<PathGraph> v_graphs;
    {
        PathGraph left, right;
        left.orientation = right.orientation = EdgeMap::Orientation::vertical;
        auto chain = [](const Point2& a, const Point2& b, const Point2& c) {
            PathGraph g;
            g.orientation = EdgeMap::Orientation::vertical;
            const int y0 = static_cast<int>(a.y), y1 = static_cast<int>(c.y);
            for (int y = y0; y <= y1; ++y) {
                const double yc = y + 0.5;
                const Point2 &p0 = yc <= b.y ? a : b, &p1 = yc <= b.y ? b : c;
                const double t = (yc - p0.y) / (p1.y - p0.y);
                g.pixels.push_back(
                    {static_cast<int>(std::lround(p0.x + (p1.x - p0.x) * t - 0.5)), y});
            }
            return g;
        };
        v_graphs.push_back(chain(hv[Hexangle::TL], hv[Hexangle::CL], hv[Hexangle::BL]));
        v_graphs.push_back(chain(hv[Hexangle::TR], hv[Hexangle::CR], hv[Hexangle::BR]));
    }
    // Crease path graph spanning the crease segment, one pixel per column.
    std::vector<PathGraph> h_graphs;
    {
        PathGraph crease;
        crease.orientation = EdgeMap::Orientation::horizontal;
        const Point2 a = hv[Hexangle::CL], b = hv[Hexangle::CR];
        for (int x = static_cast<int>(a.x); x <= static_cast<int>(b.x); ++x) {
            const double t = (x + 0.5 - a.x) / (b.x - a.x);
            crease.pixels.push_back(
                {x, static_cast<int>(std::lround(a.y + (b.y - a.y) * t - 0.5))});
        }
        h_graphs.push_back(crease);
    }

    std::vector<LineH> lines;
    lines.push_back({Line2::through(hv[Hexangle::CL], hv[Hexangle::CR]), 500.0,
                     LineFamily::horizontal});
    lines.push_back({Line2::through(hv[Hexangle::TL], hv[Hexangle::TR]), 400.0,
                     LineFamily::horizontal});
    lines.push_back({Line2::through(hv[Hexangle::BL], hv[Hexangle::BR]), 400.0,
                     LineFamily::horizontal});

    // Quads bounded by the separator, their vertical sides on the true
    // half-specific boundary lines.
    const Line2 ls = Line2::horizontal(240.0);
    auto meet = [&](const Point2& a, const Point2& b) {
        return intersect(Line2::through(a, b), ls).point();
    };
    ScoredQuad qt, qb;
    qt.half = Half::top;
    qt.quad = Quadrilateral::from(hv[Hexangle::TL], hv[Hexangle::TR],
                                  meet(hv[Hexangle::TR], hv[Hexangle::CR]),
                                  meet(hv[Hexangle::TL], hv[Hexangle::CL]));
    qb.half = Half::bottom;
    qb.quad = Quadrilateral::from(meet(hv[Hexangle::CL], hv[Hexangle::BL]),
                                  meet(hv[Hexangle::CR], hv[Hexangle::BR]),
                                  hv[Hexangle::BR], hv[Hexangle::BL]);
    REQUIRE(qt.quad.valid());
    REQUIRE(qb.quad.valid());
    qt.left_graph = assign_path_graph(qt.left_side(), v_graphs, p);
    qt.right_graph = assign_path_graph(qt.right_side(), v_graphs, p);
    qb.left_graph = assign_path_graph(qb.left_side(), v_graphs, p);
    qb.right_graph = assign_path_graph(qb.right_side(), v_graphs, p);
    REQUIRE(qt.left_graph == 0);
    REQUIRE(qt.right_graph == 1);
    REQUIRE(qb.left_graph == 0);
    REQUIRE(qb.right_graph == 1);

    std::vector<std::optional<std::optional<CreaseCandidate>>> cache(v_graphs.size());
    LocateContext ctx;
    ctx.v_graphs = &v_graphs;
    ctx.h_graphs = &h_graphs;
    ctx.horizontal_lines = &lines;
    ctx.img_w = w;
    ctx.img_h = h;
    ctx.params = &p;
    ctx.crease_cache = &cache;

    const auto alts = form_alternatives(qt, qb, ctx);
    REQUIRE(alts.size() == 4);  // both fracture angles plus the crease line
    bool kinds[4] = {false, false, false, false};
    for (const HexAlternative& a : alts) {
        kinds[static_cast<int>(a.kind)] = true;
        CHECK(a.hex.valid());
        // Crease vertices land near the true crease.
        CHECK(distance(a.hex.v[Hexangle::CL], hv[Hexangle::CL]) < 6.0);
        CHECK(distance(a.hex.v[Hexangle::CR], hv[Hexangle::CR]) < 6.0);
    }
    for (bool k : kinds) CHECK(k);

    SUBCASE("no common side graph, no alternatives") {
        ScoredQuad lonely = qt;
        lonely.left_graph = -1;
        lonely.right_graph = -1;
        CHECK(form_alternatives(lonely, qb, ctx).empty());
    }
}

TEST_CASE("select_hexangle") {
    Params p;
    const int w = 640, h = 480;

    SUBCASE("no alternatives, no hexangle") {
        const EdgeMap e = EdgeMap::make(EdgeMap::Orientation::horizontal, w, h);
        CHECK(!select_hexangle({}, e, e, w, h, p).has_value());
    }

    // Fronto-parallel outline proportioned like a folded page: each half is
    // close to the reference aspect ratio, so the gate passes.
    const Hexangle truth = Hexangle::from_vertices(
        {Point2{170, 28},  Point2{470, 28},  Point2{470, 240},
         Point2{470, 452}, Point2{170, 452}, Point2{170, 240}});
    HexScene s{truth, EdgeMap::make(EdgeMap::Orientation::horizontal, w, h),
               EdgeMap::make(EdgeMap::Orientation::vertical, w, h)};
    raster_segment(s.eh, truth.v[0], truth.v[1], 80.0f);
    raster_segment(s.eh, truth.v[4], truth.v[3], 80.0f);
    raster_segment(s.eh, truth.v[5], truth.v[2], 80.0f);
    raster_segment(s.ev, truth.v[0], truth.v[5], 80.0f);
    raster_segment(s.ev, truth.v[5], truth.v[4], 80.0f);
    raster_segment(s.ev, truth.v[1], truth.v[2], 80.0f);
    raster_segment(s.ev, truth.v[2], truth.v[3], 80.0f);

    SUBCASE("true outline beats a shifted decoy and is returned uncorrected") {
        Hexangle decoy = truth;
        for (Point2& v : decoy.v) v.x += 25.0;
        const std::vector<HexAlternative> alts{{truth, HexAlternative::Kind::h1, 0, 0},
                                               {decoy, HexAlternative::Kind::h1, 0, 0}};
        const auto sel = select_hexangle(alts, s.eh, s.ev, w, h, p);
        REQUIRE(sel.has_value());
        for (int i = 0; i < 6; ++i) CHECK(distance(sel->v[i], truth.v[i]) < 1e-6);
    }
    SUBCASE("over-corrected alternative is rejected") {
        // Tilt the crease well off the pencil: the correction then moves the
        // crease vertices by more than rho_max_v of the image height.
        Hexangle bent = truth;
        bent.v[Hexangle::CL].y += 14.0;
        bent.v[Hexangle::CR].y -= 14.0;
        const std::vector<HexAlternative> alts{{bent, HexAlternative::Kind::h1, 0, 0}};
        CHECK(!select_hexangle(alts, s.eh, s.ev, w, h, p).has_value());
    }
    SUBCASE("aspect gate drops implausible shapes") {
        // A narrow sliver of the page: ratio far from the reference.
        Hexangle sliver = truth;
        sliver.v[Hexangle::TR].x = sliver.v[Hexangle::TL].x + 60.0;
        sliver.v[Hexangle::CR].x = sliver.v[Hexangle::CL].x + 60.0;
        sliver.v[Hexangle::BR].x = sliver.v[Hexangle::BL].x + 60.0;
        const std::vector<HexAlternative> alts{{sliver, HexAlternative::Kind::h1, 0, 0}};
        CHECK(!select_hexangle(alts, s.eh, s.ev, w, h, p).has_value());
    }
}

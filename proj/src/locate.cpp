#include "unfolder/locate.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace unfolder {

namespace {

constexpr double kZeroResponse = 1e-6;

struct ScoredSegment {
    Segment2 seg;
    bool horizontal_map;
};

struct PenaltyRay {
    Point2 origin;
    Point2 dir;  // unit, pointing outward
    bool horizontal_map;
};

Point2 unit_dir(const Point2& from, const Point2& to) {
    const Point2 d = to - from;
    const double n = d.norm();
    return {d.x / n, d.y / n};
}

// Samples are taken at one-pixel arc-length steps (midpoint positions), so
// the sample count of a segment equals its rounded length.
ScoreBreakdown polyline_score(const std::vector<ScoredSegment>& segments,
                              const std::vector<PenaltyRay>& rays, const EdgeMap& sm_h,
                              const EdgeMap& sm_v, const Params& p) {
    ScoreBreakdown out;
    std::int64_t total_samples = 0;
    std::int64_t zero_samples = 0;
    for (const ScoredSegment& s : segments) {
        const EdgeMap& map = s.horizontal_map ? sm_h : sm_v;
        const double len = s.seg.length();
        const int n = std::max<int>(1, static_cast<int>(std::llround(len)));
        for (int j = 0; j < n; ++j) {
            const Point2 pos = s.seg.at((j + 0.5) / n);
            const double v = map.sample(pos.x, pos.y);
            out.p_sum += v;
            if (v < kZeroResponse) ++zero_samples;
        }
        total_samples += n;
    }
    // Penalty reads discrete pixels along the prolongation, starting at the
    // first pixel past the vertex.
    for (const PenaltyRay& r : rays) {
        const EdgeMap& map = r.horizontal_map ? sm_h : sm_v;
        const int n = std::max<int>(1, static_cast<int>(std::llround(p.beta_p)));
        for (int j = 1; j <= n; ++j) {
            const int x = static_cast<int>(std::floor(r.origin.x + r.dir.x * j));
            const int y = static_cast<int>(std::floor(r.origin.y + r.dir.y * j));
            if (x < 0 || y < 0 || x >= map.width || y >= map.height) continue;
            out.penalty += map.at(y, x);
        }
    }
    out.zero_ratio = total_samples > 0 ? static_cast<double>(zero_samples) / total_samples : 1.0;
    out.total = out.p_sum / (out.zero_ratio + 1.0) - out.penalty;
    return out;
}

bool inside_half(const Point2& pt, Half half, int img_w, int img_h) {
    const double tol = 1e-7;
    if (pt.x < -tol || pt.x > img_w + tol) return false;
    const double mid = img_h / 2.0;
    if (half == Half::top) return pt.y >= -tol && pt.y <= mid + tol;
    return pt.y >= mid - tol && pt.y <= img_h + tol;
}

// Quadratic error of the chain interior against an arbitrary line, O(1) via
// prefix moments.
struct ChainMoments {
    std::vector<double> sx, sy, sxx, syy, sxy;

    explicit ChainMoments(const PathGraph& g) {
        const int n = g.size();
        sx.assign(n + 1, 0.0);
        sy.assign(n + 1, 0.0);
        sxx.assign(n + 1, 0.0);
        syy.assign(n + 1, 0.0);
        sxy.assign(n + 1, 0.0);
        for (int i = 0; i < n; ++i) {
            const Point2 pt = g.point(i);
            sx[i + 1] = sx[i] + pt.x;
            sy[i + 1] = sy[i] + pt.y;
            sxx[i + 1] = sxx[i] + pt.x * pt.x;
            syy[i + 1] = syy[i] + pt.y * pt.y;
            sxy[i + 1] = sxy[i] + pt.x * pt.y;
        }
    }

    // Mean squared line distance over indices (i0, i1) exclusive. The mean
    // keeps the eps_c / eps_o thresholds in per-point units; a raw sum would
    // trip them on the rounding noise of any rasterized chain.
    double error(int i0, int i1, const Line2& l) const {
        const int lo = i0 + 1, hi = i1;  // [lo, hi)
        const double cnt = hi - lo;
        if (cnt <= 0) return 0.0;
        const double mx = sx[hi] - sx[lo];
        const double my = sy[hi] - sy[lo];
        const double mxx = sxx[hi] - sxx[lo];
        const double myy = syy[hi] - syy[lo];
        const double mxy = sxy[hi] - sxy[lo];
        const double sum = l.a * l.a * mxx + 2.0 * l.a * l.b * mxy + l.b * l.b * myy +
                           2.0 * l.c * (l.a * mx + l.b * my) + l.c * l.c * cnt;
        return sum / cnt;
    }
};

std::optional<CreaseCandidate> crease_for_graph(LocateContext& ctx, int graph_idx) {
    auto& slot = (*ctx.crease_cache)[graph_idx];
    if (!slot.has_value()) slot = detect_crease_point((*ctx.v_graphs)[graph_idx], *ctx.params);
    return *slot;
}

// Midpoint of the crease line's intersections with the supporting lines of
// one side's vertical segments of both quads.
std::optional<Point2> midpoint_vertex(const Line2& crease, const ScoredQuad& qt,
                                      const ScoredQuad& qb, bool left) {
    const Segment2 st = left ? qt.left_side() : qt.right_side();
    const Segment2 sb = left ? qb.left_side() : qb.right_side();
    try {
        const HomoPoint a = intersect(crease, st.line());
        const HomoPoint b = intersect(crease, sb.line());
        if (a.at_infinity() || b.at_infinity()) return std::nullopt;
        const Point2 pa = a.point(), pb = b.point();
        return Point2{(pa.x + pb.x) * 0.5, (pa.y + pb.y) * 0.5};
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::optional<HexAlternative> make_alternative(HexAlternative::Kind kind, const Point2& cl,
                                               const Point2& cr, const ScoredQuad& qt,
                                               const ScoredQuad& qb, int iqt, int iqb) {
    Hexangle hex;
    hex.v[Hexangle::TL] = qt.quad.v[0];
    hex.v[Hexangle::TR] = qt.quad.v[1];
    hex.v[Hexangle::CR] = cr;
    hex.v[Hexangle::BR] = qb.quad.v[2];
    hex.v[Hexangle::BL] = qb.quad.v[3];
    hex.v[Hexangle::CL] = cl;
    for (const Point2& pt : hex.v)
        if (!std::isfinite(pt.x) || !std::isfinite(pt.y)) return std::nullopt;
    if (!hex.valid()) return std::nullopt;
    return HexAlternative{hex, kind, iqt, iqb};
}

}  // namespace

std::vector<ScoredQuad> enumerate_quads(const std::vector<LineH>& lh,
                                        const std::vector<LineH>& lv, const Line2& ls,
                                        Half half, int img_w, int img_h,
                                        const EdgeMap& sm_h, const EdgeMap& sm_v,
                                        const Params& p) {
    std::vector<ScoredQuad> out;
    const double min_area = 0.02 * img_w * (img_h / 2.0);

    for (const LineH& hl : lh) {
        for (std::size_t i = 0; i < lv.size(); ++i) {
            for (std::size_t j = i + 1; j < lv.size(); ++j) {
                Point2 corners[4];
                const LineH* vl = &lv[i];
                const LineH* vr = &lv[j];
                try {
                    Point2 mi = intersect(vl->line, ls).point();
                    Point2 mj = intersect(vr->line, ls).point();
                    if (mj.x < mi.x) {
                        std::swap(vl, vr);
                        std::swap(mi, mj);
                    }
                    const Point2 oi = intersect(hl.line, vl->line).point();
                    const Point2 oj = intersect(hl.line, vr->line).point();
                    if (half == Half::top) {
                        corners[0] = oi;  // TL
                        corners[1] = oj;  // TR
                        corners[2] = mj;  // BR
                        corners[3] = mi;  // BL
                    } else {
                        corners[0] = mi;
                        corners[1] = mj;
                        corners[2] = oj;
                        corners[3] = oi;
                    }
                } catch (const std::exception&) {
                    continue;  // parallel or coincident configuration
                }

                ScoredQuad sq;
                sq.quad.v = {corners[0], corners[1], corners[2], corners[3]};
                sq.half = half;
                if (!sq.quad.valid() || sq.quad.area() < min_area) continue;
                bool inside = true;
                for (const Point2& c : sq.quad.v)
                    inside = inside && inside_half(c, half, img_w, img_h);
                if (!inside) continue;

                const Segment2 outer = sq.outer_side();
                const std::vector<ScoredSegment> segs{{sq.left_side(), false},
                                                      {outer, true},
                                                      {sq.right_side(), false}};
                const Point2 ol = outer.p0, orr = outer.p1;
                const Point2 mlo = half == Half::top ? sq.quad.v[3] : sq.quad.v[0];
                const Point2 mro = half == Half::top ? sq.quad.v[2] : sq.quad.v[1];
                const std::vector<PenaltyRay> rays{
                    {ol, unit_dir(orr, ol), true},
                    {ol, unit_dir(mlo, ol), false},
                    {orr, unit_dir(ol, orr), true},
                    {orr, unit_dir(mro, orr), false},
                };
                sq.score = polyline_score(segs, rays, sm_h, sm_v, p).total;
                out.push_back(sq);
            }
        }
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const ScoredQuad& a, const ScoredQuad& b) { return a.score > b.score; });
    return out;
}

int assign_path_graph(const Segment2& s, const std::vector<PathGraph>& graphs,
                      const Params& p) {
    int best = -1;
    int best_count = 0;
    for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
        int count = 0;
        for (int i = 0; i < graphs[gi].size(); ++i) {
            if (s.dist(graphs[gi].point(i)) < p.delta_min_e) ++count;
        }
        if (count > best_count) {  // ties keep the lower index
            best_count = count;
            best = static_cast<int>(gi);
        }
    }
    if (best < 0 || best_count <= p.rho_min * s.length()) return -1;
    return best;
}

std::optional<CreaseCandidate> detect_crease_point(const PathGraph& g, const Params& p) {
    const int n = g.size();
    if (n < 8) return std::nullopt;
    const ChainMoments mom(g);

    // Outer segments shorter than this give meaningless directions on a
    // rasterized chain.
    constexpr int kMinOuterSpan = 4;

    std::optional<CreaseCandidate> best;
    for (int b = kMinOuterSpan; b + 2 < n; ++b) {
        const Point2 pb = g.point(b);

        // Shortest central span whose interior regression error reaches eps_c.
        int cbar = -1;
        for (int c = b + 2; c < n; ++c) {
            const Line2 l = Line2::through(pb, g.point(c));
            if (mom.error(b, c, l) >= p.eps_c) {
                cbar = c;
                break;
            }
        }
        if (cbar < 0) continue;
        const int cstar = cbar - 1;
        if (cstar + kMinOuterSpan >= n) continue;
        const Point2 pc = g.point(cstar);

        // Longest outer spans keeping the regression error within eps_o.
        int a_best = b - 1;
        for (int a = b - 1; a >= 0; --a) {
            const Line2 l = Line2::through(g.point(a), pb);
            if (mom.error(a, b, l) <= p.eps_o) a_best = a;
        }
        int d_best = cstar + 1;
        for (int d = cstar + 1; d < n; ++d) {
            const Line2 l = Line2::through(pc, g.point(d));
            if (mom.error(cstar, d, l) <= p.eps_o) d_best = d;
        }
        if (b - a_best < kMinOuterSpan || d_best - cstar < kMinOuterSpan) continue;

        const Point2 pa = g.point(a_best);
        const Point2 pd = g.point(d_best);
        const Line2 lab = Line2::through(pa, pb);
        const Line2 lcd = Line2::through(pc, pd);
        const Point2 u1 = lab.direction();
        const Point2 u2 = lcd.direction();
        const double cosv = std::clamp(std::abs(u1.dot(u2)), 0.0, 1.0);
        const double angle = 180.0 - std::acos(cosv) * 180.0 / M_PI;

        Point2 vertex;
        try {
            const HomoPoint x = intersect(lab, lcd);
            vertex = x.at_infinity() ? Segment2{pb, pc}.midpoint() : x.point();
        } catch (const std::exception&) {
            vertex = Segment2{pb, pc}.midpoint();
        }

        if (!best || angle < best->angle_deg)
            best = CreaseCandidate{vertex, angle, {pa, pb, pc, pd}};
    }
    if (!best || best->angle_deg >= p.phi_max_c) return std::nullopt;
    return best;
}

std::optional<LineH> detect_crease_line_local(const Point2& crease_point,
                                              const std::vector<LineH>& lh,
                                              const Params& p) {
    return brightest_near(lh, crease_point, p.delta_max_c);
}

std::optional<GlobalCreaseLine> detect_crease_line_global(
    const Quadrilateral& qt, const Quadrilateral& qb, const std::vector<LineH>& lh,
    const std::vector<PathGraph>& h_graphs, const PathGraph* common_left,
    const PathGraph* common_right, int img_w, int img_h, const Params& p) {
    (void)img_h;
    const Line2 left_border = Line2::vertical(0.0);
    const Line2 right_border = Line2::vertical(static_cast<double>(img_w));
    const Line2 top_outer = Line2::through(qt.v[0], qt.v[1]);
    const Line2 bottom_outer = Line2::through(qb.v[3], qb.v[2]);

    auto boundary_y = [](const Line2& l, const Line2& border) -> std::optional<double> {
        try {
            const HomoPoint x = intersect(l, border);
            if (x.at_infinity()) return std::nullopt;
            return x.point().y;
        } catch (const std::exception&) {
            return std::nullopt;
        }
    };
    const auto tl = boundary_y(top_outer, left_border);
    const auto bl = boundary_y(bottom_outer, left_border);
    const auto tr = boundary_y(top_outer, right_border);
    const auto br = boundary_y(bottom_outer, right_border);
    if (!tl || !bl || !tr || !br) return std::nullopt;

    auto in_interval = [&](double y, double y0, double y1) {
        const double lo = std::min(y0, y1) + p.delta_min_b;
        const double hi = std::max(y0, y1) - p.delta_min_b;
        return y >= lo && y <= hi;
    };

    const LineH* best = nullptr;
    for (const LineH& cand : lh) {
        const auto yl = boundary_y(cand.line, left_border);
        const auto yr = boundary_y(cand.line, right_border);
        if (!yl || !yr) continue;
        if (!in_interval(*yl, *tl, *bl) || !in_interval(*yr, *tr, *br)) continue;
        if (!best || cand.brightness > best->brightness) best = &cand;
    }
    if (!best) return std::nullopt;

    GlobalCreaseLine out;
    out.line = *best;

    auto pack = [](int x, int y) { return (static_cast<std::int64_t>(y) << 32) | (x & 0xffffffffLL); };
    auto build_set = [&](const PathGraph* g) {
        std::unordered_set<std::int64_t> s;
        if (g)
            for (const PixelCoord& px : g->pixels) s.insert(pack(px.x, px.y));
        return s;
    };
    const auto left_set = build_set(common_left);
    const auto right_set = build_set(common_right);
    auto touches = [&](const std::unordered_set<std::int64_t>& s, const PixelCoord& px) {
        if (s.empty()) return false;
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx)
                if (s.count(pack(px.x + dx, px.y + dy))) return true;
        return false;
    };

    std::optional<Point2> left_hit, right_hit;
    const int min_len = static_cast<int>(std::ceil(p.rho_min_l1 * img_w));
    const int ext = static_cast<int>(std::lround(p.beta));
    for (const PathGraph& g : h_graphs) {
        if (g.size() < min_len) continue;
        int near = 0;
        int inside = 0;
        for (int i = 0; i < g.size(); ++i) {
            const Point2 pt = g.point(i);
            if (best->line.dist(pt) < p.delta_min_e) ++near;
            if (qt.contains(pt, 1e-7) || qb.contains(pt, 1e-7)) ++inside;
        }
        if (near <= p.rho_min * g.size()) continue;
        if (inside < p.rho_min_l2 * g.size()) continue;

        std::vector<PixelCoord> extended = g.pixels;
        const PixelCoord first = g.pixels.front();
        const PixelCoord last = g.pixels.back();
        for (int e = 1; e <= ext; ++e) {
            extended.push_back({first.x - e, first.y});
            extended.push_back({last.x + e, last.y});
        }
        for (const PixelCoord& px : extended) {
            const Point2 pt{px.x + 0.5, px.y + 0.5};
            if (touches(left_set, px)) {
                if (!left_hit || pt.x < left_hit->x) left_hit = pt;
            }
            if (touches(right_set, px)) {
                if (!right_hit || pt.x > right_hit->x) right_hit = pt;
            }
        }
    }

    if (left_hit) {
        out.vertex = left_hit;
        out.vertex_on_left = true;
    } else if (right_hit) {
        out.vertex = right_hit;
        out.vertex_on_left = false;
    }
    return out;
}

std::vector<HexAlternative> form_alternatives(const ScoredQuad& qt, const ScoredQuad& qb,
                                              LocateContext& ctx) {
    std::vector<HexAlternative> out;
    const int common_left =
        (qt.left_graph >= 0 && qt.left_graph == qb.left_graph) ? qt.left_graph : -1;
    const int common_right =
        (qt.right_graph >= 0 && qt.right_graph == qb.right_graph) ? qt.right_graph : -1;
    if (common_left < 0 && common_right < 0) return out;

    const Params& p = *ctx.params;
    std::optional<CreaseCandidate> left_cp, right_cp;
    if (common_left >= 0) left_cp = crease_for_graph(ctx, common_left);
    if (common_right >= 0) right_cp = crease_for_graph(ctx, common_right);

    auto push = [&](std::optional<HexAlternative> alt) {
        if (alt) out.push_back(*alt);
    };

    // h1: both fracture vertices.
    if (left_cp && right_cp) {
        push(make_alternative(HexAlternative::Kind::h1, left_cp->vertex, right_cp->vertex, qt,
                              qb, -1, -1));
    }
    // h2: left fracture vertex plus the crease line near it.
    if (left_cp) {
        if (const auto line = detect_crease_line_local(left_cp->vertex,
                                                       *ctx.horizontal_lines, p)) {
            if (const auto cr = midpoint_vertex(line->line, qt, qb, /*left=*/false))
                push(make_alternative(HexAlternative::Kind::h2, left_cp->vertex, *cr, qt, qb,
                                      -1, -1));
        }
    }
    // h3: right fracture vertex plus the crease line near it.
    if (right_cp) {
        if (const auto line = detect_crease_line_local(right_cp->vertex,
                                                       *ctx.horizontal_lines, p)) {
            if (const auto cl = midpoint_vertex(line->line, qt, qb, /*left=*/true))
                push(make_alternative(HexAlternative::Kind::h3, *cl, right_cp->vertex, qt, qb,
                                      -1, -1));
        }
    }
    // h4: crease line alone; its path-graph intersection with the common side
    // graph supplies one vertex, the midpoint rule the other.
    {
        const PathGraph* gl = common_left >= 0 ? &(*ctx.v_graphs)[common_left] : nullptr;
        const PathGraph* gr = common_right >= 0 ? &(*ctx.v_graphs)[common_right] : nullptr;
        const auto global = detect_crease_line_global(qt.quad, qb.quad, *ctx.horizontal_lines,
                                                      *ctx.h_graphs, gl, gr, ctx.img_w,
                                                      ctx.img_h, p);
        if (global && global->vertex) {
            if (global->vertex_on_left) {
                if (const auto cr = midpoint_vertex(global->line.line, qt, qb, false))
                    push(make_alternative(HexAlternative::Kind::h4, *global->vertex, *cr, qt,
                                          qb, -1, -1));
            } else {
                if (const auto cl = midpoint_vertex(global->line.line, qt, qb, true))
                    push(make_alternative(HexAlternative::Kind::h4, *cl, *global->vertex, qt,
                                          qb, -1, -1));
            }
        }
    }
    return out;
}

ScoreBreakdown contour_score(const Hexangle& h, const EdgeMap& sm_h, const EdgeMap& sm_v,
                             const Params& p) {
    const auto& v = h.v;
    using I = Hexangle;
    const std::vector<ScoredSegment> segs{
        {{v[I::TL], v[I::TR]}, true},  {{v[I::TR], v[I::CR]}, false},
        {{v[I::CR], v[I::BR]}, false}, {{v[I::BR], v[I::BL]}, true},
        {{v[I::BL], v[I::CL]}, false}, {{v[I::CL], v[I::TL]}, false},
        {{v[I::CL], v[I::CR]}, true},
    };
    const std::vector<PenaltyRay> rays{
        {v[I::TL], unit_dir(v[I::TR], v[I::TL]), true},
        {v[I::TL], unit_dir(v[I::CL], v[I::TL]), false},
        {v[I::TR], unit_dir(v[I::TL], v[I::TR]), true},
        {v[I::TR], unit_dir(v[I::CR], v[I::TR]), false},
        {v[I::BR], unit_dir(v[I::BL], v[I::BR]), true},
        {v[I::BR], unit_dir(v[I::CR], v[I::BR]), false},
        {v[I::BL], unit_dir(v[I::BR], v[I::BL]), true},
        {v[I::BL], unit_dir(v[I::CL], v[I::BL]), false},
        {v[I::CL], unit_dir(v[I::CR], v[I::CL]), true},
        {v[I::CR], unit_dir(v[I::CL], v[I::CR]), true},
    };
    return polyline_score(segs, rays, sm_h, sm_v, p);
}

std::optional<Hexangle> select_hexangle(const std::vector<HexAlternative>& alts,
                                        const EdgeMap& sm_h, const EdgeMap& sm_v,
                                        int img_w, int img_h, const Params& p) {
    const double focal = p.lambda * img_w;
    const Point2 principal{img_w / 2.0, img_h / 2.0};

    struct Entry {
        Hexangle corrected;
        const HexAlternative* src;
        double score;
    };
    std::optional<Entry> best;
    for (const HexAlternative& alt : alts) {
        Hexangle corrected;
        try {
            corrected = apply_correction_v(alt.hex);
        } catch (const std::exception&) {
            continue;
        }
        double rt, rb;
        try {
            rt = aspect_ratio(corrected.upper(), focal, principal);
            rb = aspect_ratio(corrected.lower(), focal, principal);
        } catch (const std::exception&) {
            continue;  // model violated, fails the gate
        }
        if (std::max(std::abs(rt - p.r0), std::abs(rb - p.r0)) >= p.ratio_tol * p.r0)
            continue;
        const double score = contour_score(alt.hex, sm_h, sm_v, p).total;
        if (!best || score > best->score) best = Entry{corrected, &alt, score};
    }
    if (!best) return std::nullopt;

    // Over-correction rejection: the correction must not rotate any
    // horizontal element or move any vertex too far.
    const Hexangle& h0 = best->src->hex;
    const Hexangle& h1 = best->corrected;
    using I = Hexangle;
    const std::array<std::pair<int, int>, 3> horizontals{
        std::pair{I::TL, I::TR}, std::pair{I::CL, I::CR}, std::pair{I::BL, I::BR}};
    for (const auto& [i0, i1] : horizontals) {
        const Point2 u_old = unit_dir(h0.v[i0], h0.v[i1]);
        const Point2 u_new = unit_dir(h1.v[i0], h1.v[i1]);
        const double cosv = std::clamp(std::abs(u_old.dot(u_new)), 0.0, 1.0);
        const double angle = std::acos(cosv) * 180.0 / M_PI;
        if (angle > p.phi_max_v) return std::nullopt;
    }
    for (int i = 0; i < 6; ++i) {
        if (distance(h0.v[i], h1.v[i]) > p.rho_max_v * img_h) return std::nullopt;
    }
    return h1;
}

}  // namespace unfolder

#include "unfolder/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "unfolder/debug_dump.hpp"
#include "unfolder/io.hpp"

namespace unfolder {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct DebugSink {
    std::string dir;

    void save(const std::string& name, const Image& img) const {
        save_image((std::filesystem::path(dir) / name).string(), img);
    }
};

UnfoldResult run(const Image& img, const Params& p, bool timed, const DebugSink* dbg) {
    p.validate();
    if (img.width < 64 || img.height < 64) throw std::invalid_argument("image too small");

    UnfoldResult res;
    res.output = img;
    const auto t_start = Clock::now();

    auto trivial = [&](const char* why) {
        res.status = UnfoldResult::Status::trivial;
        res.diagnostics.push_back(why);
        res.timings.total_ms = timed ? ms_since(t_start) : 0.0;
        return res;
    };

    // Grayscale + working resolution.
    auto t = Clock::now();
    const Image gray = to_grayscale(img);
    auto [work, scale] = downscale_to_work(gray, p.w_work);
    res.timings.prepare_ms = ms_since(t);

    const int w = work.width;
    const int h = work.height;
    const int h2 = h / 2;

    // Edge maps and their smoothed versions for scoring.
    t = Clock::now();
    const EdgeMaps edges = extract_edges(work);
    const EdgeMap sm_h = smooth(edges.horizontal, p.sigma);
    const EdgeMap sm_v = smooth(edges.vertical, p.sigma);
    res.timings.edges_ms = ms_since(t);
    if (dbg) {
        dbg->save("work.png", work);
        dbg->save("edges_h.png", edge_map_visual(edges.horizontal));
        dbg->save("edges_v.png", edge_map_visual(edges.vertical));
    }

    // Line candidates per family per half.
    t = Clock::now();
    std::vector<LineH> lh_top, lv_top, lh_bot, lv_bot;
    {
        const EdgeMap eh_top = edges.horizontal.crop_rows(0, h2);
        const EdgeMap eh_bot = edges.horizontal.crop_rows(h2, h);
        const EdgeMap ev_top = edges.vertical.crop_rows(0, h2);
        const EdgeMap ev_bot = edges.vertical.crop_rows(h2, h);
        const int nms = 4;
        const HoughImage fht_h_top = fht(eh_top, LineFamily::horizontal);
        const HoughImage fht_h_bot = fht(eh_bot, LineFamily::horizontal, 0, h2);
        const HoughImage fht_v_top = fht(ev_top, LineFamily::vertical);
        const HoughImage fht_v_bot = fht(ev_bot, LineFamily::vertical, 0, h2);
        lh_top = top_lines(fht_h_top, p.k_lines, nms);
        lh_bot = top_lines(fht_h_bot, p.k_lines, nms);
        lv_top = top_lines(fht_v_top, p.k_lines, nms);
        lv_bot = top_lines(fht_v_bot, p.k_lines, nms);
        if (dbg) {
            dbg->save("hough_h_top.png", hough_visual(fht_h_top));
            dbg->save("hough_h_bottom.png", hough_visual(fht_h_bot));
            dbg->save("hough_v_top.png", hough_visual(fht_v_top));
            dbg->save("hough_v_bottom.png", hough_visual(fht_v_bot));
        }
    }
    std::vector<LineH> lh_all = lh_top;
    lh_all.insert(lh_all.end(), lh_bot.begin(), lh_bot.end());
    res.timings.hough_ms = ms_since(t);

    const Line2 ls = Line2::horizontal(h / 2.0);
    if (dbg) {
        std::vector<LineH> lv_all = lv_top;
        lv_all.insert(lv_all.end(), lv_bot.begin(), lv_bot.end());
        dbg->save("lines.png", lines_overlay(work, lh_all, lv_all, ls));
    }

    // Quadrilateral search and hexangle selection.
    t = Clock::now();
    std::vector<ScoredQuad> q_top =
        enumerate_quads(lh_top, lv_top, ls, Half::top, w, h, sm_h, sm_v, p);
    std::vector<ScoredQuad> q_bot =
        enumerate_quads(lh_bot, lv_bot, ls, Half::bottom, w, h, sm_h, sm_v, p);
    if (static_cast<int>(q_top.size()) > p.k_lines) q_top.resize(p.k_lines);
    if (static_cast<int>(q_bot.size()) > p.k_lines) q_bot.resize(p.k_lines);
    res.diagnostics.push_back("quads top=" + std::to_string(q_top.size()) +
                              " bottom=" + std::to_string(q_bot.size()));
    if (dbg) dbg->save("quads.png", quads_overlay(work, q_top, q_bot));
    if (q_top.empty() || q_bot.empty()) return trivial("no quadrilaterals");

    const std::vector<PathGraph> v_graphs = path_graphs(edges.vertical);
    const std::vector<PathGraph> h_graphs = path_graphs(edges.horizontal);
    for (ScoredQuad& q : q_top) {
        q.left_graph = assign_path_graph(q.left_side(), v_graphs, p);
        q.right_graph = assign_path_graph(q.right_side(), v_graphs, p);
    }
    for (ScoredQuad& q : q_bot) {
        q.left_graph = assign_path_graph(q.left_side(), v_graphs, p);
        q.right_graph = assign_path_graph(q.right_side(), v_graphs, p);
    }

    std::vector<std::optional<std::optional<CreaseCandidate>>> crease_cache(v_graphs.size());
    LocateContext ctx;
    ctx.v_graphs = &v_graphs;
    ctx.h_graphs = &h_graphs;
    ctx.horizontal_lines = &lh_all;
    ctx.img_w = w;
    ctx.img_h = h;
    ctx.params = &p;
    ctx.crease_cache = &crease_cache;

    std::vector<HexAlternative> alts;
    for (std::size_t i = 0; i < q_top.size(); ++i) {
        for (std::size_t j = 0; j < q_bot.size(); ++j) {
            auto pair_alts = form_alternatives(q_top[i], q_bot[j], ctx);
            for (HexAlternative& a : pair_alts) {
                a.source_qt = static_cast<int>(i);
                a.source_qb = static_cast<int>(j);
                alts.push_back(a);
            }
        }
    }
    res.diagnostics.push_back("alternatives=" + std::to_string(alts.size()));
    if (alts.empty()) {
        res.timings.locate_ms = ms_since(t);
        return trivial("no hexangle alternatives");
    }

    const std::optional<Hexangle> selected = select_hexangle(alts, sm_h, sm_v, w, h, p);
    res.timings.locate_ms = ms_since(t);
    if (dbg) {
        std::ofstream ledger(std::filesystem::path(dbg->dir) / "scores.txt");
        for (std::size_t i = 0; i < alts.size(); ++i) {
            const ScoreBreakdown sb = contour_score(alts[i].hex, sm_h, sm_v, p);
            ledger << "alt " << i << " kind=h"
                   << static_cast<int>(alts[i].kind) + 1 << " qt=" << alts[i].source_qt
                   << " qb=" << alts[i].source_qb << " p_sum=" << sb.p_sum
                   << " r=" << sb.zero_ratio << " q=" << sb.penalty << " S=" << sb.total
                   << "\n";
        }
        if (selected) dbg->save("hexangle.png", hexangle_overlay(work, *selected));
    }
    if (!selected) return trivial("selection rejected all alternatives");

    // Back to full resolution and warp.
    Hexangle full = *selected;
    for (Point2& v : full.v) v = scale.to_full(v);
    const double fw = img.width, fh = img.height;
    for (const Point2& v : full.v) {
        if (v.x < -1.0 || v.y < -1.0 || v.x > fw + 1.0 || v.y > fh + 1.0)
            return trivial("hexangle outside image");
    }

    t = Clock::now();
    try {
        RectifiedOutput rect = rectify(img, full, p);
        res.timings.warp_ms = ms_since(t);
        res.status = UnfoldResult::Status::rectified;
        res.output = std::move(rect.image);
        res.hexangle = full;
    } catch (const std::runtime_error&) {
        res.timings.warp_ms = ms_since(t);
        return trivial("rectification failed");
    }
    res.timings.total_ms = timed ? ms_since(t_start) : 0.0;
    return res;
}

}  // namespace

UnfoldResult unfold(const Image& img, const Params& p) { return run(img, p, false, nullptr); }

UnfoldResult unfold_timed(const Image& img, const Params& p) {
    return run(img, p, true, nullptr);
}

UnfoldResult unfold_debug(const Image& img, const Params& p, const std::string& debug_dir) {
    std::filesystem::create_directories(debug_dir);
    DebugSink sink{debug_dir};
    return run(img, p, true, &sink);
}

}  // namespace unfolder

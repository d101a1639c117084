#include "unfolder/hough.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace unfolder {

namespace {

int next_pow2(int v) {
    int n = 1;
    while (n < v) n <<= 1;
    return n;
}

// One butterfly pass over all dyadic slopes of one sign. `flip` mirrors the
// primary axis, which turns the result into the negative-slope half.
void butterfly(const EdgeMap& em, bool primary_is_y, bool flip, int n, int span, int pad,
               std::vector<float>& buf_a, std::vector<float>& buf_b) {
    const int pe = primary_is_y ? em.height : em.width;
    const int sec = primary_is_y ? em.width : em.height;

    std::fill(buf_a.begin(), buf_a.end(), 0.0f);
    for (int p = 0; p < pe; ++p) {
        const int src = flip ? pe - 1 - p : p;
        float* row = &buf_a[static_cast<std::size_t>(p) * span + pad];
        if (primary_is_y) {
            const float* m = &em.data[static_cast<std::size_t>(src) * em.width];
            std::copy(m, m + sec, row);
        } else {
            for (int s = 0; s < sec; ++s) row[s] = em.at(s, src);
        }
    }

    std::vector<float>* src = &buf_a;
    std::vector<float>* dst = &buf_b;
    for (int m = 2; m <= n; m <<= 1) {
        const int half = m / 2;
        for (int b = 0; b < n / m; ++b) {
            for (int t = 0; t < m; ++t) {
                const float* top = &(*src)[static_cast<std::size_t>(2 * b * half + t / 2) * span];
                const float* bot =
                    &(*src)[static_cast<std::size_t>((2 * b + 1) * half + t / 2) * span];
                float* out = &(*dst)[static_cast<std::size_t>(b * m + t) * span];
                const int o = t - t / 2;
                const int lim = span - o;
                for (int j = 0; j < lim; ++j) out[j] = top[j] + bot[j + o];
                for (int j = std::max(lim, 0); j < span; ++j) out[j] = top[j];
            }
        }
        std::swap(src, dst);
    }
    if (src != &buf_a) buf_a.swap(buf_b);  // result always ends up in buf_a
}

}  // namespace

Line2 HoughImage::to_line(int t, int anchor) const {
    const double slope = n > 1 ? static_cast<double>(t) / (n - 1) : 0.0;
    // Anchor sits at primary 0 for non-negative slopes and at the last source
    // row (primary_extent - 1) for mirrored ones.
    const double pa = t >= 0 ? 0.5 : primary_extent - 0.5;
    const double sa = anchor + 0.5;
    Point2 a, b;
    if (family == LineFamily::vertical) {
        a = {sa + x_offset, pa + y_offset};
        b = {sa + slope + x_offset, pa + 1.0 + y_offset};
    } else {
        a = {pa + x_offset, sa + y_offset};
        b = {pa + 1.0 + x_offset, sa + slope + y_offset};
    }
    return Line2::through(a, b);
}

HoughImage fht(const EdgeMap& em, LineFamily family, int x_offset, int y_offset) {
    const bool primary_is_y = family == LineFamily::vertical;
    const int pe = primary_is_y ? em.height : em.width;
    const int sec = primary_is_y ? em.width : em.height;
    if (pe <= 0 || sec <= 0) throw std::invalid_argument("empty edge map");

    HoughImage hi;
    hi.family = family;
    hi.n = next_pow2(pe);
    hi.primary_extent = pe;
    hi.secondary_extent = sec;
    hi.x_offset = x_offset;
    hi.y_offset = y_offset;
    const int pad = std::min(hi.n - 1, pe + 15);
    hi.span = sec + 2 * pad;
    hi.shift0 = -pad;
    hi.acc.assign(static_cast<std::size_t>(2 * hi.n - 1) * hi.span, 0.0f);

    std::vector<float> buf_a(static_cast<std::size_t>(hi.n) * hi.span);
    std::vector<float> buf_b(buf_a.size());

    butterfly(em, primary_is_y, false, hi.n, hi.span, pad, buf_a, buf_b);
    for (int t = 0; t < hi.n; ++t) {
        std::copy(buf_a.begin() + static_cast<std::size_t>(t) * hi.span,
                  buf_a.begin() + static_cast<std::size_t>(t + 1) * hi.span,
                  hi.acc.begin() + static_cast<std::size_t>(hi.n - 1 + t) * hi.span);
    }
    butterfly(em, primary_is_y, true, hi.n, hi.span, pad, buf_a, buf_b);
    for (int t = 1; t < hi.n; ++t) {
        // Mirrored pattern (t, j) anchors at primary n-1 in original
        // coordinates; store it as slope -t.
        std::copy(buf_a.begin() + static_cast<std::size_t>(t) * hi.span,
                  buf_a.begin() + static_cast<std::size_t>(t + 1) * hi.span,
                  hi.acc.begin() + static_cast<std::size_t>(hi.n - 1 - t) * hi.span);
    }
    return hi;
}

std::vector<LineH> top_lines(const HoughImage& hi, int k, int nms_radius) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    struct Cell {
        float v;
        int u, j;
    };
    // Total order: brightness descending, then accumulator position.
    auto better = [](const Cell& a, const Cell& b) {
        if (a.v != b.v) return a.v > b.v;
        if (a.u != b.u) return a.u < b.u;
        return a.j < b.j;
    };

    const int rows = 2 * hi.n - 1;
    const std::size_t pool_size =
        static_cast<std::size_t>(k) * (2 * nms_radius + 1) * (2 * nms_radius + 1) + k + 64;
    std::priority_queue<Cell, std::vector<Cell>, decltype(better)> pool(better);
    for (int u = 0; u < rows; ++u) {
        const float* row = &hi.acc[static_cast<std::size_t>(u) * hi.span];
        for (int j = 0; j < hi.span; ++j) {
            if (row[j] <= 0.0f) continue;
            const Cell c{row[j], u, j};
            if (pool.size() < pool_size) {
                pool.push(c);
            } else if (better(c, pool.top())) {
                pool.pop();
                pool.push(c);
            }
        }
    }

    std::vector<Cell> cand;
    cand.reserve(pool.size());
    while (!pool.empty()) {
        cand.push_back(pool.top());
        pool.pop();
    }
    std::sort(cand.begin(), cand.end(), better);

    std::vector<Cell> accepted;
    std::vector<LineH> out;
    for (const Cell& c : cand) {
        bool suppressed = false;
        for (const Cell& a : accepted) {
            if (std::abs(a.u - c.u) <= nms_radius && std::abs(a.j - c.j) <= nms_radius) {
                suppressed = true;
                break;
            }
        }
        if (suppressed) continue;
        accepted.push_back(c);
        LineH lh;
        lh.line = hi.to_line(c.u - (hi.n - 1), hi.shift0 + c.j);
        lh.brightness = c.v;
        lh.family = hi.family;
        out.push_back(lh);
        if (static_cast<int>(out.size()) >= k) break;
    }
    return out;
}

std::optional<LineH> brightest_near(const std::vector<LineH>& lines, const Point2& p,
                                    double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
    std::optional<LineH> best;
    for (const LineH& lh : lines) {
        if (lh.line.dist(p) >= radius) continue;
        if (!best || lh.brightness > best->brightness) best = lh;
    }
    return best;
}

}  // namespace unfolder

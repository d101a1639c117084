#pragma once

// Independent reference implementations used only to check the library.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "unfolder/geometry.hpp"
#include "unfolder/image.hpp"

namespace oracles {

// Dyadic pattern offsets by direct recursion.
inline std::vector<int> dyadic_offsets(int n, int t) {
    if (n == 1) return {0};
    const std::vector<int> half = dyadic_offsets(n / 2, t / 2);
    std::vector<int> out(n);
    for (int i = 0; i < n / 2; ++i) out[i] = half[i];
    const int shift = t - t / 2;
    for (int i = 0; i < n / 2; ++i) out[n / 2 + i] = half[i] + shift;
    return out;
}

// Naive pattern sum for one accumulator cell. Matches the layout documented
// in hough.hpp: primary axis p, secondary s; negative slopes traverse the
// offsets over mirrored source rows.
inline float naive_fht_cell(const unfolder::EdgeMap& em, bool primary_is_y, int n, int t,
                            int anchor) {
    const int pe = primary_is_y ? em.height : em.width;
    const int sec = primary_is_y ? em.width : em.height;
    const std::vector<int> d = dyadic_offsets(n, std::abs(t));
    float sum = 0.0f;
    for (int p = 0; p < pe; ++p) {
        const int off = t >= 0 ? d[p] : d[pe - 1 - p];
        const int s = anchor + off;
        if (s < 0 || s >= sec) continue;
        sum += primary_is_y ? em.at(p, s) : em.at(s, p);
    }
    return sum;
}

// Plain-recursion Levenshtein; exponential, for short strings only.
inline long long lev_recursive(const std::u32string& a, const std::u32string& b,
                               std::size_t i, std::size_t j) {
    if (i == a.size()) return static_cast<long long>(b.size() - j);
    if (j == b.size()) return static_cast<long long>(a.size() - i);
    const long long keep = lev_recursive(a, b, i + 1, j + 1) + (a[i] == b[j] ? 0 : 1);
    const long long del = lev_recursive(a, b, i + 1, j) + 1;
    const long long ins = lev_recursive(a, b, i, j + 1) + 1;
    return std::min({keep, del, ins});
}

// Memoized recursion over the same recurrence (still independent of the
// iterative two-row implementation under test).
inline long long lev_memo(const std::u32string& a, const std::u32string& b) {
    std::vector<std::vector<long long>> memo(a.size() + 1,
                                             std::vector<long long>(b.size() + 1, -1));
    struct Rec {
        const std::u32string &a, &b;
        std::vector<std::vector<long long>>& memo;
        long long operator()(std::size_t i, std::size_t j) const {
            if (memo[i][j] >= 0) return memo[i][j];
            long long r;
            if (i == a.size())
                r = static_cast<long long>(b.size() - j);
            else if (j == b.size())
                r = static_cast<long long>(a.size() - i);
            else
                r = std::min({(*this)(i + 1, j + 1) + (a[i] == b[j] ? 0 : 1),
                              (*this)(i + 1, j) + 1, (*this)(i, j + 1) + 1});
            memo[i][j] = r;
            return r;
        }
    };
    return Rec{a, b, memo}(0, 0);
}

// Minimal pencil cost at one finite candidate vertex: per segment the best
// line through the vertex in closed form via the plain 2x2 eigenproblem.
inline double pencil_cost_at(const std::array<unfolder::Segment2, 3>& segs,
                             const unfolder::Point2& v) {
    double total = 0.0;
    for (const unfolder::Segment2& s : segs) {
        const unfolder::Point2 q0 = s.p0 - v;
        const unfolder::Point2 q1 = s.p1 - v;
        const double a = q0.x * q0.x + q1.x * q1.x;
        const double b = q0.x * q0.y + q1.x * q1.y;
        const double c = q0.y * q0.y + q1.y * q1.y;
        total += 0.5 * (a + c) - std::sqrt(0.25 * (a - c) * (a - c) + b * b);
    }
    return total;
}

// Dense grid search over candidate pencil vertices, refined locally.
inline double pencil_grid_oracle(const std::array<unfolder::Segment2, 3>& segs, double x0,
                                 double x1, double y0, double y1) {
    unfolder::Point2 best{x0, y0};
    double best_cost = 1e300;
    const int steps = 160;
    for (int i = 0; i <= steps; ++i) {
        for (int j = 0; j <= steps; ++j) {
            const unfolder::Point2 v{x0 + (x1 - x0) * i / steps, y0 + (y1 - y0) * j / steps};
            const double c = pencil_cost_at(segs, v);
            if (c < best_cost) {
                best_cost = c;
                best = v;
            }
        }
    }
    double span_x = (x1 - x0) / steps, span_y = (y1 - y0) / steps;
    for (int level = 0; level < 24; ++level) {
        for (int i = -8; i <= 8; ++i) {
            for (int j = -8; j <= 8; ++j) {
                const unfolder::Point2 v{best.x + span_x * i / 8.0, best.y + span_y * j / 8.0};
                const double c = pencil_cost_at(segs, v);
                if (c < best_cost) {
                    best_cost = c;
                    best = v;
                }
            }
        }
        span_x *= 0.5;
        span_y *= 0.5;
    }
    return best_cost;
}

// 8-connected component count by flood fill (no chain-splitting rule).
inline int flood_fill_components(const unfolder::EdgeMap& em) {
    std::vector<char> seen(em.data.size(), 0);
    int components = 0;
    std::vector<std::pair<int, int>> stack;
    for (int y = 0; y < em.height; ++y) {
        for (int x = 0; x < em.width; ++x) {
            if (em.at(y, x) == 0.0f || seen[y * em.width + x]) continue;
            ++components;
            stack.push_back({x, y});
            seen[y * em.width + x] = 1;
            while (!stack.empty()) {
                auto [cx, cy] = stack.back();
                stack.pop_back();
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = cx + dx, ny = cy + dy;
                        if (nx < 0 || ny < 0 || nx >= em.width || ny >= em.height) continue;
                        if (em.at(ny, nx) == 0.0f || seen[ny * em.width + nx]) continue;
                        seen[ny * em.width + nx] = 1;
                        stack.push_back({nx, ny});
                    }
                }
            }
        }
    }
    return components;
}

}  // namespace oracles

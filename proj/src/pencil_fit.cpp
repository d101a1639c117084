#include "unfolder/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

// Fits a pencil of three concurrent lines to three segments. The pencil
// vertex is a homogeneous point v = (a, b, c) on the unit sphere; for a
// fixed vertex the optimal line per segment is closed-form, so the problem
// reduces to a smooth 2-DOF minimization on the sphere.
//
// Per segment with endpoints p0, p1 (Δ = p1 - p0, x = p0 × p1) the optimal
// sum of squared endpoint distances to a line through v is
//
//     ((a,b) × Δ - c·x)² / λ_max(M),   M = Σ_i (c·p_i - (a,b))(c·p_i - (a,b))ᵀ
//
// which follows from λ_min = det/λ_max for 2x2 matrices and stays stable as
// c → 0 (vertex at infinity, parallel pencil).

namespace unfolder {

namespace {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    Vec3 unit() const {
        const double n = norm();
        return {x / n, y / n, z / n};
    }
};

struct SegData {
    Point2 p0, p1;
    Point2 delta;
    double cross;  // p0 × p1
};

double segment_cost(const SegData& s, const Vec3& v) {
    const double num = v.x * s.delta.y - v.y * s.delta.x - v.z * s.cross;
    const Point2 q0{v.z * s.p0.x - v.x, v.z * s.p0.y - v.y};
    const Point2 q1{v.z * s.p1.x - v.x, v.z * s.p1.y - v.y};
    const double a = q0.x * q0.x + q1.x * q1.x;
    const double b = q0.x * q0.y + q1.x * q1.y;
    const double c = q0.y * q0.y + q1.y * q1.y;
    const double lam_max = 0.5 * (a + c) + std::sqrt(0.25 * (a - c) * (a - c) + b * b);
    if (lam_max <= 0.0) return 0.0;
    return num * num / lam_max;
}

double pencil_cost(const std::array<SegData, 3>& segs, const Vec3& v) {
    return segment_cost(segs[0], v) + segment_cost(segs[1], v) + segment_cost(segs[2], v);
}

// Smallest-eigenvalue eigenvector of the symmetric matrix [[a,b],[b,c]].
Point2 min_eigvec(double a, double b, double c, const Point2& fallback) {
    const double lam = 0.5 * (a + c) - std::sqrt(0.25 * (a - c) * (a - c) + b * b);
    const Point2 c1{b, lam - a};
    const Point2 c2{lam - c, b};
    const Point2 pick = c1.norm() >= c2.norm() ? c1 : c2;
    const double n = pick.norm();
    const double scale = std::max({std::abs(a), std::abs(c), 1e-300});
    if (n < 1e-12 * std::sqrt(scale)) {
        const double fn = fallback.norm();
        return {fallback.x / fn, fallback.y / fn};
    }
    return {pick.x / n, pick.y / n};
}

// Nelder-Mead over a 2-D tangent chart of the unit sphere at v0.
Vec3 refine(const std::array<SegData, 3>& segs, Vec3 v0, double init_step, int iters) {
    Vec3 e1 = std::abs(v0.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    e1 = (e1 + v0 * -e1.dot(v0)).unit();
    const Vec3 e2{v0.y * e1.z - v0.z * e1.y, v0.z * e1.x - v0.x * e1.z,
                  v0.x * e1.y - v0.y * e1.x};

    auto embed = [&](double t1, double t2) { return (v0 + e1 * t1 + e2 * t2).unit(); };
    auto f = [&](double t1, double t2) { return pencil_cost(segs, embed(t1, t2)); };

    struct P {
        double t1, t2, fv;
    };
    std::array<P, 3> sx{{{0, 0, f(0, 0)},
                         {init_step, 0, f(init_step, 0)},
                         {0, init_step, f(0, init_step)}}};
    auto order = [&] {
        std::sort(sx.begin(), sx.end(), [](const P& a, const P& b) { return a.fv < b.fv; });
    };
    order();
    for (int it = 0; it < iters; ++it) {
        if (sx[2].fv - sx[0].fv < 1e-17 * (std::abs(sx[0].fv) + 1e-300) + 1e-300) break;
        const double c1 = 0.5 * (sx[0].t1 + sx[1].t1);
        const double c2 = 0.5 * (sx[0].t2 + sx[1].t2);
        const double r1 = c1 + (c1 - sx[2].t1), r2 = c2 + (c2 - sx[2].t2);
        const double fr = f(r1, r2);
        if (fr < sx[0].fv) {
            const double x1 = c1 + 2.0 * (c1 - sx[2].t1), x2 = c2 + 2.0 * (c2 - sx[2].t2);
            const double fx = f(x1, x2);
            sx[2] = fx < fr ? P{x1, x2, fx} : P{r1, r2, fr};
        } else if (fr < sx[1].fv) {
            sx[2] = {r1, r2, fr};
        } else {
            const double k1 = c1 + 0.5 * (sx[2].t1 - c1), k2 = c2 + 0.5 * (sx[2].t2 - c2);
            const double fk = f(k1, k2);
            if (fk < sx[2].fv) {
                sx[2] = {k1, k2, fk};
            } else {
                for (int i = 1; i < 3; ++i) {
                    sx[i].t1 = sx[0].t1 + 0.5 * (sx[i].t1 - sx[0].t1);
                    sx[i].t2 = sx[0].t2 + 0.5 * (sx[i].t2 - sx[0].t2);
                    sx[i].fv = f(sx[i].t1, sx[i].t2);
                }
            }
        }
        order();
    }
    return embed(sx[0].t1, sx[0].t2);
}

}  // namespace

PencilFit fit_concurrent_lines(const std::array<Segment2, 3>& segments) {
    std::array<SegData, 3> segs;
    double span = 0.0;
    Point2 mean{0, 0};
    for (int i = 0; i < 3; ++i) {
        const Segment2& s = segments[i];
        if (s.length() <= 0.0) throw std::invalid_argument("degenerate segment");
        segs[i] = {s.p0, s.p1, s.p1 - s.p0, s.p0.cross(s.p1)};
        mean = mean + s.p0 + s.p1;
        span = std::max(span, s.length());
    }
    mean = mean * (1.0 / 6.0);

    // All six endpoints collinear -> the pencil vertex is ill-posed.
    {
        double a = 0, b = 0, c = 0;
        for (const SegData& s : segs) {
            for (const Point2& p : {s.p0, s.p1}) {
                const Point2 d = p - mean;
                a += d.x * d.x;
                b += d.x * d.y;
                c += d.y * d.y;
            }
        }
        const double lam_min = 0.5 * (a + c) - std::sqrt(0.25 * (a - c) * (a - c) + b * b);
        if (lam_min <= 1e-12 * std::max(a + c, 1.0))
            throw std::runtime_error("degenerate: collapsed hexangle");
    }

    // Scale to O(1) around the centroid; the fit is equivariant and this
    // keeps the sphere chart well-conditioned for distant vertices.
    const double scale = std::max(span, 1e-12);
    std::array<SegData, 3> ns;
    for (int i = 0; i < 3; ++i) {
        const Point2 p0{(segs[i].p0.x - mean.x) / scale, (segs[i].p0.y - mean.y) / scale};
        const Point2 p1{(segs[i].p1.x - mean.x) / scale, (segs[i].p1.y - mean.y) / scale};
        ns[i] = {p0, p1, p1 - p0, p0.cross(p1)};
    }

    std::vector<Vec3> starts;
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            try {
                const HomoPoint p = intersect(segments[i].line(), segments[j].line());
                Vec3 v{p.u, p.v, p.w};
                // Map into normalized coordinates.
                v = Vec3{v.x - mean.x * v.z, v.y - mean.y * v.z, v.z * scale};
                if (v.norm() > 0) starts.push_back(v.unit());
            } catch (const std::invalid_argument&) {
            }
        }
    }
    {
        // Best parallel pencil (vertex at infinity) in closed form.
        double a = 0, b = 0, c = 0;
        for (const SegData& s : ns) {
            const Point2 pd{s.delta.y, -s.delta.x};
            a += pd.x * pd.x * 0.5;
            b += pd.x * pd.y * 0.5;
            c += pd.y * pd.y * 0.5;
        }
        const Point2 dir = min_eigvec(a, b, c, Point2{1, 0});
        starts.push_back(Vec3{dir.x, dir.y, 0.0});
    }

    Vec3 best = starts.front();
    double best_cost = pencil_cost(ns, best);
    for (const Vec3& s : starts) {
        const double c = pencil_cost(ns, s);
        if (c < best_cost) {
            best_cost = c;
            best = s;
        }
    }
    for (const double step : {0.2, 1e-3, 1e-6}) {
        best = refine(ns, best, step, 300);
        best_cost = pencil_cost(ns, best);
    }

    // Extract the per-segment optimal lines through the vertex. The normals
    // are computed in the scaled frame (well conditioned even for distant
    // vertices) and the offsets are chosen so that l·v = 0 holds exactly.
    PencilFit out;
    const bool at_inf = std::abs(best.z) <= 1e-9;

    double residual = 0.0;
    for (int i = 0; i < 3; ++i) {
        Point2 n;
        double off_s;  // offset in the scaled frame
        if (at_inf) {
            const Point2 d{best.x, best.y};
            const double dn = d.norm();
            n = {d.y / dn, -d.x / dn};
            const Point2 m = ns[i].p0 + (ns[i].p1 - ns[i].p0) * 0.5;
            off_s = -(n.x * m.x + n.y * m.y);
        } else {
            const Point2 q0{best.z * ns[i].p0.x - best.x, best.z * ns[i].p0.y - best.y};
            const Point2 q1{best.z * ns[i].p1.x - best.x, best.z * ns[i].p1.y - best.y};
            const double a = q0.x * q0.x + q1.x * q1.x;
            const double b = q0.x * q0.y + q1.x * q1.y;
            const double c = q0.y * q0.y + q1.y * q1.y;
            const Point2 d = ns[i].p1 - ns[i].p0;
            n = min_eigvec(a, b, c, {d.y, -d.x});
            off_s = -(n.x * best.x + n.y * best.y) / best.z;
        }
        out.lines[i] = Line2{n.x, n.y, off_s * scale - (n.x * mean.x + n.y * mean.y)};
        residual += std::pow(out.lines[i].signed_dist(segments[i].p0), 2) +
                    std::pow(out.lines[i].signed_dist(segments[i].p1), 2);
    }
    out.residual = residual;
    out.vertex = at_inf
                     ? HomoPoint{best.x, best.y, 0.0}.normalized()
                     : HomoPoint{best.x / best.z * scale + mean.x,
                                 best.y / best.z * scale + mean.y, 1.0};
    return out;
}

}  // namespace unfolder

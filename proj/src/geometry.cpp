#include "unfolder/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace unfolder {

namespace {

// Gaussian elimination with partial pivoting, n x n system in-place.
bool solve_linear(std::array<double, 64>& a, std::array<double, 8>& b, int n) {
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r) {
            if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
        }
        if (std::abs(a[pivot * n + col]) < 1e-12) return false;
        if (pivot != col) {
            for (int c = col; c < n; ++c) std::swap(a[pivot * n + c], a[col * n + c]);
            std::swap(b[pivot], b[col]);
        }
        const double inv = 1.0 / a[col * n + col];
        for (int r = col + 1; r < n; ++r) {
            const double f = a[r * n + col] * inv;
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
            b[r] -= f * b[col];
        }
    }
    for (int col = n - 1; col >= 0; --col) {
        double s = b[col];
        for (int c = col + 1; c < n; ++c) s -= a[col * n + c] * b[c];
        b[col] = s / a[col * n + col];
    }
    return true;
}

}  // namespace

bool HomoPoint::at_infinity() const {
    const double m = std::max(std::abs(u), std::abs(v));
    return std::abs(w) <= 1e-12 * std::max(m, 1.0);
}

Point2 HomoPoint::point() const {
    if (at_infinity()) throw std::domain_error("point at infinity");
    return {u / w, v / w};
}

HomoPoint HomoPoint::normalized() const {
    const double m = std::max({std::abs(u), std::abs(v), std::abs(w)});
    if (m == 0.0) throw std::invalid_argument("null homogeneous point");
    return {u / m, v / m, w / m};
}

Line2 Line2::from_coeffs(double a, double b, double c) {
    const double n = std::hypot(a, b);
    if (n < 1e-300) throw std::invalid_argument("degenerate line coefficients");
    return {a / n, b / n, c / n};
}

Line2 Line2::through(const Point2& p, const Point2& q) {
    const double a = q.y - p.y;
    const double b = p.x - q.x;
    const double c = -(a * p.x + b * p.y);
    return from_coeffs(a, b, c);
}

double Segment2::dist(const Point2& p) const {
    const Point2 d = p1 - p0;
    const double len2 = d.dot(d);
    if (len2 <= 0.0) return distance(p, p0);
    double t = (p - p0).dot(d) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return distance(p, at(t));
}

Homography::Homography() : m_{1, 0, 0, 0, 1, 0, 0, 0, 1} {}

Homography::Homography(const std::array<double, 9>& m) : m_(m) {
    if (std::abs(m_[8]) > 1e-12) {
        for (double& x : m_) x /= m[8];
        m_[8] = 1.0;
    }
}

Point2 Homography::apply(const Point2& p) const {
    const double w = m_[6] * p.x + m_[7] * p.y + m_[8];
    if (std::abs(w) < 1e-300) throw std::domain_error("point maps to infinity");
    return {(m_[0] * p.x + m_[1] * p.y + m_[2]) / w,
            (m_[3] * p.x + m_[4] * p.y + m_[5]) / w};
}

HomoPoint Homography::apply(const HomoPoint& p) const {
    return {m_[0] * p.u + m_[1] * p.v + m_[2] * p.w,
            m_[3] * p.u + m_[4] * p.v + m_[5] * p.w,
            m_[6] * p.u + m_[7] * p.v + m_[8] * p.w};
}

Homography Homography::inverse() const {
    const auto& m = m_;
    std::array<double, 9> inv;
    inv[0] = m[4] * m[8] - m[5] * m[7];
    inv[1] = m[2] * m[7] - m[1] * m[8];
    inv[2] = m[1] * m[5] - m[2] * m[4];
    inv[3] = m[5] * m[6] - m[3] * m[8];
    inv[4] = m[0] * m[8] - m[2] * m[6];
    inv[5] = m[2] * m[3] - m[0] * m[5];
    inv[6] = m[3] * m[7] - m[4] * m[6];
    inv[7] = m[1] * m[6] - m[0] * m[7];
    inv[8] = m[0] * m[4] - m[1] * m[3];
    const double det = m[0] * inv[0] + m[1] * inv[3] + m[2] * inv[6];
    if (std::abs(det) < 1e-300) throw std::runtime_error("singular homography");
    for (double& x : inv) x /= det;
    return Homography(inv);
}

Homography Homography::compose(const Homography& rhs) const {
    std::array<double, 9> r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) r[i * 3 + j] += m_[i * 3 + k] * rhs.m_[k * 3 + j];
    return Homography(r);
}

double Quadrilateral::area() const {
    double s = 0.0;
    for (int i = 0; i < 4; ++i) {
        const Point2& p = v[i];
        const Point2& q = v[(i + 1) % 4];
        s += p.cross(q);
    }
    return std::abs(s) * 0.5;
}

bool Quadrilateral::valid() const {
    // Clockwise in y-down coordinates: consecutive edge cross products > 0.
    const double a = area();
    if (!(a > 0.0)) return false;
    double scale = 0.0;
    for (int i = 0; i < 4; ++i) scale = std::max(scale, (v[(i + 1) % 4] - v[i]).norm());
    const double tol = 1e-9 * std::max(scale * scale, 1.0);
    for (int i = 0; i < 4; ++i) {
        const Point2 e1 = v[(i + 1) % 4] - v[i];
        const Point2 e2 = v[(i + 2) % 4] - v[(i + 1) % 4];
        if (e1.cross(e2) <= tol) return false;  // also rejects 3 collinear
    }
    return true;
}

bool Quadrilateral::contains(const Point2& p, double tol) const {
    for (int i = 0; i < 4; ++i) {
        const Point2 e = v[(i + 1) % 4] - v[i];
        if (e.cross(p - v[i]) < -tol) return false;
    }
    return true;
}

Hexangle Hexangle::from_vertices(const std::array<Point2, 6>& vertices) {
    Hexangle h;
    h.v = vertices;
    return h;
}

bool Hexangle::valid() const {
    if (!upper().valid() || !lower().valid()) return false;
    // Outer vertices must sit on opposite sides of the crease line.
    const Line2 cl = crease_line();
    const double st = cl.signed_dist(v[TL]);
    const double st2 = cl.signed_dist(v[TR]);
    const double sb = cl.signed_dist(v[BL]);
    const double sb2 = cl.signed_dist(v[BR]);
    if (st * sb >= 0.0 || st2 * sb2 >= 0.0) return false;
    if (st * st2 <= 0.0 || sb * sb2 <= 0.0) return false;
    return true;
}

bool Hexangle::contains(const Point2& p, double tol) const {
    return upper().contains(p, tol) || lower().contains(p, tol);
}

HomoPoint intersect(const Line2& l1, const Line2& l2) {
    HomoPoint p{l1.b * l2.c - l1.c * l2.b,
                l1.c * l2.a - l1.a * l2.c,
                l1.a * l2.b - l1.b * l2.a};
    const double n = std::sqrt(p.u * p.u + p.v * p.v + p.w * p.w);
    if (n < 1e-12) throw std::invalid_argument("degenerate: coincident lines");
    return p.normalized();
}

double concurrency_defect(const Line2& l1, const Line2& l2, const Line2& l3) {
    const double det = l1.a * (l2.b * l3.c - l2.c * l3.b) -
                       l1.b * (l2.a * l3.c - l2.c * l3.a) +
                       l1.c * (l2.a * l3.b - l2.b * l3.a);
    return std::abs(det);
}

Homography homography_from_quad(const Quadrilateral& src, const Quadrilateral& dst) {
    std::array<double, 64> a{};
    std::array<double, 8> b{};
    for (int i = 0; i < 4; ++i) {
        const double x = src.v[i].x, y = src.v[i].y;
        const double xp = dst.v[i].x, yp = dst.v[i].y;
        double* r0 = &a[(2 * i) * 8];
        double* r1 = &a[(2 * i + 1) * 8];
        r0[0] = x; r0[1] = y; r0[2] = 1; r0[6] = -x * xp; r0[7] = -y * xp;
        r1[3] = x; r1[4] = y; r1[5] = 1; r1[6] = -x * yp; r1[7] = -y * yp;
        b[2 * i] = xp;
        b[2 * i + 1] = yp;
    }
    if (!solve_linear(a, b, 8)) throw std::runtime_error("degenerate quad pair");
    return Homography({b[0], b[1], b[2], b[3], b[4], b[5], b[6], b[7], 1.0});
}

Hexangle apply_correction_v(const Hexangle& h) {
    const PencilFit fit = fit_concurrent_lines(
        {h.top_side(), h.crease_segment(), Segment2{h.v[Hexangle::BL], h.v[Hexangle::BR]}});
    const Line2& top = fit.lines[0];
    const Line2& crease = fit.lines[1];
    const Line2& bottom = fit.lines[2];

    const Line2 left_up = Line2::through(h.v[Hexangle::CL], h.v[Hexangle::TL]);
    const Line2 right_up = Line2::through(h.v[Hexangle::TR], h.v[Hexangle::CR]);
    const Line2 left_dn = Line2::through(h.v[Hexangle::BL], h.v[Hexangle::CL]);
    const Line2 right_dn = Line2::through(h.v[Hexangle::CR], h.v[Hexangle::BR]);

    auto meet = [](const Line2& a, const Line2& b) {
        const HomoPoint p = intersect(a, b);
        if (p.at_infinity()) throw std::runtime_error("correction failed");
        return p.point();
    };

    Hexangle out;
    out.v[Hexangle::TL] = meet(top, left_up);
    out.v[Hexangle::TR] = meet(top, right_up);
    out.v[Hexangle::BL] = meet(bottom, left_dn);
    out.v[Hexangle::BR] = meet(bottom, right_dn);
    out.v[Hexangle::CL] = meet(crease, left_up);
    out.v[Hexangle::CR] = meet(crease, right_up);
    return out;
}

double aspect_ratio(const Quadrilateral& q, double focal, const Point2& principal) {
    if (!(focal > 0.0)) throw std::invalid_argument("focal must be positive");
    // Rectangle corner model: m1=TL, m2=TR, m3=BL, m4=BR with M2-M1 the width
    // direction and M3-M1 the height direction.
    const HomoPoint m1 = HomoPoint::from(q.v[0]);
    const HomoPoint m2 = HomoPoint::from(q.v[1]);
    const HomoPoint m3 = HomoPoint::from(q.v[3]);
    const HomoPoint m4 = HomoPoint::from(q.v[2]);

    auto cross3 = [](const HomoPoint& a, const HomoPoint& b) {
        return HomoPoint{a.v * b.w - a.w * b.v, a.w * b.u - a.u * b.w, a.u * b.v - a.v * b.u};
    };
    auto dot3 = [](const HomoPoint& a, const HomoPoint& b) {
        return a.u * b.u + a.v * b.v + a.w * b.w;
    };

    const HomoPoint c14 = cross3(m1, m4);
    const double d2 = dot3(cross3(m2, m4), m3);
    const double d3 = dot3(cross3(m3, m4), m2);
    if (std::abs(d2) < 1e-12 || std::abs(d3) < 1e-12)
        throw std::domain_error("ratio undefined");
    const double k2 = dot3(c14, m3) / d2;
    const double k3 = dot3(c14, m2) / d3;

    const HomoPoint n2{k2 * m2.u - m1.u, k2 * m2.v - m1.v, k2 * m2.w - m1.w};
    const HomoPoint n3{k3 * m3.u - m1.u, k3 * m3.v - m1.v, k3 * m3.w - m1.w};

    const double f2 = focal * focal;
    const double u0 = principal.x, v0 = principal.y;
    auto omega = [&](const HomoPoint& n) {
        // n^T (A A^T)^{-1} n for A = [[f,0,u0],[0,f,v0],[0,0,1]].
        return (n.u * n.u + n.v * n.v) / f2 -
               2.0 * n.w * (n.u * u0 + n.v * v0) / f2 +
               n.w * n.w * (1.0 + (u0 * u0 + v0 * v0) / f2);
    };

    const double num = omega(n2);
    const double den = omega(n3);
    if (!(num > 0.0) || !(den > 0.0)) throw std::domain_error("ratio undefined");
    return std::sqrt(num / den);
}

}  // namespace unfolder

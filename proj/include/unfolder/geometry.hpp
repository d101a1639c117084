#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace unfolder {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    Point2 operator+(const Point2& o) const { return {x + o.x, y + o.y}; }
    Point2 operator-(const Point2& o) const { return {x - o.x, y - o.y}; }
    Point2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Point2& o) const { return x * o.x + y * o.y; }
    double cross(const Point2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
};

inline double distance(const Point2& a, const Point2& b) { return (a - b).norm(); }

// Homogeneous point (u, v, w); w == 0 encodes a direction (point at infinity).
struct HomoPoint {
    double u = 0.0;
    double v = 0.0;
    double w = 1.0;

    static HomoPoint from(const Point2& p) { return {p.x, p.y, 1.0}; }

    bool at_infinity() const;
    // Euclidean coordinates; throws for points at infinity.
    Point2 point() const;
    // Largest-magnitude component scaled to 1 (keeps numbers tame).
    HomoPoint normalized() const;
};

// Implicit line a*x + b*y + c = 0 with a^2 + b^2 = 1.
struct Line2 {
    double a = 0.0;
    double b = 1.0;
    double c = 0.0;

    static Line2 from_coeffs(double a, double b, double c);
    static Line2 through(const Point2& p, const Point2& q);
    static Line2 horizontal(double y) { return {0.0, 1.0, -y}; }
    static Line2 vertical(double x) { return {1.0, 0.0, -x}; }

    double signed_dist(const Point2& p) const { return a * p.x + b * p.y + c; }
    double dist(const Point2& p) const { return std::abs(signed_dist(p)); }
    Point2 direction() const { return {b, -a}; }
};

struct Segment2 {
    Point2 p0;
    Point2 p1;

    double length() const { return distance(p0, p1); }
    Point2 midpoint() const { return {(p0.x + p1.x) * 0.5, (p0.y + p1.y) * 0.5}; }
    Point2 at(double t) const { return {p0.x + (p1.x - p0.x) * t, p0.y + (p1.y - p0.y) * t}; }
    Line2 line() const { return Line2::through(p0, p1); }
    // Euclidean distance from p to the closed segment.
    double dist(const Point2& p) const;
};

class Homography {
public:
    Homography();  // identity
    explicit Homography(const std::array<double, 9>& m);

    static Homography from_matrix(const std::array<double, 9>& m) { return Homography(m); }

    double at(int r, int c) const { return m_[r * 3 + c]; }
    const std::array<double, 9>& data() const { return m_; }

    Point2 apply(const Point2& p) const;
    HomoPoint apply(const HomoPoint& p) const;
    Homography inverse() const;
    Homography compose(const Homography& rhs) const;  // this ∘ rhs

private:
    std::array<double, 9> m_;
};

// Vertices in clockwise order starting at the top-left corner (image
// coordinates, y growing downward): TL, TR, BR, BL.
struct Quadrilateral {
    std::array<Point2, 4> v;

    static Quadrilateral from(const Point2& tl, const Point2& tr, const Point2& br,
                              const Point2& bl) {
        Quadrilateral q;
        q.v = {tl, tr, br, bl};
        return q;
    }

    double area() const;
    // Convex, non-zero area, no three collinear vertices.
    bool valid() const;
    bool contains(const Point2& p, double tol = 1e-9) const;
};

// Six-vertex outline of a document folded in half: TL, TR, CreaseRight,
// BR, BL, CreaseLeft (clockwise spiral from the top-left corner).
struct Hexangle {
    enum Index { TL = 0, TR = 1, CR = 2, BR = 3, BL = 4, CL = 5 };

    std::array<Point2, 6> v;

    static Hexangle from_vertices(const std::array<Point2, 6>& vertices);

    Line2 crease_line() const { return Line2::through(v[CL], v[CR]); }
    Segment2 crease_segment() const { return {v[CL], v[CR]}; }
    Segment2 top_side() const { return {v[TL], v[TR]}; }
    Segment2 bottom_side() const { return {v[BL], v[BR]}; }

    Quadrilateral upper() const { return {{v[TL], v[TR], v[CR], v[CL]}}; }
    Quadrilateral lower() const { return {{v[CL], v[CR], v[BR], v[BL]}}; }

    // Simple polygon splitting into two valid convex quads along the crease.
    bool valid() const;
    bool contains(const Point2& p, double tol = 1e-9) const;
};

// Cross product of coefficient vectors; w == 0 for parallel lines.
// Throws std::invalid_argument for coincident lines.
HomoPoint intersect(const Line2& l1, const Line2& l2);

// |det| of the 3x3 matrix of normalized line coefficients. Zero iff the
// lines share a common point (possibly at infinity).
double concurrency_defect(const Line2& l1, const Line2& l2, const Line2& l3);

// Direct 4-point homography (8x8 linear system). Maps src vertices onto
// dst vertices. Throws std::runtime_error on a singular system.
Homography homography_from_quad(const Quadrilateral& src, const Quadrilateral& dst);

struct PencilFit {
    HomoPoint vertex;             // common point of the fitted lines
    std::array<Line2, 3> lines;   // one per input segment, all through vertex
    double residual = 0.0;        // sum of squared endpoint distances
};

// Three lines through one common point (possibly at infinity) minimizing the
// sum over segments of squared perpendicular distances from both endpoints
// to the corresponding line. Throws if all six endpoints are collinear.
PencilFit fit_concurrent_lines(const std::array<Segment2, 3>& segments);

// Replaces the hexangle's three horizontal elements (top side, crease,
// bottom side) with the nearest pencil of concurrent lines and re-intersects
// the vertices. Top/bottom vertices come from the corresponding vertical
// side lines; crease vertices from the upper vertical side lines.
// Throws std::runtime_error("correction failed") when a re-intersection
// lands at infinity.
Hexangle apply_correction_v(const Hexangle& h);

// Physical width:height ratio of the rectangle whose pinhole projection is
// q, for a camera with the given focal length (pixels) and principal point.
// Width is measured along the TL->TR side. Throws std::domain_error
// ("ratio undefined") when the camera model is violated.
double aspect_ratio(const Quadrilateral& q, double focal, const Point2& principal);

}  // namespace unfolder

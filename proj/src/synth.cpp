#include "unfolder/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "unfolder/rng.hpp"

namespace unfolder {

namespace {

constexpr double kPageW = 210.0;  // page units; one unit is about a millimeter
const double kPageTint[3] = {252.0, 250.0, 246.0};
const double kGlyphRefl = 0.13;

struct Vec3 {
    double x, y, z;
};

Vec3 rotate(const Vec3& v, double yaw, double pitch, double roll) {
    // Ry(yaw) then Rx(pitch) then Rz(roll), angles in radians.
    const double cy = std::cos(yaw), sy = std::sin(yaw);
    const double cx = std::cos(pitch), sx = std::sin(pitch);
    const double cz = std::cos(roll), sz = std::sin(roll);
    Vec3 a{cy * v.x + sy * v.z, v.y, -sy * v.x + cy * v.z};
    Vec3 b{a.x, cx * a.y - sx * a.z, sx * a.y + cx * a.z};
    return {cz * b.x - sz * b.y, sz * b.x + cz * b.y, b.z};
}

// Procedural page content: dark blocks laid out as text lines, or a grid.
struct PageContent {
    double pw = kPageW;
    double ph = 297.0;
    bool grid = false;
    double line_top = 0.0, line_pitch = 1.0, glyph_h = 1.0;
    std::vector<std::vector<std::pair<double, double>>> lines;  // x-intervals

    double reflectance(double x, double y) const {
        if (x < 0.0 || y < 0.0 || x > pw || y > ph) return 1.0;
        if (grid) {
            const double gx = std::fmod(x, 14.0);
            const double gy = std::fmod(y, 14.0);
            return (gx < 1.3 || gy < 1.3) ? kGlyphRefl : 1.0;
        }
        const double rel = y - line_top;
        if (rel < 0.0) return 1.0;
        const int li = static_cast<int>(rel / line_pitch);
        if (li < 0 || li >= static_cast<int>(lines.size())) return 1.0;
        if (rel - li * line_pitch > glyph_h) return 1.0;
        const auto& row = lines[li];
        auto it = std::upper_bound(row.begin(), row.end(), std::make_pair(x, 1e300));
        if (it == row.begin()) return 1.0;
        --it;
        return x <= it->second ? kGlyphRefl : 1.0;
    }
};

PageContent make_content(const SceneSpec& spec, Rng& rng) {
    PageContent c;
    c.pw = kPageW;
    c.ph = kPageW * spec.page_ratio;
    if (spec.content == SceneSpec::Content::grid) {
        c.grid = true;
        return c;
    }
    const double margin = 17.0;
    c.line_top = 15.0;
    c.line_pitch = 13.0;
    c.glyph_h = 8.2;
    const int nlines = static_cast<int>((c.ph - c.line_top - 14.0) / c.line_pitch);
    c.lines.resize(std::max(0, nlines));
    for (auto& row : c.lines) {
        if (rng.chance(0.09)) continue;  // paragraph break
        double x = margin + rng.uniform(0.0, 9.0);
        const double right = c.pw - margin;
        while (x < right) {
            const double w = rng.uniform(6.0, 19.0);
            if (x + w > right) break;
            if (rng.chance(0.93)) row.emplace_back(x, x + w);
            x += w + rng.uniform(2.6, 5.2);
        }
    }
    return c;
}

struct Background {
    bool textured = false;
    double base[3] = {88.0, 92.0, 97.0};
    double fx = 0.011, fy = 0.013, phase1 = 0.0, phase2 = 0.0;
    double grad = 0.0;  // vertical shading

    double value(double x, double y, int ch, int height) const {
        double v = base[ch];
        if (textured) {
            v *= 1.0 + 0.14 * std::sin(x * fx + phase1) * std::sin(y * fy + phase2);
        }
        v += grad * (y / height - 0.5);
        return v;
    }
};

struct SceneModel {
    SceneSpec spec;
    double pw, ph;
    Homography up;      // page units -> image
    Homography lo;
    Homography up_inv;  // image -> page units
    Homography lo_inv;
    Line2 crease_img{0, 1, 0};
    double shadow_sigma_px = 2.5;
    PageContent content;
    Background bg;
    double y_mid = 0.0;  // rough crease height for the curl bump
};

// Smooth image-space bump that bends the crease neighbourhood, violating the
// two-plane model when spec.curl > 0.
Point2 curl_disp(const SceneModel& m, const Point2& p) {
    if (m.spec.curl <= 0.0) return {0.0, 0.0};
    const double shape = 0.34 * std::cos(M_PI * p.x / m.spec.width) + 0.16;
    const double yc = m.crease_img.b != 0.0
                          ? -(m.crease_img.a * p.x + m.crease_img.c) / m.crease_img.b
                          : m.y_mid;
    const double band = 0.16 * m.spec.height;
    const double g = std::exp(-0.5 * std::pow((p.y - yc) / band, 2.0));
    return {0.0, m.spec.curl * m.spec.height * shape * g};
}

SceneModel build_model(const SceneSpec& spec) {
    SceneModel m;
    m.spec = spec;
    m.pw = kPageW;
    m.ph = kPageW * spec.page_ratio;

    Rng rng(hash_mix(spec.seed, 0xC0FFEE));
    m.content = make_content(spec, rng);

    Rng brng(hash_mix(spec.seed, 0xBA5E));
    m.bg.textured = spec.background == SceneSpec::Background::textured;
    for (double& b : m.bg.base) b = std::clamp(b + brng.uniform(-18.0, 18.0), 40.0, 150.0);
    m.bg.phase1 = brng.uniform(0.0, 6.28);
    m.bg.phase2 = brng.uniform(0.0, 6.28);
    m.bg.fx = brng.uniform(0.006, 0.02);
    m.bg.fy = brng.uniform(0.006, 0.02);
    m.bg.grad = brng.uniform(-14.0, 14.0);

    const double bend = (180.0 - spec.fold_angle) * M_PI / 180.0;
    const double theta_u = bend * spec.fold_split;
    const double theta_d = bend - theta_u;
    const double yaw = spec.camera.yaw_deg * M_PI / 180.0;
    const double pitch = spec.camera.pitch_deg * M_PI / 180.0;
    const double roll = spec.camera.roll_deg * M_PI / 180.0;

    // Crease axis and the two half-plane directions, posed in camera space.
    const Vec3 ex = rotate({1, 0, 0}, yaw, pitch, roll);
    const Vec3 uu = rotate({0, -std::cos(theta_u), std::sin(theta_u)}, yaw, pitch, roll);
    const Vec3 dd = rotate({0, std::cos(theta_d), std::sin(theta_d)}, yaw, pitch, roll);

    const double f = spec.camera.focal_factor * spec.width;
    const double cx = spec.width / 2.0;
    const double cy = spec.height / 2.0;

    // Pick the camera distance so the page fills the requested fraction of
    // the frame, then nudge it until every corner is inside with a margin.
    double dist = f * m.ph / (std::max(0.2, spec.camera.fill) * spec.height);
    const double off_x = spec.camera.offset.x * spec.width;
    const double off_y = spec.camera.offset.y * spec.height;

    auto make_homographies = [&](double d) {
        const Vec3 origin{off_x / f * d, off_y / f * d, d};
        auto col = [&](const Vec3& v) { return v; };
        auto compose = [&](const Vec3& bx, const Vec3& by, const Vec3& o) {
            // K * [bx by o] for K = [[f,0,cx],[0,f,cy],[0,0,1]].
            return Homography({f * bx.x + cx * bx.z, f * by.x + cx * by.z, f * o.x + cx * o.z,
                               f * bx.y + cy * bx.z, f * by.y + cy * by.z, f * o.y + cy * o.z,
                               bx.z, by.z, o.z});
        };
        // Upper half: page point (x, y) with y in [0, ph/2] sits at
        // origin + (x - pw/2) ex + (ph/2 - y) uu.
        const Vec3 ou{origin.x - (m.pw / 2.0) * ex.x + (m.ph / 2.0) * uu.x,
                      origin.y - (m.pw / 2.0) * ex.y + (m.ph / 2.0) * uu.y,
                      origin.z - (m.pw / 2.0) * ex.z + (m.ph / 2.0) * uu.z};
        const Vec3 mu{-uu.x, -uu.y, -uu.z};
        // Lower half: origin + (x - pw/2) ex + (y - ph/2) dd.
        const Vec3 ol{origin.x - (m.pw / 2.0) * ex.x - (m.ph / 2.0) * dd.x,
                      origin.y - (m.pw / 2.0) * ex.y - (m.ph / 2.0) * dd.y,
                      origin.z - (m.pw / 2.0) * ex.z - (m.ph / 2.0) * dd.z};
        m.up = compose(col(ex), mu, ou);
        m.lo = compose(col(ex), col(dd), ol);
    };

    for (int iter = 0; iter < 40; ++iter) {
        make_homographies(dist);
        const double mx = 0.04 * spec.width;
        const double my = 0.04 * spec.height;
        bool ok = true;
        for (const Point2 pc : {Point2{0, 0}, Point2{m.pw, 0}, Point2{m.pw, m.ph / 2},
                                Point2{m.pw, m.ph}, Point2{0, m.ph}, Point2{0, m.ph / 2}}) {
            const Point2 q = (pc.y <= m.ph / 2 ? m.up : m.lo).apply(pc);
            if (q.x < mx || q.x > spec.width - mx || q.y < my || q.y > spec.height - my)
                ok = false;
        }
        if (ok) break;
        dist *= 1.07;
    }

    // Depth sanity: every page corner must be in front of the camera.
    for (const Point2 pc : {Point2{0, 0}, Point2{m.pw, 0}, Point2{0, m.ph}, Point2{m.pw, m.ph}}) {
        const Homography& hmap = pc.y <= m.ph / 2 ? m.up : m.lo;
        const HomoPoint hp = hmap.apply(HomoPoint{pc.x, pc.y, 1.0});
        if (hp.w <= 1e-9) throw std::runtime_error("page behind camera");
    }

    m.up_inv = m.up.inverse();
    m.lo_inv = m.lo.inverse();
    const Point2 cl = m.up.apply(Point2{0.0, m.ph / 2.0});
    const Point2 cr = m.up.apply(Point2{m.pw, m.ph / 2.0});
    m.crease_img = Line2::through(cl, cr);
    m.y_mid = (cl.y + cr.y) * 0.5;
    m.shadow_sigma_px = std::max(2.0, 0.0018 * spec.width);
    return m;
}

// Scene reflectance lookup for one continuous image point. Returns true when
// the point lies on the page and writes the page-space shadow-darkened
// reflectance; false leaves the caller on the background path.
bool page_sample(const SceneModel& m, const Point2& p, double& refl) {
    for (int half = 0; half < 2; ++half) {
        const Homography& inv = half == 0 ? m.up_inv : m.lo_inv;
        const HomoPoint hp = inv.apply(HomoPoint{p.x, p.y, 1.0});
        if (std::abs(hp.w) < 1e-12) continue;
        const double x = hp.u / hp.w;
        const double y = hp.v / hp.w;
        if (x < 0.0 || x > m.pw) continue;
        if (half == 0 ? (y < 0.0 || y > m.ph / 2.0) : (y <= m.ph / 2.0 || y > m.ph)) continue;
        // Behind-camera branch of the projective inverse.
        const HomoPoint fwd = (half == 0 ? m.up : m.lo).apply(HomoPoint{x, y, 1.0});
        if (fwd.w <= 0.0) continue;
        refl = m.content.reflectance(x, y);
        if (m.spec.crease_shadow > 0.0) {
            const double d = m.crease_img.dist(p);
            refl *= 1.0 - m.spec.crease_shadow *
                              std::exp(-0.5 * std::pow(d / m.shadow_sigma_px, 2.0));
        }
        return true;
    }
    return false;
}

}  // namespace

std::pair<Image, GroundTruth> generate(const SceneSpec& spec) {
    if (spec.width < 64 || spec.height < 64) throw std::invalid_argument("scene too small");
    if (!(spec.fold_angle > 90.0) || spec.fold_angle > 180.0)
        throw std::invalid_argument("fold_angle must be in (90, 180]");
    if (spec.curl < 0.0) throw std::invalid_argument("curl must be >= 0");

    const SceneModel m = build_model(spec);

    GroundTruth gt;
    auto project = [&](double x, double y) {
        return (y <= m.ph / 2.0 ? m.up : m.lo).apply(Point2{x, y});
    };
    std::array<Point2, 6> corners{
        project(0, 0),       project(m.pw, 0),    project(m.pw, m.ph / 2),
        project(m.pw, m.ph), project(0, m.ph),    project(0, m.ph / 2)};
    if (spec.curl > 0.0) {
        // Features rendered at p satisfy p + disp(p) = q for the undistorted
        // position q; two fixed-point steps recover p.
        for (Point2& c : corners) {
            Point2 p = c;
            for (int it = 0; it < 3; ++it) {
                const Point2 d = curl_disp(m, p);
                p = {c.x - d.x, c.y - d.y};
            }
            c = p;
        }
    }
    gt.hexangle = Hexangle::from_vertices(corners);

    // Canvas -> image homographies (canvas is the out_w x out_h reference).
    const double sx = m.pw / spec.out_w;
    const double sy = m.ph / spec.out_h;
    const Homography canvas_to_page({sx, 0, 0, 0, sy, 0, 0, 0, 1});
    gt.h_upper = m.up.compose(canvas_to_page);
    gt.h_lower = m.lo.compose(canvas_to_page);

    // Ideal reference render (grayscale, no shadow, no noise).
    const double page_luma =
        0.299 * kPageTint[0] + 0.587 * kPageTint[1] + 0.114 * kPageTint[2];
    gt.reference = Image::make(spec.out_w, spec.out_h, 1);
    for (int y = 0; y < spec.out_h; ++y) {
        for (int x = 0; x < spec.out_w; ++x) {
            double acc = 0.0;
            for (const double dx : {0.25, 0.75}) {
                for (const double dy : {0.25, 0.75}) {
                    acc += m.content.reflectance((x + dx) * sx, (y + dy) * sy);
                }
            }
            gt.reference.at(y, x) =
                static_cast<std::uint8_t>(std::lround(std::clamp(acc * 0.25 * page_luma, 0.0, 255.0)));
        }
    }

    // Camera render: 2x2 supersampling, shared grayscale noise per pixel.
    Image img = Image::make(spec.width, spec.height, 3);
    const std::uint64_t noise_seed = hash_mix(spec.seed, 0x9015E);
    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
            double rgb[3] = {0, 0, 0};
            for (const double dx : {0.25, 0.75}) {
                for (const double dy : {0.25, 0.75}) {
                    Point2 p{x + dx, y + dy};
                    const Point2 d = curl_disp(m, p);
                    p = {p.x + d.x, p.y + d.y};
                    double refl;
                    if (page_sample(m, p, refl)) {
                        for (int c = 0; c < 3; ++c) rgb[c] += kPageTint[c] * refl;
                    } else {
                        for (int c = 0; c < 3; ++c)
                            rgb[c] += m.bg.value(p.x, p.y, c, spec.height);
                    }
                }
            }
            double noise = 0.0;
            if (spec.noise_std > 0.0) {
                Rng nrng(hash_mix(noise_seed,
                                  static_cast<std::uint64_t>(y) * spec.width + x));
                noise = spec.noise_std * nrng.normal();
            }
            for (int c = 0; c < 3; ++c) {
                img.at(y, x, c) = static_cast<std::uint8_t>(
                    std::lround(std::clamp(rgb[c] * 0.25 + noise, 0.0, 255.0)));
            }
        }
    }
    return {std::move(img), std::move(gt)};
}

double corner_error(const Hexangle& found, const Hexangle& truth) {
    double worst = 0.0;
    for (int i = 0; i < 6; ++i) worst = std::max(worst, distance(found.v[i], truth.v[i]));
    return worst;
}

SceneSpec random_folded_spec(std::uint64_t seed, double curl) {
    Rng rng(hash_mix(seed, 0xF01D));
    SceneSpec s;
    s.seed = seed;
    s.width = 1600;
    s.height = 1200;
    s.fold_angle = rng.uniform(150.0, 179.0);
    s.fold_split = rng.uniform(0.35, 0.65);
    s.camera.focal_factor = rng.uniform(0.66, 0.75);
    s.camera.fill = rng.uniform(0.6, 0.78);
    s.camera.offset = {rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05)};
    s.camera.yaw_deg = rng.uniform(-8.0, 8.0);
    s.camera.pitch_deg = rng.uniform(-12.0, 12.0);
    s.camera.roll_deg = rng.uniform(-6.0, 6.0);
    s.background = rng.chance(0.5) ? SceneSpec::Background::plain
                                   : SceneSpec::Background::textured;
    s.content = rng.chance(0.8) ? SceneSpec::Content::glyphs : SceneSpec::Content::grid;
    s.noise_std = rng.uniform(1.5, 4.0);
    s.curl = curl;
    s.crease_shadow = rng.uniform(0.24, 0.4);
    return s;
}

SceneSpec random_perspective_spec(std::uint64_t seed) {
    SceneSpec s = random_folded_spec(seed);
    s.fold_angle = 180.0;
    s.fold_split = 0.5;
    s.curl = 0.0;
    s.crease_shadow = 0.0;
    return s;
}

}  // namespace unfolder

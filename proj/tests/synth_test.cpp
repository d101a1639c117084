#include <doctest.h>

#include <cmath>

#include "unfolder/synth.hpp"

using namespace unfolder;

namespace {

SceneSpec small_spec(std::uint64_t seed) {
    SceneSpec s;
    s.seed = seed;
    s.width = 400;
    s.height = 300;
    s.out_w = 420;
    s.out_h = 594;
    return s;
}

void horizontal_lines(const Hexangle& h, Line2& top, Line2& crease, Line2& bottom) {
    top = Line2::through(h.v[Hexangle::TL], h.v[Hexangle::TR]);
    crease = Line2::through(h.v[Hexangle::CL], h.v[Hexangle::CR]);
    bottom = Line2::through(h.v[Hexangle::BL], h.v[Hexangle::BR]);
}

}  // namespace

TEST_CASE("generation is deterministic per seed") {
    const SceneSpec spec = small_spec(77);
    const auto [img1, gt1] = generate(spec);
    const auto [img2, gt2] = generate(spec);
    CHECK(img1.data == img2.data);
    CHECK(gt1.reference.data == gt2.reference.data);
    for (int i = 0; i < 6; ++i) CHECK(distance(gt1.hexangle.v[i], gt2.hexangle.v[i]) == 0.0);

    SceneSpec other = spec;
    other.seed = 78;
    const auto [img3, gt3] = generate(other);
    CHECK(img3.data != img1.data);
}

TEST_CASE("flat fronto-parallel scene makes an axis-aligned rectangle") {
    SceneSpec spec = small_spec(5);
    spec.fold_angle = 180.0;
    spec.crease_shadow = 0.0;
    spec.noise_std = 0.0;
    const auto [img, gt] = generate(spec);
    const auto& v = gt.hexangle.v;
    CHECK(v[Hexangle::TL].y == doctest::Approx(v[Hexangle::TR].y).epsilon(1e-9));
    CHECK(v[Hexangle::BL].y == doctest::Approx(v[Hexangle::BR].y).epsilon(1e-9));
    CHECK(v[Hexangle::TL].x == doctest::Approx(v[Hexangle::BL].x).epsilon(1e-9));
    CHECK(v[Hexangle::CL].y == doctest::Approx(v[Hexangle::CR].y).epsilon(1e-9));
    Line2 top, crease, bottom;
    horizontal_lines(gt.hexangle, top, crease, bottom);
    CHECK(concurrency_defect(top, crease, bottom) < 1e-12);
}

TEST_CASE("oblique folded scenes satisfy the concurrency criterion by construction") {
    for (const std::uint64_t seed : {1ULL, 2ULL, 3ULL, 9ULL}) {
        SceneSpec spec = random_folded_spec(seed);
        spec.width = 480;
        spec.height = 360;
        spec.out_w = 420;
        spec.out_h = 594;
        const auto [img, gt] = generate(spec);
        Line2 top, crease, bottom;
        horizontal_lines(gt.hexangle, top, crease, bottom);
        CHECK(concurrency_defect(top, crease, bottom) < 1e-9);
        CHECK(gt.hexangle.valid());
        // All vertices inside the frame.
        for (const Point2& p : gt.hexangle.v) {
            CHECK(p.x > 0.0);
            CHECK(p.y > 0.0);
            CHECK(p.x < spec.width);
            CHECK(p.y < spec.height);
        }
    }
}

TEST_CASE("half homographies agree along the crease") {
    SceneSpec spec = small_spec(41);
    spec.fold_angle = 160.0;
    spec.camera.pitch_deg = 8.0;
    spec.camera.yaw_deg = -5.0;
    const auto [img, gt] = generate(spec);
    const double mid = spec.out_h / 2.0;
    for (int i = 0; i <= 50; ++i) {
        const Point2 canvas{spec.out_w * (i / 50.0), mid};
        CHECK(distance(gt.h_upper.apply(canvas), gt.h_lower.apply(canvas)) < 1e-6);
    }
    // The canvas corners map to the ground-truth hexangle vertices.
    CHECK(distance(gt.h_upper.apply(Point2{0, 0}), gt.hexangle.v[Hexangle::TL]) < 1e-6);
    CHECK(distance(gt.h_lower.apply(Point2{static_cast<double>(spec.out_w),
                                           static_cast<double>(spec.out_h)}),
                   gt.hexangle.v[Hexangle::BR]) < 1e-6);
}

TEST_CASE("corner error") {
    const SceneSpec spec = small_spec(8);
    const auto [img, gt] = generate(spec);
    CHECK(corner_error(gt.hexangle, gt.hexangle) == 0.0);
    Hexangle shifted = gt.hexangle;
    for (Point2& v : shifted.v) v = v + Point2{3.0, 0.0};
    CHECK(corner_error(shifted, gt.hexangle) == doctest::Approx(3.0));
    Hexangle one_off = gt.hexangle;
    one_off.v[2] = one_off.v[2] + Point2{3.0, 4.0};
    CHECK(corner_error(one_off, gt.hexangle) == doctest::Approx(5.0));
}

TEST_CASE("impossible pose is rejected") {
    SceneSpec spec = small_spec(3);
    spec.camera.fill = 1000.0;
    spec.camera.pitch_deg = 85.0;
    CHECK_THROWS_AS(generate(spec), std::runtime_error);
}

TEST_CASE("spec validation") {
    SceneSpec bad = small_spec(1);
    bad.fold_angle = 80.0;
    CHECK_THROWS(generate(bad));
    bad = small_spec(1);
    bad.curl = -0.1;
    CHECK_THROWS(generate(bad));
}

TEST_CASE("random spec families stay in range") {
    for (std::uint64_t s = 1; s <= 40; ++s) {
        const SceneSpec f = random_folded_spec(s);
        CHECK(f.fold_angle >= 150.0);
        CHECK(f.fold_angle <= 179.0);
        CHECK(f.crease_shadow > 0.0);
        const SceneSpec p = random_perspective_spec(s);
        CHECK(p.fold_angle == 180.0);
        CHECK(p.crease_shadow == 0.0);
    }
}

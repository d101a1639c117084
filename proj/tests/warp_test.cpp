#include <doctest.h>

#include <cmath>

#include "unfolder/rng.hpp"
#include "unfolder/warp.hpp"

using namespace unfolder;

namespace {

Image checker(int w, int h, int cell, int channels = 1) {
    Image img = Image::make(w, h, channels);
    Rng rng(3);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < channels; ++c)
                img.at(y, x, c) =
                    ((x / cell + y / cell) % 2 ? 230 : 40) + static_cast<int>(c) * 5;
    return img;
}

// Hexangle whose three horizontal lines pass through one pencil vertex.
Hexangle pencil_hexangle(const Point2& vanish) {
    const Point2 tl{600, 700}, cl{560, 1500}, bl{590, 2300};
    auto along = [&](const Point2& a, double t) { return a + (vanish - a) * t; };
    return Hexangle::from_vertices(
        {tl, along(tl, 0.25), along(cl, 0.26), along(bl, 0.24), bl, cl});
}

}  // namespace

TEST_CASE("identity warp is byte-exact") {
    Params p;
    const Image src = checker(p.out_w, p.out_h, 64);
    const Hexangle h = Hexangle::from_vertices(
        {Point2{0, 0}, Point2{static_cast<double>(p.out_w), 0},
         Point2{static_cast<double>(p.out_w), p.out_h / 2.0},
         Point2{static_cast<double>(p.out_w), static_cast<double>(p.out_h)},
         Point2{0, static_cast<double>(p.out_h)}, Point2{0, p.out_h / 2.0}});
    REQUIRE(h.valid());
    const RectifiedOutput out = rectify(src, h, p);
    CHECK(out.image.data == src.data);
}

TEST_CASE("mid-line continuity of the two homographies") {
    Params p;
    const Image src = checker(4032, 3024, 97);
    const Hexangle h = pencil_hexangle({40000.0, 1500.0});
    REQUIRE(h.valid());
    const RectifiedOutput out = rectify(src, h, p);
    const double mid = p.out_h / 2.0;
    for (int i = 0; i <= 200; ++i) {
        const Point2 canvas{p.out_w * (i / 200.0), mid};
        const Point2 a = out.homographies[0].apply(canvas);
        const Point2 b = out.homographies[1].apply(canvas);
        CHECK(distance(a, b) < 1e-6);
    }
}

TEST_CASE("equivariant under joint integer translation") {
    Params p;
    p.out_w = 420;  // smaller canvas keeps this quick
    p.out_h = 594;
    const int dx = 17, dy = 23;
    const Image base = checker(900, 1200, 41);
    Image shifted = Image::make(900 + dx, 1200 + dy, 1, 0);
    for (int y = 0; y < 1200; ++y)
        for (int x = 0; x < 900; ++x) shifted.at(y + dy, x + dx) = base.at(y, x);

    Hexangle h = pencil_hexangle({20000.0, 600.0});
    for (Point2& v : h.v) v = v * 0.37;  // fit into the smaller source
    REQUIRE(h.valid());
    Hexangle h2 = h;
    for (Point2& v : h2.v) v = v + Point2{static_cast<double>(dx), static_cast<double>(dy)};

    const RectifiedOutput a = rectify(base, h, p);
    const RectifiedOutput b = rectify(shifted, h2, p);
    CHECK(a.image.data == b.image.data);
}

TEST_CASE("degenerate half quad fails") {
    Params p;
    const Image src = checker(640, 480, 16);
    Hexangle h = pencil_hexangle({40000.0, 1500.0});
    for (Point2& v : h.v) v = v * 0.15;
    h.v[Hexangle::CL] = h.v[Hexangle::TL];  // collapse the upper-left side
    CHECK_THROWS_AS(rectify(src, h, p), std::runtime_error);
}

TEST_CASE("out-of-image samples clamp to the border") {
    Params p;
    p.out_w = 210;
    p.out_h = 298;
    Image src = Image::make(300, 300, 1, 200);
    // Hexangle partly outside the source: samples clamp, never uninitialized.
    const Hexangle h = Hexangle::from_vertices({Point2{-40, -40}, Point2{250, -30},
                                                Point2{255, 150}, Point2{260, 340},
                                                Point2{-45, 330}, Point2{-50, 148}});
    REQUIRE(h.valid());
    const RectifiedOutput out = rectify(src, h, p);
    for (const std::uint8_t v : out.image.data) CHECK(v == 200);
}

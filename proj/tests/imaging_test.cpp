#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "unfolder/image.hpp"
#include "unfolder/path_graph.hpp"
#include "unfolder/rng.hpp"

using namespace unfolder;

TEST_CASE("grayscale conversion") {
    Image rgb = Image::make(16, 16, 3);
    for (auto& v : rgb.data) v = 255;
    const Image g = to_grayscale(rgb);
    CHECK(g.channels == 1);
    CHECK(static_cast<int>(g.at(0, 0)) == 255);

    Image red = Image::make(16, 16, 3);
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 16; ++x) red.at(y, x, 0) = 255;
    CHECK(static_cast<int>(to_grayscale(red).at(3, 3)) == 76);  // round(0.299 * 255)

    Image gray = Image::make(16, 16, 1, 99);
    const Image same = to_grayscale(gray);
    CHECK(same.data == gray.data);
}

TEST_CASE("edge extraction") {
    SUBCASE("constant image gives empty maps") {
        const Image img = Image::make(64, 64, 1, 128);
        const EdgeMaps em = extract_edges(img);
        CHECK(em.vertical.nonzero_count() == 0);
        CHECK(em.horizontal.nonzero_count() == 0);
    }
    SUBCASE("ideal vertical step lands in one column") {
        const int c = 30;
        Image img = Image::make(64, 64, 1, 20);
        for (int y = 0; y < 64; ++y)
            for (int x = c + 1; x < 64; ++x) img.at(y, x) = 220;
        const EdgeMaps em = extract_edges(img);
        CHECK(em.horizontal.nonzero_count() == 0);
        for (int y = 0; y < 64; ++y) {
            for (int x = 1; x < 63; ++x) {
                if (x == c)
                    CHECK(em.vertical.at(y, x) > 0.0f);
                else
                    CHECK(em.vertical.at(y, x) == 0.0f);
            }
        }
    }
    SUBCASE("invariant under intensity shift") {
        Rng rng(5);
        Image a = Image::make(48, 40, 1);
        for (auto& v : a.data) v = static_cast<std::uint8_t>(rng.uniform_int(0, 199));
        Image b = a;
        for (auto& v : b.data) v = static_cast<std::uint8_t>(v + 40);
        const EdgeMaps ea = extract_edges(a);
        const EdgeMaps eb = extract_edges(b);
        CHECK(ea.vertical.data == eb.vertical.data);
        CHECK(ea.horizontal.data == eb.horizontal.data);
    }
    SUBCASE("too small throws") {
        CHECK_THROWS(extract_edges(Image::make(8, 8, 1)));
    }
}

TEST_CASE("gaussian smoothing") {
    SUBCASE("constant map unchanged") {
        EdgeMap em = EdgeMap::make(EdgeMap::Orientation::vertical, 32, 32);
        for (auto& v : em.data) v = 7.0f;
        const EdgeMap s = smooth(em, 1.83);
        for (float v : s.data) CHECK(v == doctest::Approx(7.0).epsilon(1e-6));
    }
    SUBCASE("impulse response matches the kernel peak and keeps mass") {
        const double sigma = 1.83;
        EdgeMap em = EdgeMap::make(EdgeMap::Orientation::vertical, 41, 41);
        em.at(20, 20) = 1.0f;
        const EdgeMap s = smooth(em, sigma);
        // Direct evaluation of the normalized kernel peak.
        const int radius = static_cast<int>(std::ceil(3.0 * sigma));
        double ksum = 0.0;
        for (int i = -radius; i <= radius; ++i) ksum += std::exp(-0.5 * i * i / (sigma * sigma));
        const double peak1d = 1.0 / ksum;
        CHECK(s.at(20, 20) == doctest::Approx(peak1d * peak1d).epsilon(1e-5));
        double mass = 0.0;
        for (float v : s.data) mass += v;
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("tiny sigma approaches identity") {
        EdgeMap em = EdgeMap::make(EdgeMap::Orientation::vertical, 21, 21);
        em.at(10, 10) = 1.0f;
        const EdgeMap s = smooth(em, 0.1);
        CHECK(std::abs(s.at(10, 10) - 1.0f) < 1e-3f);
    }
    SUBCASE("interior mass is conserved") {
        Rng rng(17);
        EdgeMap em = EdgeMap::make(EdgeMap::Orientation::vertical, 64, 64);
        for (int y = 16; y < 48; ++y)
            for (int x = 16; x < 48; ++x) em.at(y, x) = static_cast<float>(rng.uniform_int(0, 50));
        const EdgeMap s = smooth(em, 1.83);
        const double sum_in = std::accumulate(em.data.begin(), em.data.end(), 0.0);
        const double sum_out = std::accumulate(s.data.begin(), s.data.end(), 0.0);
        CHECK(sum_out == doctest::Approx(sum_in).epsilon(1e-3));
    }
}

TEST_CASE("path graphs") {
    SUBCASE("empty map") {
        const EdgeMap em = EdgeMap::make(EdgeMap::Orientation::vertical, 16, 16);
        CHECK(path_graphs(em).empty());
    }
    SUBCASE("single vertical run") {
        EdgeMap em = EdgeMap::make(EdgeMap::Orientation::vertical, 16, 110);
        for (int y = 4; y < 104; ++y) em.at(y, 7) = 5.0f;
        const auto graphs = path_graphs(em);
        REQUIRE(graphs.size() == 1);
        CHECK(graphs[0].size() == 100);
        for (int i = 1; i < graphs[0].size(); ++i)
            CHECK(graphs[0].pixels[i].y == graphs[0].pixels[i - 1].y + 1);
    }
    SUBCASE("two runs with a gap; flood fill agrees") {
        EdgeMap em = EdgeMap::make(EdgeMap::Orientation::vertical, 32, 64);
        for (int y = 0; y < 20; ++y) em.at(y, 5) = 1.0f;
        for (int y = 30; y < 60; ++y) em.at(y, 9) = 1.0f;
        const auto graphs = path_graphs(em);
        CHECK(static_cast<int>(graphs.size()) == 2);
        CHECK(oracles::flood_fill_components(em) == 2);
    }
    SUBCASE("diagonal chain stays 8-connected and monotone") {
        EdgeMap em = EdgeMap::make(EdgeMap::Orientation::vertical, 64, 64);
        for (int y = 0; y < 40; ++y) em.at(y, 10 + y / 2) = 1.0f;
        const auto graphs = path_graphs(em);
        REQUIRE(graphs.size() == 1);
        CHECK(graphs[0].size() == 40);
    }
    SUBCASE("partition property on random maps") {
        Rng rng(23);
        for (int trial = 0; trial < 20; ++trial) {
            EdgeMap em = EdgeMap::make(EdgeMap::Orientation::vertical, 40, 40);
            for (auto& v : em.data)
                if (rng.chance(0.15)) v = 1.0f;
            const auto graphs = path_graphs(em);
            std::size_t total = 0;
            for (const auto& g : graphs) {
                total += g.pixels.size();
                for (int i = 1; i < g.size(); ++i) {
                    CHECK(g.pixels[i].y == g.pixels[i - 1].y + 1);  // strictly monotone
                    CHECK(std::abs(g.pixels[i].x - g.pixels[i - 1].x) <= 1);
                }
            }
            CHECK(total == em.nonzero_count());
        }
    }
    SUBCASE("horizontal orientation transposes the rule") {
        EdgeMap em = EdgeMap::make(EdgeMap::Orientation::horizontal, 80, 16);
        for (int x = 3; x < 70; ++x) em.at(8, x) = 2.0f;
        const auto graphs = path_graphs(em);
        REQUIRE(graphs.size() == 1);
        CHECK(graphs[0].size() == 67);
        for (int i = 1; i < graphs[0].size(); ++i)
            CHECK(graphs[0].pixels[i].x == graphs[0].pixels[i - 1].x + 1);
    }
}

TEST_CASE("working-scale downscale keeps coordinates affine") {
    Image img = Image::make(1280, 960, 1);
    for (int y = 0; y < 960; ++y)
        for (int x = 0; x < 1280; ++x) img.at(y, x) = static_cast<std::uint8_t>((x / 10) % 256);
    const auto [work, scale] = downscale_to_work(img, 640);
    CHECK(work.width == 640);
    CHECK(work.height == 480);
    CHECK(scale.sx == doctest::Approx(0.5));
    CHECK(scale.sy == doctest::Approx(0.5));
    const Point2 p = scale.to_full(Point2{100.0, 50.0});
    CHECK(p.x == doctest::Approx(200.0));
    CHECK(p.y == doctest::Approx(100.0));

    const auto [same, s1] = downscale_to_work(img, 2000);
    CHECK(same.width == 1280);
    CHECK(s1.sx == doctest::Approx(1.0));
}

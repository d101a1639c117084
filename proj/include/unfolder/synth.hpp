#pragma once

#include <cstdint>
#include <utility>

#include "unfolder/geometry.hpp"
#include "unfolder/image.hpp"

namespace unfolder {

struct CameraSpec {
    double focal_factor = 0.705;  // focal length as a fraction of image width
    double fill = 0.72;           // page height as a fraction of frame height
    Point2 offset{0.0, 0.0};      // page center shift, fraction of frame size
    double yaw_deg = 0.0;         // page pose around the vertical axis
    double pitch_deg = 0.0;       // around the horizontal axis
    double roll_deg = 0.0;        // in-plane
};

// Seeded folded-document scene. The document is two flat half-page
// rectangles meeting at a horizontal crease; fold_angle is the dihedral
// angle between them (180 = flat sheet).
struct SceneSpec {
    enum class Background { plain, textured };
    enum class Content { grid, glyphs };

    std::uint64_t seed = 1;
    int width = 1600;
    int height = 1200;
    double page_ratio = 297.0 / 210.0;  // page height over page width
    double fold_angle = 165.0;
    double fold_split = 0.5;  // share of the bend taken by the upper half
    CameraSpec camera;
    Background background = Background::plain;
    Content content = Content::glyphs;
    double noise_std = 3.0;      // grayscale noise, intensity levels
    double curl = 0.0;           // 0 = exact two-plane model
    double crease_shadow = 0.3;  // shadow amplitude, 0 = none
    int out_w = 2100;
    int out_h = 2970;
};

struct GroundTruth {
    Hexangle hexangle;    // full-resolution image coordinates
    Homography h_upper;   // reference canvas -> image, upper half
    Homography h_lower;
    Image reference;      // out_w x out_h grayscale ideal render
};

// Renders the scene and its exact ground truth. For curl = 0 the two half
// homographies share the horizontal vanishing point by construction.
// Throws std::runtime_error when the pose puts the page behind the camera.
std::pair<Image, GroundTruth> generate(const SceneSpec& spec);

// Max Euclidean vertex distance between two hexangles in the same order.
double corner_error(const Hexangle& found, const Hexangle& truth);

// Seed-derived scene families used by the CLI and the acceptance suite.
SceneSpec random_folded_spec(std::uint64_t seed, double curl = 0.0);
SceneSpec random_perspective_spec(std::uint64_t seed);

}  // namespace unfolder

#pragma once

#include <string>

namespace unfolder {

// Every manual constant of the algorithm in one validated record. The
// defaults are the operating point used throughout the tests; any field can
// be overridden from a JSON config file with the same key names.
struct Params {
    double delta_min_e = 3.0;    // px, path-graph-to-segment assignment distance
    double rho_min = 0.5;        // fraction of segment length an assigned graph must cover
    double eps_c = 0.2;          // regression error bound growing the central fracture span
    double eps_o = 1.0;          // regression error bound growing the outer spans
    double phi_max_c = 170.0;    // deg, fracture angles above this mean "no crease point"
    double delta_max_c = 15.0;   // px, crease-line search radius around a crease point
    double delta_min_b = 10.0;   // px, margin of the crease-line boundary interval
    double rho_min_l1 = 0.4;     // fraction of image width a crease path graph must span
    double rho_min_l2 = 0.9;     // fraction of a crease path graph required inside the quads
    double beta = 3.0;           // px, crease path-graph extension at both ends
    double sigma = 1.83;         // Gaussian smoothing std for contour scoring
    double beta_p = 10.0;        // px, penalty prolongation length per vertex
    double lambda = 0.705;       // focal length as a fraction of image width
    double r0 = 297.0 / 210.0;   // reference aspect ratio of a half page
    double ratio_tol = 0.3;      // relative aspect-ratio gate width
    double phi_max_v = 2.56;     // deg, max horizontal-segment rotation by the correction
    double rho_max_v = 0.01;     // fraction of image height a vertex may move
    int out_w = 2100;            // rectified canvas width
    int out_h = 2970;            // rectified canvas height
    int k_lines = 12;            // candidate lines per family per half-image
    int w_work = 640;            // working resolution of the longer image side

    // Throws std::invalid_argument when any field is out of range.
    void validate() const;
};

// Parses overrides from a JSON file; absent fields keep their defaults.
Params load_params(const std::string& path);
Params params_from_json_text(const std::string& text);

}  // namespace unfolder

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "unfolder/evaluate.hpp"
#include "unfolder/fdi.hpp"
#include "unfolder/io.hpp"
#include "unfolder/params.hpp"
#include "unfolder/pipeline.hpp"
#include "unfolder/synth.hpp"

namespace fs = std::filesystem;
using namespace unfolder;

namespace {

int cmd_rectify(const std::string& in_path, const std::string& out_path,
                const std::string& config, const std::string& debug_dir) {
    Image img;
    try {
        img = load_image(in_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    const Params p = config.empty() ? Params{} : load_params(config);
    const UnfoldResult r = debug_dir.empty() ? unfold_timed(img, p)
                                             : unfold_debug(img, p, debug_dir);
    try {
        save_image(out_path, r.output);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::printf("status: %s\n", r.rectified() ? "rectified" : "trivial");
    std::printf("L: %.1f ms  T: %.1f ms  total: %.1f ms\n", r.timings.localization_ms(),
                r.timings.transform_ms(), r.timings.total_ms);
    return 0;
}

int cmd_eval(const std::string& dataset, const std::string& subset, const std::string& scene,
             bool crop_c_flag, bool no_algo, const std::string& ocr_cmd,
             const std::string& out_csv, int threads, const std::string& config) {
    std::vector<std::string> diags;
    std::vector<FdiRecord> records;
    try {
        records = load_fdi(dataset, FdiFilter{subset, scene}, &diags);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    for (const std::string& d : diags) std::cerr << "warning: " << d << "\n";

    EvalOptions opt;
    opt.crop_c = crop_c_flag;
    opt.no_algo = no_algo;
    opt.threads = threads;
    if (!config.empty()) opt.params = load_params(config);
    if (!ocr_cmd.empty()) opt.ocr = OcrConfig{ocr_cmd};

    const EvalReport report = evaluate(records, opt);
    std::ofstream out(out_csv);
    if (!out) {
        std::cerr << "error: cannot write " << out_csv << "\n";
        return 1;
    }
    out << report.csv();
    std::cout << report.table();
    return 0;
}

int cmd_synth(int count, std::uint64_t seed, double curl, const std::string& out_dir) {
    fs::create_directories(out_dir);
    for (int i = 0; i < count; ++i) {
        const SceneSpec spec = random_folded_spec(seed + static_cast<std::uint64_t>(i), curl);
        const auto [img, gt] = generate(spec);
        char name[64];
        std::snprintf(name, sizeof(name), "scene_%04d", i);
        const fs::path img_path = fs::path(out_dir) / (std::string(name) + ".png");
        const fs::path gt_path = fs::path(out_dir) / (std::string(name) + ".json");
        save_image(img_path.string(), img);

        nlohmann::json j;
        j["seed"] = spec.seed;
        j["width"] = spec.width;
        j["height"] = spec.height;
        j["fold_angle"] = spec.fold_angle;
        j["curl"] = spec.curl;
        j["noise_std"] = spec.noise_std;
        j["crease_shadow"] = spec.crease_shadow;
        auto verts = nlohmann::json::array();
        for (const Point2& v : gt.hexangle.v) verts.push_back({v.x, v.y});
        j["vertices"] = verts;
        auto mat = [](const Homography& h) {
            auto m = nlohmann::json::array();
            for (int r = 0; r < 3; ++r)
                m.push_back({h.at(r, 0), h.at(r, 1), h.at(r, 2)});
            return m;
        };
        j["h_upper"] = mat(gt.h_upper);
        j["h_lower"] = mat(gt.h_lower);
        std::ofstream(gt_path) << j.dump(2) << "\n";
        std::printf("%s fold=%.1f curl=%.3f\n", name, spec.fold_angle, spec.curl);
    }
    return 0;
}

int cmd_bench(const std::string& dir, int reps) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        const std::string ext = e.path().extension().string();
        if (ext == ".png" || ext == ".jpg" || ext == ".jpeg") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        std::cerr << "error: no images in " << dir << "\n";
        return 1;
    }

    const Params p;
    std::vector<double> ls, ts, totals;
    for (const fs::path& f : files) {
        const Image img = load_image(f.string());
        unfold_timed(img, p);  // warm-up
        for (int r = 0; r < reps; ++r) {
            const UnfoldResult res = unfold_timed(img, p);
            ls.push_back(res.timings.localization_ms());
            ts.push_back(res.timings.transform_ms());
            totals.push_back(res.timings.total_ms);
        }
    }
    auto stats = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
        const double median = v[v.size() / 2];
        return std::pair{mean, median};
    };
    const auto [lm, lmed] = stats(ls);
    const auto [tm, tmed] = stats(ts);
    const auto [om, omed] = stats(totals);
    std::printf("samples: %zu (%zu images x %d reps)\n", totals.size(), files.size(), reps);
    std::printf("L     mean %8.2f ms   median %8.2f ms\n", lm, lmed);
    std::printf("T     mean %8.2f ms   median %8.2f ms\n", tm, tmed);
    std::printf("total mean %8.2f ms   median %8.2f ms\n", om, omed);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Unfolder: localization and rectification of documents folded in half"};
    app.require_subcommand(1);

    auto* rectify_cmd = app.add_subcommand("rectify", "Rectify one image");
    std::string in_path, out_path, config, debug_dir;
    rectify_cmd->add_option("input", in_path, "input image")->required();
    rectify_cmd->add_option("output", out_path, "output image")->required();
    rectify_cmd->add_option("--config", config, "JSON parameter overrides");
    rectify_cmd->add_option("--debug-dir", debug_dir, "write stage visualizations here");

    auto* eval_cmd = app.add_subcommand("eval", "Evaluate on an FDI-layout dataset");
    std::string dataset, subset = "2fold", scene = "all", ocr_cmd, out_csv, eval_config;
    bool crop_flag = false, no_algo = false;
    int threads = 1;
    eval_cmd->add_option("--dataset", dataset, "dataset root")->required();
    eval_cmd->add_option("--subset", subset, "2fold|3fold|4fold|8fold");
    eval_cmd->add_option("--scene", scene, "hand|table|all");
    eval_cmd->add_flag("--crop-c", crop_flag, "crop to the annotated box first");
    eval_cmd->add_flag("--no-algo", no_algo, "score raw images");
    eval_cmd->add_option("--ocr-cmd", ocr_cmd, "OCR command template ({input}, {langs})");
    eval_cmd->add_option("--out", out_csv, "CSV output path")->required();
    eval_cmd->add_option("--threads", threads, "evaluation worker count");
    eval_cmd->add_option("--config", eval_config, "JSON parameter overrides");

    auto* synth_cmd = app.add_subcommand("synth", "Generate synthetic folded scenes");
    int count = 1;
    std::uint64_t seed = 1;
    double curl = 0.0;
    std::string synth_out;
    synth_cmd->add_option("--count", count, "number of scenes");
    synth_cmd->add_option("--seed", seed, "master seed");
    synth_cmd->add_option("--curl", curl, "two-plane model violation strength");
    synth_cmd->add_option("--out", synth_out, "output directory")->required();

    auto* bench_cmd = app.add_subcommand("bench", "Time the pipeline over a directory");
    std::string bench_dir;
    int reps = 5;
    bench_cmd->add_option("--dir", bench_dir, "image directory")->required();
    bench_cmd->add_option("--reps", reps, "repetitions per image");

    CLI11_PARSE(app, argc, argv);

    try {
        if (rectify_cmd->parsed()) return cmd_rectify(in_path, out_path, config, debug_dir);
        if (eval_cmd->parsed())
            return cmd_eval(dataset, subset, scene, crop_flag, no_algo, ocr_cmd, out_csv,
                            threads, eval_config);
        if (synth_cmd->parsed()) return cmd_synth(count, seed, curl, synth_out);
        if (bench_cmd->parsed()) return cmd_bench(bench_dir, reps);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

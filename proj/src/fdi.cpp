#include "unfolder/fdi.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>

#include <json.hpp>

namespace fs = std::filesystem;

namespace unfolder {

namespace {

// Expected annotated vertex count per folding type: the outline picks up two
// extra vertices per crease-edge crossing (2fold: 6; 3fold and 4fold: 8;
// 8fold: 10).
const std::map<std::string, int> kVertexCount{
    {"2fold", 6}, {"3fold", 8}, {"4fold", 8}, {"8fold", 10}};

void note(std::vector<std::string>* diags, const std::string& msg) {
    if (diags) diags->push_back(msg);
}

}  // namespace

std::vector<FdiRecord> load_fdi(const std::string& root_dir, const FdiFilter& filter,
                                std::vector<std::string>* diagnostics) {
    const fs::path root(root_dir);
    const fs::path images = root / "images";
    const fs::path annotation = root / "annotation";
    const fs::path reference = root / "reference";
    if (!fs::is_directory(images) || !fs::is_directory(annotation) ||
        !fs::is_directory(reference))
        throw std::runtime_error("dataset layout invalid");

    // Terminal directories are the ones carrying a runlist.lst.
    std::vector<fs::path> terminals;
    terminals.push_back(images);
    for (const auto& e : fs::recursive_directory_iterator(images))
        if (e.is_directory()) terminals.push_back(e.path());
    std::sort(terminals.begin(), terminals.end());

    std::vector<FdiRecord> out;
    for (const fs::path& dir : terminals) {
        const fs::path runlist = dir / "runlist.lst";
        if (!fs::exists(runlist)) continue;
        std::ifstream in(runlist);
        std::string name;
        while (std::getline(in, name)) {
            while (!name.empty() && (name.back() == '\r' || name.back() == ' ')) name.pop_back();
            if (name.empty()) continue;

            const fs::path img_path = dir / name;
            const fs::path rel = fs::relative(img_path, images);
            const fs::path ann_path = annotation / (rel.string() + ".json");
            if (!fs::exists(img_path)) {
                note(diagnostics, "missing image: " + img_path.string());
                continue;
            }
            if (!fs::exists(ann_path)) {
                note(diagnostics, "missing annotation: " + ann_path.string());
                continue;
            }

            FdiRecord rec;
            rec.id = fs::path(name).stem().string();
            rec.image_path = img_path.string();
            try {
                std::ifstream af(ann_path);
                const nlohmann::json j = nlohmann::json::parse(af);
                rec.language = j.at("language").get<std::string>();
                rec.folding = j.at("folding").get<std::string>();
                rec.scene = j.at("scene").get<std::string>();
                std::string ref = j.at("reference").get<std::string>();
                if (ref.find('.') == std::string::npos) ref += ".tiff";
                rec.reference_tiff_path = (reference / "tiff" / ref).string();
                for (const auto& v : j.at("vertices")) {
                    rec.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
                }
            } catch (const std::exception& e) {
                note(diagnostics, "malformed annotation " + ann_path.string() + ": " + e.what());
                continue;
            }

            const auto expected = kVertexCount.find(rec.folding);
            if (expected == kVertexCount.end()) {
                note(diagnostics, rec.id + ": unknown folding type " + rec.folding);
                continue;
            }
            if (static_cast<int>(rec.vertices.size()) != expected->second) {
                note(diagnostics, rec.id + ": expected " + std::to_string(expected->second) +
                                      " vertices for " + rec.folding + ", got " +
                                      std::to_string(rec.vertices.size()));
                continue;
            }
            bool finite = true;
            for (const Point2& v : rec.vertices)
                finite = finite && std::isfinite(v.x) && std::isfinite(v.y) && v.x >= 0 && v.y >= 0;
            if (!finite) {
                note(diagnostics, rec.id + ": vertex out of range");
                continue;
            }

            if (!filter.folding.empty() && rec.folding != filter.folding) continue;
            if (!filter.scene.empty() && filter.scene != "all" && rec.scene != filter.scene)
                continue;
            out.push_back(std::move(rec));
        }
    }
    return out;
}

Image crop_c(const Image& img, const std::vector<Point2>& vertices) {
    if (vertices.size() < 3) throw std::invalid_argument("need at least 3 vertices");
    double min_x = vertices[0].x, max_x = vertices[0].x;
    double min_y = vertices[0].y, max_y = vertices[0].y;
    for (const Point2& v : vertices) {
        min_x = std::min(min_x, v.x);
        max_x = std::max(max_x, v.x);
        min_y = std::min(min_y, v.y);
        max_y = std::max(max_y, v.y);
    }
    const int x0 = std::max(0, static_cast<int>(std::floor(min_x)) - 20);
    const int y0 = std::max(0, static_cast<int>(std::floor(min_y)) - 20);
    const int x1 = std::min(img.width, static_cast<int>(std::ceil(max_x)) + 20);
    const int y1 = std::min(img.height, static_cast<int>(std::ceil(max_y)) + 20);
    if (x1 <= x0 || y1 <= y0) throw std::invalid_argument("degenerate crop box");

    Image out = Image::make(x1 - x0, y1 - y0, img.channels);
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x)
            for (int c = 0; c < img.channels; ++c) out.at(y - y0, x - x0, c) = img.at(y, x, c);
    return out;
}

}  // namespace unfolder

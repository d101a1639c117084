#include "unfolder/ocr.hpp"

#include <atomic>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <stdexcept>

#include "unfolder/io.hpp"

namespace fs = std::filesystem;

namespace unfolder {

namespace {

std::atomic<std::uint64_t> g_tmp_counter{0};

std::string substitute(std::string tmpl, const std::string& key, const std::string& value) {
    for (std::size_t pos = tmpl.find(key); pos != std::string::npos; pos = tmpl.find(key))
        tmpl.replace(pos, key.size(), value);
    return tmpl;
}

}  // namespace

std::string normalize_whitespace(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    for (unsigned char c : s) {
        if (std::isspace(c)) {
            pending_space = !out.empty();
        } else {
            if (pending_space) out.push_back(' ');
            pending_space = false;
            out.push_back(static_cast<char>(c));
        }
    }
    return out;
}

std::string ocr_text(const Image& img, const std::vector<std::string>& languages,
                     const OcrConfig& cfg) {
    std::string langs;
    for (const std::string& l : languages) {
        if (!langs.empty()) langs += '+';
        langs += l;
    }

    const fs::path tmp =
        fs::temp_directory_path() /
        ("unfolder_ocr_" + std::to_string(::getpid()) + "_" +
         std::to_string(g_tmp_counter.fetch_add(1)) + ".png");
    try {
        save_image(tmp.string(), img);
    } catch (const std::exception&) {
        throw std::runtime_error("ocr unavailable");
    }

    std::string cmd = substitute(cfg.command_template, "{input}", tmp.string());
    cmd = substitute(cmd, "{langs}", langs);

    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        fs::remove(tmp);
        throw std::runtime_error("ocr unavailable");
    }
    std::string output;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) output.append(buf, got);
    const int rc = pclose(pipe);
    fs::remove(tmp);
    if (rc != 0) throw std::runtime_error("ocr unavailable");
    return normalize_whitespace(output);
}

}  // namespace unfolder

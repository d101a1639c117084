#pragma once

#include <optional>
#include <string>
#include <vector>

#include "unfolder/fdi.hpp"
#include "unfolder/ocr.hpp"
#include "unfolder/params.hpp"

namespace unfolder {

struct EvalOptions {
    bool crop_c = false;   // crop to the annotated box before rectifying
    bool no_algo = false;  // score the raw image instead of rectifying
    std::optional<OcrConfig> ocr;
    std::vector<std::string> languages{"ara", "chi_sim", "eng", "hin", "rus"};
    int threads = 1;
    Params params;
};

struct EvalRow {
    std::string id;
    std::string folding;
    std::string scene;
    std::optional<double> ss;
    std::optional<std::int64_t> ed;
    std::optional<double> cer;
    std::string status;  // rectified | trivial | noalgo | error
};

struct EvalAggregate {
    std::string folding;
    std::string scene;
    int count = 0;
    std::optional<double> mean_ss;
    std::optional<double> mean_ed;
    std::optional<double> mean_cer;
};

struct EvalReport {
    std::vector<EvalRow> rows;
    std::vector<EvalAggregate> aggregates;
    int failures = 0;

    std::string csv() const;    // id,folding,scene,ss,ed,cer,status
    std::string table() const;  // human-readable aggregate table
};

// Per record: optional crop step, rectification (or no-op), SS against the
// reference TIFF, ED/CER when an OCR command is configured. Failing records
// are marked and excluded from the aggregates.
EvalReport evaluate(const std::vector<FdiRecord>& records, const EvalOptions& opt);

}  // namespace unfolder

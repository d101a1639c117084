#include "unfolder/evaluate.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <map>
#include <sstream>
#include <thread>

#include "unfolder/io.hpp"
#include "unfolder/metrics.hpp"
#include "unfolder/pipeline.hpp"

namespace unfolder {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

EvalRow evaluate_one(const FdiRecord& rec, const EvalOptions& opt) {
    EvalRow row;
    row.id = rec.id;
    row.folding = rec.folding;
    row.scene = rec.scene;
    try {
        Image input = load_image(rec.image_path);
        if (opt.crop_c) input = crop_c(input, rec.vertices);

        Image output;
        if (opt.no_algo) {
            output = input;
            row.status = "noalgo";
        } else {
            UnfoldResult r = unfold(input, opt.params);
            output = std::move(r.output);
            row.status = r.rectified() ? "rectified" : "trivial";
        }

        const Image reference = to_grayscale(load_image(rec.reference_tiff_path));
        Image out_gray = to_grayscale(output);
        if (out_gray.width != reference.width || out_gray.height != reference.height)
            out_gray = resize_bilinear(out_gray, reference.width, reference.height);
        row.ss = 1.0 - ms_ssim(out_gray, reference);

        if (opt.ocr) {
            const std::string ref_text = ocr_text(reference, opt.languages, *opt.ocr);
            const std::string out_text = ocr_text(out_gray, opt.languages, *opt.ocr);
            row.ed = levenshtein(ref_text, out_text);
            const std::size_t ref_len = decode_utf8(ref_text).size();
            if (ref_len > 0) row.cer = static_cast<double>(*row.ed) / ref_len;
        }
    } catch (const std::exception& e) {
        row.status = std::string("error: ") + e.what();
    }
    return row;
}

}  // namespace

std::string EvalReport::csv() const {
    std::ostringstream out;
    out << "id,folding,scene,ss,ed,cer,status\n";
    for (const EvalRow& r : rows) {
        out << r.id << ',' << r.folding << ',' << r.scene << ',';
        if (r.ss) out << fmt(*r.ss);
        out << ',';
        if (r.ed) out << *r.ed;
        out << ',';
        if (r.cer) out << fmt(*r.cer);
        out << ',' << r.status << '\n';
    }
    return out.str();
}

std::string EvalReport::table() const {
    std::ostringstream out;
    out << "folding  scene  count    SS      ED      CER\n";
    for (const EvalAggregate& a : aggregates) {
        char line[160];
        std::snprintf(line, sizeof(line), "%-8s %-6s %5d  %6s  %7s  %6s\n", a.folding.c_str(),
                      a.scene.c_str(), a.count,
                      a.mean_ss ? fmt(*a.mean_ss).substr(0, 6).c_str() : "-",
                      a.mean_ed ? std::to_string(static_cast<long long>(*a.mean_ed)).c_str()
                                : "-",
                      a.mean_cer ? fmt(*a.mean_cer).substr(0, 6).c_str() : "-");
        out << line;
    }
    if (failures > 0) out << "failures: " << failures << "\n";
    return out.str();
}

EvalReport evaluate(const std::vector<FdiRecord>& records, const EvalOptions& opt) {
    EvalReport report;
    report.rows.resize(records.size());

    const int threads = std::max(1, opt.threads);
    if (threads == 1) {
        for (std::size_t i = 0; i < records.size(); ++i)
            report.rows[i] = evaluate_one(records[i], opt);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < records.size();
                     i = next.fetch_add(1))
                    report.rows[i] = evaluate_one(records[i], opt);
            });
        }
        for (std::thread& t : pool) t.join();
    }

    // Deterministic ordered reduction into per-(folding, scene) means.
    std::map<std::pair<std::string, std::string>, EvalAggregate> agg;
    for (const EvalRow& r : report.rows) {
        if (r.status.rfind("error", 0) == 0) {
            ++report.failures;
            continue;
        }
        EvalAggregate& a = agg[{r.folding, r.scene}];
        a.folding = r.folding;
        a.scene = r.scene;
        ++a.count;
    }
    for (auto& [key, a] : agg) {
        double ss = 0, ed = 0, cer = 0;
        int n_ss = 0, n_ed = 0, n_cer = 0;
        for (const EvalRow& r : report.rows) {
            if (r.folding != a.folding || r.scene != a.scene) continue;
            if (r.status.rfind("error", 0) == 0) continue;
            if (r.ss) ss += *r.ss, ++n_ss;
            if (r.ed) ed += static_cast<double>(*r.ed), ++n_ed;
            if (r.cer) cer += *r.cer, ++n_cer;
        }
        if (n_ss) a.mean_ss = ss / n_ss;
        if (n_ed) a.mean_ed = ed / n_ed;
        if (n_cer) a.mean_cer = cer / n_cer;
        report.aggregates.push_back(a);
    }
    return report;
}

}  // namespace unfolder

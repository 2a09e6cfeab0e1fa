#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "scrawl/critic.hpp"
#include "scrawl/error.hpp"
#include "scrawl/textutil.hpp"

namespace scrawl {

struct AnnotateOptions {
    std::string annotator = "anonymous";
    // Injectable for tests; defaults to wall-clock UTC seconds.
    std::function<int64_t()> clock = [] {
        return static_cast<int64_t>(std::chrono::duration_cast<std::chrono::seconds>(
                                        std::chrono::system_clock::now().time_since_epoch())
                                        .count());
    };
};

struct AnnotateResult {
    size_t labeled = 0;
    size_t skipped = 0;
    size_t remaining = 0; // unseen after quit/EOF
};

// Queue file: JSONL, one object per line, each with a "text" field. Extra
// fields (chunk id, origin, ...) are ignored.
inline std::vector<std::string> load_annotation_queue(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorCode::FileMissing, "cannot open queue file " + path.string());
    std::vector<std::string> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (trim_view(line).empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::ParseError,
                        path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
        if (!j.is_object() || !j.contains("text") || !j["text"].is_string()) {
            throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(lineno) +
                                                   ": queue line has no \"text\" field");
        }
        out.push_back(j["text"].get<std::string>());
    }
    return out;
}

// Interactive good/bad/skip loop. Labels append to `labels_path` one JSON
// line per decision, flushed immediately so a killed session loses nothing.
// Texts already present in the labels file are not asked about again, which
// makes reruns resume where the last one stopped.
inline AnnotateResult annotate(const std::filesystem::path& queue_path,
                               const std::filesystem::path& labels_path, std::istream& in,
                               std::ostream& out, const AnnotateOptions& opt = {}) {
    const std::vector<std::string> queue = load_annotation_queue(queue_path);

    std::unordered_set<std::string> done;
    if (std::filesystem::exists(labels_path)) {
        for (const LabeledChunk& lc : load_labels(labels_path)) done.insert(lc.text);
    }

    std::ofstream labels(labels_path, std::ios::binary | std::ios::app);
    if (!labels) {
        throw Error(ErrorCode::WriteFailure, "cannot open labels file " + labels_path.string());
    }

    std::vector<const std::string*> pending;
    for (const std::string& text : queue) {
        if (!done.count(text)) pending.push_back(&text);
    }

    AnnotateResult result;
    for (size_t i = 0; i < pending.size(); ++i) {
        const std::string& text = *pending[i];
        out << "[" << (i + 1) << "/" << pending.size() << "] " << text << "\n";
        out << "  (g)ood / (b)ad / (s)kip / (q)uit? " << std::flush;

        std::string answer;
        bool decided = false;
        while (!decided) {
            if (!std::getline(in, answer)) {
                out << "\n";
                result.remaining = pending.size() - i;
                return result;
            }
            const std::string a = to_lower(trim(answer));
            if (a == "g" || a == "good") {
                labels << label_record_line({text, Label::Good, opt.annotator, opt.clock()}) << "\n";
                labels.flush();
                ++result.labeled;
                decided = true;
            } else if (a == "b" || a == "bad") {
                labels << label_record_line({text, Label::Bad, opt.annotator, opt.clock()}) << "\n";
                labels.flush();
                ++result.labeled;
                decided = true;
            } else if (a == "s" || a == "skip") {
                ++result.skipped;
                decided = true;
            } else if (a == "q" || a == "quit") {
                result.remaining = pending.size() - i;
                return result;
            } else {
                out << "  please answer g, b, s or q: " << std::flush;
            }
        }
        if (!labels) {
            throw Error(ErrorCode::WriteFailure, "short write to " + labels_path.string());
        }
    }
    return result;
}

} // namespace scrawl

#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "scrawl/error.hpp"
#include "scrawl/textutil.hpp"

namespace scrawl {

enum class SourceTag { Crypto, CyberpunkFiction, FringeProse, Transcripts, Quotes, Other };
enum class LengthLabel { Quote, Long };
enum class ThemeLabel { Cyber, Other };

struct Condition {
    LengthLabel length = LengthLabel::Quote;
    ThemeLabel theme = ThemeLabel::Other;

    bool operator==(const Condition&) const = default;
    bool operator<(const Condition& o) const {
        if (length != o.length) return static_cast<int>(length) < static_cast<int>(o.length);
        return static_cast<int>(theme) < static_cast<int>(o.theme);
    }
};

inline const char* to_string(LengthLabel l) { return l == LengthLabel::Quote ? "QUOTE" : "LONG"; }
inline const char* to_string(ThemeLabel t) { return t == ThemeLabel::Cyber ? "CYBER" : "OTHER"; }

inline std::string to_string(const Condition& c) {
    return std::string(to_string(c.length)) + "+" + to_string(c.theme);
}

inline Condition parse_condition(std::string_view s) {
    const auto parts = split(s, '+');
    if (parts.size() != 2) throw Error(ErrorCode::ParseError, "bad condition: " + std::string(s));
    Condition c;
    const std::string a = to_lower(trim(parts[0]));
    const std::string b = to_lower(trim(parts[1]));
    if (a == "quote") c.length = LengthLabel::Quote;
    else if (a == "long") c.length = LengthLabel::Long;
    else throw Error(ErrorCode::ParseError, "bad length label: " + a);
    if (b == "cyber") c.theme = ThemeLabel::Cyber;
    else if (b == "other") c.theme = ThemeLabel::Other;
    else throw Error(ErrorCode::ParseError, "bad theme label: " + b);
    return c;
}

inline const char* to_string(SourceTag t) {
    switch (t) {
        case SourceTag::Crypto: return "crypto";
        case SourceTag::CyberpunkFiction: return "cyberpunk_fiction";
        case SourceTag::FringeProse: return "fringe_prose";
        case SourceTag::Transcripts: return "transcripts";
        case SourceTag::Quotes: return "quotes";
        case SourceTag::Other: return "other";
    }
    return "other";
}

inline SourceTag parse_source_tag(std::string_view s) {
    const std::string v = to_lower(trim(s));
    if (v == "crypto") return SourceTag::Crypto;
    if (v == "cyberpunk_fiction") return SourceTag::CyberpunkFiction;
    if (v == "fringe_prose") return SourceTag::FringeProse;
    if (v == "transcripts") return SourceTag::Transcripts;
    if (v == "quotes") return SourceTag::Quotes;
    if (v == "other") return SourceTag::Other;
    throw Error(ErrorCode::ParseError, "unknown source tag: " + v);
}

struct CorpusEntry {
    std::string text;
    SourceTag source_tag = SourceTag::Other;
    LengthLabel length_label = LengthLabel::Quote;
    ThemeLabel theme_label = ThemeLabel::Other;

    Condition condition() const { return {length_label, theme_label}; }
};

constexpr int kDefaultQuoteThreshold = 280; // chars; aphorism-scale cutoff

// Assigns the two conditioning labels to a raw corpus entry.
// QUOTE/LONG is by trimmed length in code points; CYBER/OTHER follows the
// source tag (crypto, cyberpunk fiction and transcripts count as CYBER).
inline CorpusEntry label_corpus(std::string_view entry_text, SourceTag source_tag,
                                int quote_threshold = kDefaultQuoteThreshold) {
    const std::string_view trimmed = trim_view(entry_text);
    if (trimmed.empty()) throw Error(ErrorCode::EmptyEntry, "entry text is whitespace-only");
    if (quote_threshold <= 0) throw Error(ErrorCode::ParseError, "quote_threshold must be positive");

    CorpusEntry e;
    e.text = std::string(trimmed);
    e.source_tag = source_tag;
    e.length_label = utf8_length(trimmed) <= static_cast<size_t>(quote_threshold)
                         ? LengthLabel::Quote
                         : LengthLabel::Long;
    const bool cyber = source_tag == SourceTag::Crypto ||
                       source_tag == SourceTag::CyberpunkFiction ||
                       source_tag == SourceTag::Transcripts;
    e.theme_label = cyber ? ThemeLabel::Cyber : ThemeLabel::Other;
    return e;
}

namespace detail {

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    if (!f) throw Error(ErrorCode::FileMissing, "cannot open " + p.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace detail

// Manifest: one line per file, `<path>\t<source_tag>`. Relative paths are
// resolved against the manifest's directory. Blank and '#' lines skipped.
inline std::vector<CorpusEntry> load_corpus_manifest(const std::filesystem::path& manifest,
                                                     int quote_threshold = kDefaultQuoteThreshold) {
    std::ifstream f(manifest);
    if (!f) throw Error(ErrorCode::FileMissing, "cannot open manifest " + manifest.string());
    const auto base = manifest.parent_path();
    std::vector<CorpusEntry> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string_view lv = trim_view(line);
        if (lv.empty() || lv.front() == '#') continue;
        const size_t tab = line.find('\t');
        if (tab == std::string::npos) {
            throw Error(ErrorCode::ParseError,
                        manifest.string() + ":" + std::to_string(lineno) + ": expected <path>\\t<source_tag>");
        }
        const std::string rel = trim(line.substr(0, tab));
        const SourceTag tag = parse_source_tag(line.substr(tab + 1));
        std::filesystem::path p(rel);
        if (p.is_relative()) p = base / p;
        out.push_back(label_corpus(detail::read_file(p), tag, quote_threshold));
    }
    return out;
}

// Directory layout: <root>/<source_tag>/*.txt, one entry per file.
inline std::vector<CorpusEntry> load_corpus_dir(const std::filesystem::path& root,
                                                int quote_threshold = kDefaultQuoteThreshold) {
    if (!std::filesystem::is_directory(root)) {
        throw Error(ErrorCode::FileMissing, "not a directory: " + root.string());
    }
    std::vector<std::filesystem::path> files;
    for (const auto& sub : std::filesystem::directory_iterator(root)) {
        if (!sub.is_directory()) continue;
        for (const auto& f : std::filesystem::directory_iterator(sub.path())) {
            if (f.is_regular_file()) files.push_back(f.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<CorpusEntry> out;
    for (const auto& p : files) {
        const SourceTag tag = parse_source_tag(p.parent_path().filename().string());
        out.push_back(label_corpus(detail::read_file(p), tag, quote_threshold));
    }
    return out;
}

// Prepared-corpus format: one JSON object per line with the entry text and
// all labels. This is what `corpus-prep` writes.
inline void write_labeled_jsonl(const std::vector<CorpusEntry>& entries,
                                const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::WriteFailure, "cannot write " + path.string());
    for (const CorpusEntry& e : entries) {
        nlohmann::ordered_json j;
        j["text"] = e.text;
        j["source_tag"] = to_string(e.source_tag);
        j["length_label"] = to_string(e.length_label);
        j["theme_label"] = to_string(e.theme_label);
        f << j.dump() << "\n";
    }
    if (!f) throw Error(ErrorCode::WriteFailure, "short write to " + path.string());
}

inline std::vector<CorpusEntry> load_labeled_jsonl(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorCode::FileMissing, "cannot open " + path.string());
    std::vector<CorpusEntry> out;
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
        CorpusEntry e;
        e.text = j.at("text").get<std::string>();
        e.source_tag = parse_source_tag(j.at("source_tag").get<std::string>());
        const Condition c = parse_condition(j.at("length_label").get<std::string>() + "+" +
                                            j.at("theme_label").get<std::string>());
        e.length_label = c.length;
        e.theme_label = c.theme;
        out.push_back(std::move(e));
    }
    return out;
}

// Loads a corpus from any of the three accepted on-disk forms.
inline std::vector<CorpusEntry> load_corpus_any(const std::filesystem::path& path,
                                                int quote_threshold = kDefaultQuoteThreshold) {
    if (std::filesystem::is_directory(path)) return load_corpus_dir(path, quote_threshold);
    if (path.extension() == ".jsonl") return load_labeled_jsonl(path);
    return load_corpus_manifest(path, quote_threshold);
}

} // namespace scrawl

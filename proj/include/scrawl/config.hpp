#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>

#include "scrawl/chunker.hpp"
#include "scrawl/corpus.hpp"
#include "scrawl/error.hpp"
#include "scrawl/filters.hpp"
#include "scrawl/handwriting.hpp"
#include "scrawl/sentiment.hpp"
#include "scrawl/textutil.hpp"

namespace scrawl {

enum class SourceKind { Markov, File, External };

enum class ScorerFallback { Builtin, Reject, Abort };

// Everything a run needs, parsed from a flat `key = value` file. Relative
// paths are taken relative to the config file's own directory.
struct PipelineConfig {
    SourceKind source = SourceKind::Markov;
    std::string corpus;       // markov: directory, .jsonl, or manifest file
    int order = 2;            // markov context length
    Condition condition{LengthLabel::Quote, ThemeLabel::Cyber};
    size_t segments = 16;     // markov: segments to draw
    size_t max_tokens = 250;  // markov: cap per segment
    std::string input;        // file source: text file replayed line by line
    std::string command;      // external source: command line

    ChunkerConfig chunker;
    FilterConfig filters;
    std::string words;
    std::string verbs;
    std::string auxiliaries;

    std::string model;            // optional critic model
    double threshold = 0.5;       // keep iff p >= threshold
    std::string scorer_command;   // optional external scorer
    int scorer_timeout_ms = 5000;
    ScorerFallback scorer_fallback = ScorerFallback::Reject;

    std::string sentiment;
    std::string font;
    PageConfig page;
    JitterConfig jitter;

    std::string output_dir;
    std::string run_id = "run";
    uint64_t seed = 0;
    bool seed_set = false;
    bool deterministic = true;
};

namespace detail {

inline bool config_bool(const std::string& key, const std::string& value) {
    if (value == "true") return true;
    if (value == "false") return false;
    throw Error(ErrorCode::ConfigError, key + " must be true or false, got '" + value + "'");
}

inline double config_double(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (value.empty() || end != value.c_str() + value.size()) {
        throw Error(ErrorCode::ConfigError, key + " must be a number, got '" + value + "'");
    }
    return v;
}

inline int64_t config_int(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const long long v = std::strtoll(value.c_str(), &end, 10);
    if (value.empty() || end != value.c_str() + value.size()) {
        throw Error(ErrorCode::ConfigError, key + " must be an integer, got '" + value + "'");
    }
    return v;
}

inline uint64_t config_uint(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
    if (value.empty() || value[0] == '-' || end != value.c_str() + value.size()) {
        throw Error(ErrorCode::ConfigError,
                    key + " must be a non-negative integer, got '" + value + "'");
    }
    return v;
}

} // namespace detail

// Parses `key = value` lines. '#' starts a full-line comment; blank lines
// are skipped; a key may appear at most once; any key outside the documented
// set is an error rather than a silent ignore.
inline PipelineConfig parse_pipeline_config(std::istream& in, const std::filesystem::path& base_dir,
                                            const std::string& origin = "config") {
    std::map<std::string, std::string> raw;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view sv = trim_view(line);
        if (sv.empty() || sv.front() == '#') continue;
        const size_t eq = sv.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorCode::ConfigError, origin + ":" + std::to_string(lineno) +
                                                    ": expected key = value");
        }
        const std::string key = std::string(trim_view(sv.substr(0, eq)));
        const std::string value = std::string(trim_view(sv.substr(eq + 1)));
        if (key.empty()) {
            throw Error(ErrorCode::ConfigError,
                        origin + ":" + std::to_string(lineno) + ": empty key");
        }
        if (!raw.emplace(key, value).second) {
            throw Error(ErrorCode::ConfigError,
                        origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
        }
    }

    PipelineConfig cfg;
    auto take = [&raw](const char* key) -> std::optional<std::string> {
        const auto it = raw.find(key);
        if (it == raw.end()) return std::nullopt;
        std::string v = it->second;
        raw.erase(it);
        return v;
    };
    auto resolve = [&base_dir](const std::string& p) -> std::string {
        if (p.empty()) return p;
        const std::filesystem::path path(p);
        return path.is_absolute() ? path.string() : (base_dir / path).lexically_normal().string();
    };

    if (const auto v = take("source")) {
        if (*v == "markov") cfg.source = SourceKind::Markov;
        else if (*v == "file") cfg.source = SourceKind::File;
        else if (*v == "external") cfg.source = SourceKind::External;
        else throw Error(ErrorCode::ConfigError, "source must be markov, file or external");
    }
    if (const auto v = take("corpus")) cfg.corpus = resolve(*v);
    if (const auto v = take("order")) cfg.order = static_cast<int>(detail::config_int("order", *v));
    if (const auto v = take("condition")) {
        try {
            cfg.condition = parse_condition(*v);
        } catch (const Error& e) {
            throw Error(ErrorCode::ConfigError, e.what());
        }
    }
    if (const auto v = take("segments")) {
        cfg.segments = static_cast<size_t>(detail::config_uint("segments", *v));
    }
    if (const auto v = take("max_tokens")) {
        cfg.max_tokens = static_cast<size_t>(detail::config_uint("max_tokens", *v));
    }
    if (const auto v = take("input")) cfg.input = resolve(*v);
    if (const auto v = take("command")) cfg.command = *v;

    if (const auto v = take("min_words")) {
        cfg.chunker.min_words = static_cast<int>(detail::config_uint("min_words", *v));
    }
    if (const auto v = take("max_words")) {
        cfg.chunker.max_words = static_cast<int>(detail::config_uint("max_words", *v));
    }
    if (const auto v = take("max_sentences")) {
        cfg.chunker.max_sentences = static_cast<int>(detail::config_uint("max_sentences", *v));
    }

    if (const auto v = take("words")) cfg.words = resolve(*v);
    if (const auto v = take("verbs")) cfg.verbs = resolve(*v);
    if (const auto v = take("auxiliaries")) cfg.auxiliaries = resolve(*v);
    if (const auto v = take("max_duplicates")) {
        cfg.filters.max_duplicates = static_cast<int>(detail::config_uint("max_duplicates", *v));
    }
    if (const auto v = take("allow_adjacent_with_punct")) {
        cfg.filters.allow_adjacent_with_punct = detail::config_bool("allow_adjacent_with_punct", *v);
    }
    if (const auto v = take("max_punct_ratio")) {
        cfg.filters.max_punct_ratio = detail::config_double("max_punct_ratio", *v);
    }

    if (const auto v = take("model")) cfg.model = resolve(*v);
    if (const auto v = take("threshold")) cfg.threshold = detail::config_double("threshold", *v);
    if (const auto v = take("scorer_command")) cfg.scorer_command = *v;
    if (const auto v = take("scorer_timeout_ms")) {
        cfg.scorer_timeout_ms = static_cast<int>(detail::config_int("scorer_timeout_ms", *v));
    }
    if (const auto v = take("scorer_fallback")) {
        if (*v == "builtin") cfg.scorer_fallback = ScorerFallback::Builtin;
        else if (*v == "reject") cfg.scorer_fallback = ScorerFallback::Reject;
        else if (*v == "abort") cfg.scorer_fallback = ScorerFallback::Abort;
        else throw Error(ErrorCode::ConfigError, "scorer_fallback must be builtin, reject or abort");
    }

    if (const auto v = take("sentiment")) cfg.sentiment = resolve(*v);
    if (const auto v = take("font")) cfg.font = resolve(*v);
    if (const auto v = take("page_width")) cfg.page.width = detail::config_double("page_width", *v);
    if (const auto v = take("page_margin")) {
        cfg.page.margin = detail::config_double("page_margin", *v);
    }
    if (const auto v = take("font_size")) cfg.page.font_size = detail::config_double("font_size", *v);
    if (const auto v = take("line_height")) {
        cfg.page.line_height = detail::config_double("line_height", *v);
    }
    if (const auto v = take("sigma_min")) cfg.jitter.sigma_min = detail::config_double("sigma_min", *v);
    if (const auto v = take("sigma_max")) cfg.jitter.sigma_max = detail::config_double("sigma_max", *v);
    if (const auto v = take("bias_max")) cfg.jitter.bias_max = detail::config_double("bias_max", *v);

    if (const auto v = take("output_dir")) cfg.output_dir = resolve(*v);
    if (const auto v = take("run_id")) cfg.run_id = *v;
    if (const auto v = take("seed")) {
        cfg.seed = detail::config_uint("seed", *v);
        cfg.seed_set = true;
    }
    if (const auto v = take("deterministic")) {
        cfg.deterministic = detail::config_bool("deterministic", *v);
    }

    if (!raw.empty()) {
        std::string keys;
        for (const auto& [k, _] : raw) {
            if (!keys.empty()) keys += ", ";
            keys += k;
        }
        throw Error(ErrorCode::ConfigError, origin + ": unknown key(s): " + keys);
    }
    return cfg;
}

inline PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorCode::ConfigError, "cannot open config file " + path.string());
    return parse_pipeline_config(f, path.has_parent_path() ? path.parent_path() : ".",
                                 path.string());
}

// Structural checks the parser cannot do: required keys per source kind,
// referenced files present, numeric ranges sane.
inline void validate_pipeline_config(const PipelineConfig& cfg) {
    auto require_file = [](const std::string& what, const std::string& path) {
        if (path.empty()) {
            throw Error(ErrorCode::ConfigError, what + " path is required");
        }
        if (!std::filesystem::exists(path)) {
            throw Error(ErrorCode::ConfigError, what + " path does not exist: " + path);
        }
    };

    switch (cfg.source) {
    case SourceKind::Markov:
        require_file("corpus", cfg.corpus);
        if (cfg.order < 1 || cfg.order > 4) {
            throw Error(ErrorCode::ConfigError, "order must be in [1,4]");
        }
        if (cfg.segments == 0) throw Error(ErrorCode::ConfigError, "segments must be positive");
        if (cfg.max_tokens == 0) throw Error(ErrorCode::ConfigError, "max_tokens must be positive");
        break;
    case SourceKind::File:
        require_file("input", cfg.input);
        break;
    case SourceKind::External:
        if (trim_view(cfg.command).empty()) {
            throw Error(ErrorCode::ConfigError, "command is required for an external source");
        }
        break;
    }

    require_file("words", cfg.words);
    require_file("verbs", cfg.verbs);
    require_file("auxiliaries", cfg.auxiliaries);
    require_file("sentiment", cfg.sentiment);
    require_file("font", cfg.font);
    if (!cfg.model.empty()) require_file("model", cfg.model);

    if (cfg.chunker.min_words == 0 || cfg.chunker.max_words < cfg.chunker.min_words ||
        cfg.chunker.max_sentences == 0) {
        throw Error(ErrorCode::ConfigError, "chunker bounds must satisfy 0 < min_words <= max_words"
                                            " and max_sentences >= 1");
    }
    if (cfg.filters.max_punct_ratio <= 0.0 || cfg.filters.max_punct_ratio > 1.0) {
        throw Error(ErrorCode::ConfigError, "max_punct_ratio must be in (0,1]");
    }
    if (cfg.scorer_timeout_ms <= 0) {
        throw Error(ErrorCode::ConfigError, "scorer_timeout_ms must be positive");
    }
    if (!cfg.scorer_command.empty() && cfg.scorer_fallback == ScorerFallback::Builtin &&
        cfg.model.empty()) {
        throw Error(ErrorCode::ConfigError, "scorer_fallback = builtin requires a model path");
    }
    if (cfg.page.width <= 2 * cfg.page.margin || cfg.page.font_size <= 0 ||
        cfg.page.line_height <= 0) {
        throw Error(ErrorCode::ConfigError, "page geometry is degenerate");
    }
    if (cfg.jitter.sigma_min < 0 || cfg.jitter.sigma_max < cfg.jitter.sigma_min ||
        cfg.jitter.bias_max < 0) {
        throw Error(ErrorCode::ConfigError, "jitter bounds must satisfy 0 <= sigma_min <= sigma_max"
                                            " and bias_max >= 0");
    }
    if (cfg.output_dir.empty()) {
        throw Error(ErrorCode::ConfigError, "output_dir is required");
    }
    if (cfg.run_id.empty() || cfg.run_id.find('/') != std::string::npos) {
        throw Error(ErrorCode::ConfigError, "run_id must be a non-empty path-free name");
    }
    if (cfg.deterministic && !cfg.seed_set) {
        throw Error(ErrorCode::ConfigError, "seed is required when deterministic = true");
    }
}

} // namespace scrawl

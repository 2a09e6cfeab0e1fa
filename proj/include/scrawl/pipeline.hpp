#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <thread>

#include <json.hpp>

#include "scrawl/chunker.hpp"
#include "scrawl/config.hpp"
#include "scrawl/critic.hpp"
#include "scrawl/error.hpp"
#include "scrawl/filters.hpp"
#include "scrawl/handwriting.hpp"
#include "scrawl/lexicon.hpp"
#include "scrawl/queue.hpp"
#include "scrawl/rng.hpp"
#include "scrawl/scorer_client.hpp"
#include "scrawl/sentiment.hpp"
#include "scrawl/stream.hpp"
#include "scrawl/stroke_font.hpp"

namespace scrawl {

struct RunResult {
    size_t chunks = 0;
    size_t accepted = 0;
    std::map<std::string, size_t> rejected_by_rule;
    std::filesystem::path run_dir;
    std::filesystem::path records_path;
};

namespace detail {

// Seed-stream separation: the source and the per-chunk jitter draw from
// unrelated subsequences of the run seed.
constexpr uint64_t kSourceSalt = 0x736f75726365ULL; // "source"
constexpr uint64_t kJitterSalt = 0x6a697474657200ULL; // "jitter"

inline std::unique_ptr<TextStream> open_source(const PipelineConfig& cfg, uint64_t seed) {
    switch (cfg.source) {
    case SourceKind::Markov: {
        const std::vector<CorpusEntry> entries = load_corpus_any(cfg.corpus);
        MarkovModel model = train_markov(entries, cfg.order);
        return std::make_unique<MarkovStream>(std::move(model), cfg.condition,
                                              static_cast<int>(cfg.segments),
                                              static_cast<int>(cfg.max_tokens),
                                              mix_seed(seed, kSourceSalt));
    }
    case SourceKind::File:
        return std::make_unique<FileStream>(cfg.input, cfg.condition);
    case SourceKind::External:
        return std::make_unique<ExternalStream>(cfg.command, cfg.condition);
    }
    throw Error(ErrorCode::ConfigError, "unreachable source kind");
}

// Per-run state shared by the chunk-processing loop.
struct RunContext {
    const PipelineConfig& cfg;
    Lexicon lexicon;
    SentimentLexicon sentiment;
    StrokeFont font;
    std::optional<CriticModel> model;
    std::unique_ptr<ScorerClient> scorer;
    bool scorer_dead = false;
    uint64_t jitter_base = 0;
    std::ofstream records;
    std::filesystem::path run_dir;
    RunResult result;
};

inline void write_record(RunContext& ctx, const nlohmann::ordered_json& rec) {
    ctx.records << rec.dump() << "\n";
    ctx.records.flush();
    if (!ctx.records) {
        throw Error(ErrorCode::OutputIOFailure,
                    "cannot append to " + ctx.result.records_path.string());
    }
}

inline void reject(RunContext& ctx, nlohmann::ordered_json& rec, const std::string& rule) {
    rec["outcome"] = "rejected";
    rec["rejected_by"] = rule;
    ++ctx.result.rejected_by_rule[rule];
    write_record(ctx, rec);
}

inline void process_chunk(RunContext& ctx, const Chunk& chunk) {
    ++ctx.result.chunks;
    nlohmann::ordered_json rec;
    rec["chunk_id"] = chunk.id;
    rec["text"] = chunk.text;
    rec["origin"] = to_string(chunk.origin);
    rec["condition"] = to_string(chunk.condition);
    rec["word_count"] = chunk.word_count();

    const FilterVerdict verdict = apply_all(chunk, ctx.lexicon, ctx.cfg.filters);
    nlohmann::ordered_json heur;
    heur["pass"] = verdict.pass;
    if (!verdict.pass) {
        heur["rule"] = to_string(*verdict.rule);
        heur["detail"] = verdict.detail;
    }
    rec["heuristics"] = std::move(heur);
    if (!verdict.pass) {
        reject(ctx, rec, to_string(*verdict.rule));
        return;
    }

    // Critic stage: external scorer when configured, else the bundled model,
    // else a neutral 0.5 that a default threshold lets through.
    double p = 0.5;
    nlohmann::ordered_json critic;
    critic["source"] = "none";
    if (ctx.scorer && !ctx.scorer_dead) {
        try {
            p = ctx.scorer->score(chunk.text);
            critic["source"] = "external";
        } catch (const Error& e) {
            if (e.code() == ErrorCode::ScorerFailure) ctx.scorer_dead = true;
            switch (ctx.cfg.scorer_fallback) {
            case ScorerFallback::Abort:
                throw;
            case ScorerFallback::Reject:
                critic["source"] = "external";
                critic["error"] = e.what();
                rec["critic"] = std::move(critic);
                reject(ctx, rec, "ScorerFailure");
                return;
            case ScorerFallback::Builtin:
                p = score(*ctx.model, chunk.text).probability;
                critic["source"] = "builtin";
                critic["fallback_reason"] = e.what();
                break;
            }
        }
    } else if (ctx.scorer && ctx.cfg.scorer_fallback == ScorerFallback::Reject) {
        // the scorer died earlier in the run and stays down; without a
        // builtin to fall back on its chunks keep rejecting
        critic["source"] = "external";
        critic["error"] = "scorer unavailable after an earlier failure";
        rec["critic"] = std::move(critic);
        reject(ctx, rec, "ScorerFailure");
        return;
    } else if (ctx.model) {
        p = score(*ctx.model, chunk.text).probability;
        critic["source"] = "builtin";
    }
    critic["probability"] = p;
    const bool keep = p >= ctx.cfg.threshold;
    critic["pass"] = keep;
    rec["critic"] = std::move(critic);
    if (!keep) {
        reject(ctx, rec, "Critic");
        return;
    }

    const SentimentScore senti = analyze_sentiment(chunk.text, ctx.sentiment);
    rec["sentiment"] = {{"polarity", senti.polarity},
                        {"strength", senti.strength},
                        {"matched", senti.matched}};

    const uint64_t chunk_seed = mix_seed(ctx.jitter_base, chunk.id);
    const std::string svg = handwrite_svg(chunk.text, ctx.font, senti.strength, chunk_seed,
                                          ctx.cfg.page, ctx.cfg.jitter);
    const std::string svg_name = std::to_string(chunk.id) + ".svg";
    const std::filesystem::path svg_path = ctx.run_dir / svg_name;
    {
        std::ofstream out(svg_path, std::ios::binary | std::ios::trunc);
        out << svg;
        if (!out) {
            throw Error(ErrorCode::OutputIOFailure, "cannot write " + svg_path.string());
        }
    }
    rec["svg"] = ctx.cfg.run_id + "/" + svg_name;
    rec["outcome"] = "accepted";
    ++ctx.result.accepted;
    write_record(ctx, rec);
}

inline void write_summary(const RunContext& ctx, uint64_t seed, double strength_sum) {
    nlohmann::ordered_json s;
    s["run_id"] = ctx.cfg.run_id;
    s["seed"] = seed;
    s["deterministic"] = ctx.cfg.deterministic;
    s["chunks"] = ctx.result.chunks;
    s["accepted"] = ctx.result.accepted;
    nlohmann::ordered_json rej = nlohmann::ordered_json::object();
    for (const auto& [rule, n] : ctx.result.rejected_by_rule) rej[rule] = n;
    s["rejected_by_rule"] = std::move(rej);
    s["acceptance_rate"] = ctx.result.chunks == 0
                               ? 0.0
                               : static_cast<double>(ctx.result.accepted) /
                                     static_cast<double>(ctx.result.chunks);
    s["mean_sentiment_strength"] =
        ctx.result.accepted == 0 ? 0.0 : strength_sum / static_cast<double>(ctx.result.accepted);
    const std::filesystem::path path = ctx.run_dir / "summary.json";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << s.dump(2) << "\n";
    if (!out) throw Error(ErrorCode::OutputIOFailure, "cannot write " + path.string());
}

} // namespace detail

// Drives source → chunker → filters → critic → sentiment → renderer.
// Writes <output_dir>/<run_id>/records.jsonl (one line per chunk, flushed
// as produced), one SVG per accepted chunk, and summary.json at the end.
// In deterministic mode everything runs on the calling thread; otherwise
// generation+chunking runs on a producer thread feeding a bounded queue.
inline RunResult run(const PipelineConfig& cfg) {
    validate_pipeline_config(cfg);

    uint64_t seed = cfg.seed;
    if (!cfg.seed_set) {
        std::random_device rd;
        seed = (static_cast<uint64_t>(rd()) << 32) ^ rd();
    }

    detail::RunContext ctx{cfg,
                           Lexicon::load(cfg.words, cfg.verbs, cfg.auxiliaries),
                           SentimentLexicon::load(cfg.sentiment),
                           StrokeFont::load(cfg.font),
                           std::nullopt,
                           nullptr,
                           false,
                           mix_seed(seed, detail::kJitterSalt),
                           {},
                           {},
                           {}};
    if (!cfg.model.empty()) ctx.model = load_model(cfg.model);
    if (!cfg.scorer_command.empty()) {
        ctx.scorer = std::make_unique<ScorerClient>(cfg.scorer_command, cfg.scorer_timeout_ms);
    }

    ctx.run_dir = std::filesystem::path(cfg.output_dir) / cfg.run_id;
    std::error_code ec;
    std::filesystem::create_directories(ctx.run_dir, ec);
    if (ec) {
        throw Error(ErrorCode::OutputIOFailure,
                    "cannot create " + ctx.run_dir.string() + ": " + ec.message());
    }
    ctx.result.run_dir = ctx.run_dir;
    ctx.result.records_path = ctx.run_dir / "records.jsonl";
    ctx.records.open(ctx.result.records_path, std::ios::binary | std::ios::trunc);
    if (!ctx.records) {
        throw Error(ErrorCode::OutputIOFailure,
                    "cannot open " + ctx.result.records_path.string());
    }

    double strength_sum = 0.0;
    auto process = [&](const Chunk& chunk) {
        const size_t before = ctx.result.accepted;
        detail::process_chunk(ctx, chunk);
        if (ctx.result.accepted > before) {
            // recover the strength this chunk contributed for the summary
            const SentimentScore s = analyze_sentiment(chunk.text, ctx.sentiment);
            strength_sum += s.strength;
        }
    };

    std::unique_ptr<TextStream> source = detail::open_source(cfg, seed);
    if (cfg.deterministic) {
        Chunker chunker(cfg.chunker);
        while (auto segment = source->next()) {
            for (Chunk& c : chunker.feed(*segment)) process(c);
        }
    } else {
        BoundedQueue<Chunk> queue(64);
        std::thread producer([&] {
            try {
                Chunker chunker(cfg.chunker);
                while (auto segment = source->next()) {
                    for (Chunk& c : chunker.feed(*segment)) queue.push(std::move(c));
                }
                queue.close();
            } catch (...) {
                queue.fail(std::current_exception());
            }
        });
        try {
            while (auto chunk = queue.pop()) process(*chunk);
        } catch (...) {
            queue.close();
            producer.join();
            throw;
        }
        producer.join();
    }

    if (ctx.scorer && !ctx.scorer_dead) ctx.scorer->shutdown();
    detail::write_summary(ctx, seed, strength_sum);
    return ctx.result;
}

// --- report ---

struct RunReport {
    size_t total = 0;
    size_t accepted = 0;
    std::map<std::string, size_t> rejected_by_rule;
    double acceptance_rate = 0.0;
    double mean_sentiment_strength = 0.0; // over records that carry sentiment
};

inline RunReport report(const std::filesystem::path& records_path) {
    std::ifstream f(records_path);
    if (!f) {
        throw Error(ErrorCode::FileMissing, "cannot open records " + records_path.string());
    }
    RunReport rep;
    double strength_sum = 0.0;
    size_t strength_n = 0;
    std::string line;
    size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (trim_view(line).empty()) continue;
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception&) {
            throw Error(ErrorCode::CorruptRecords,
                        records_path.string() + ": malformed record at line " +
                            std::to_string(lineno));
        }
        if (!rec.is_object() || !rec.contains("outcome") || !rec["outcome"].is_string()) {
            throw Error(ErrorCode::CorruptRecords,
                        records_path.string() + ": record without outcome at line " +
                            std::to_string(lineno));
        }
        ++rep.total;
        const std::string outcome = rec["outcome"].get<std::string>();
        if (outcome == "accepted") {
            ++rep.accepted;
        } else if (outcome == "rejected" && rec.contains("rejected_by") &&
                   rec["rejected_by"].is_string()) {
            ++rep.rejected_by_rule[rec["rejected_by"].get<std::string>()];
        } else {
            throw Error(ErrorCode::CorruptRecords,
                        records_path.string() + ": unintelligible outcome at line " +
                            std::to_string(lineno));
        }
        if (rec.contains("sentiment") && rec["sentiment"].is_object() &&
            rec["sentiment"].contains("strength")) {
            strength_sum += rec["sentiment"]["strength"].get<double>();
            ++strength_n;
        }
    }
    if (rep.total > 0) {
        rep.acceptance_rate = static_cast<double>(rep.accepted) / static_cast<double>(rep.total);
    }
    if (strength_n > 0) rep.mean_sentiment_strength = strength_sum / static_cast<double>(strength_n);
    return rep;
}

inline std::string format_report(const RunReport& rep) {
    std::string out;
    char buf[128];
    std::snprintf(buf, sizeof buf, "records   %zu\n", rep.total);
    out += buf;
    std::snprintf(buf, sizeof buf, "accepted  %zu (%.1f%%)\n", rep.accepted,
                  rep.acceptance_rate * 100.0);
    out += buf;
    size_t rejected = 0;
    for (const auto& [_, n] : rep.rejected_by_rule) rejected += n;
    std::snprintf(buf, sizeof buf, "rejected  %zu\n", rejected);
    out += buf;
    for (const auto& [rule, n] : rep.rejected_by_rule) {
        std::snprintf(buf, sizeof buf, "  %-14s %zu\n", rule.c_str(), n);
        out += buf;
    }
    std::snprintf(buf, sizeof buf, "mean sentiment strength  %.4f\n", rep.mean_sentiment_strength);
    out += buf;
    return out;
}

} // namespace scrawl

#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "scrawl/corpus.hpp"
#include "scrawl/error.hpp"
#include "scrawl/rng.hpp"
#include "scrawl/tokenizer.hpp"

namespace scrawl {

// Reserved end-of-text marker placed between corpus entries of the same
// condition during training. Byte 0x1E can never come out of the tokenizer,
// so it cannot collide with a real token.
inline const std::string kEndOfText = "\x1e";

// Context keys are the normalized tokens joined with 0x1F.
inline std::string make_context_key(const std::vector<std::string>& ctx) {
    std::string key;
    for (size_t i = 0; i < ctx.size(); ++i) {
        if (i) key.push_back('\x1f');
        key += ctx[i];
    }
    return key;
}

struct MarkovModel {
    // count tables: condition -> context key -> successor -> count
    using SuccessorTable = std::map<std::string, uint32_t>;
    using ContextMap = std::map<std::string, SuccessorTable>;

    int order = 1;
    std::map<Condition, ContextMap> transitions;
    std::set<std::string> vocabulary;
    // sentence-start contexts observed at entry heads, first-seen order
    std::map<Condition, std::vector<std::vector<std::string>>> seed_contexts;
    uint64_t seed = 0; // reproducibility metadata only; training is count-based

    bool has_condition(const Condition& c) const {
        auto it = seed_contexts.find(c);
        return it != seed_contexts.end() && !it->second.empty();
    }
};

namespace detail {

inline std::vector<std::string> entry_tokens(const CorpusEntry& e) {
    std::vector<std::string> out;
    for (const Token& t : tokenize(e.text)) out.push_back(t.normalized);
    return out;
}

} // namespace detail

// Builds per-condition transition counts of the given order. The model is a
// pure function of (corpus, order); `seed` is stored as metadata only.
inline MarkovModel train_markov(const std::vector<CorpusEntry>& corpus, int order,
                                uint64_t seed = 0) {
    if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "no corpus entries");
    if (order < 1 || order > 4) throw Error(ErrorCode::ParseError, "order must be in [1,4]");

    MarkovModel model;
    model.order = order;
    model.seed = seed;

    // token streams per condition, entries separated by the end-of-text marker
    std::map<Condition, std::vector<std::string>> streams;
    for (const CorpusEntry& e : corpus) {
        const std::vector<std::string> toks = detail::entry_tokens(e);
        if (toks.size() < static_cast<size_t>(order)) {
            throw Error(ErrorCode::OrderTooLarge,
                        "order " + std::to_string(order) + " exceeds an entry of " +
                            std::to_string(toks.size()) + " token(s)");
        }
        for (const std::string& t : toks) model.vocabulary.insert(t);

        std::vector<std::string> head(toks.begin(), toks.begin() + order);
        auto& seeds = model.seed_contexts[e.condition()];
        if (std::find(seeds.begin(), seeds.end(), head) == seeds.end()) {
            seeds.push_back(std::move(head));
        }

        auto& stream = streams[e.condition()];
        if (!stream.empty()) stream.push_back(kEndOfText);
        stream.insert(stream.end(), toks.begin(), toks.end());
    }

    for (const auto& [cond, stream] : streams) {
        auto& ctxmap = model.transitions[cond];
        for (size_t i = 0; i + order < stream.size(); ++i) {
            std::vector<std::string> ctx(stream.begin() + i, stream.begin() + i + order);
            ctxmap[make_context_key(ctx)][stream[i + order]] += 1;
        }
    }
    return model;
}

// Draws one text segment under the given condition. The seed context itself
// is not emitted; generation walks weighted successors until the end-of-text
// marker, a dead end, or max_tokens. Deterministic per (model, condition,
// max_tokens, seed).
inline std::vector<std::string> sample_tokens(const MarkovModel& model, const Condition& condition,
                                              int max_tokens, uint64_t seed) {
    if (max_tokens < 1) throw Error(ErrorCode::ParseError, "max_tokens must be >= 1");
    auto seeds_it = model.seed_contexts.find(condition);
    if (seeds_it == model.seed_contexts.end() || seeds_it->second.empty()) {
        throw Error(ErrorCode::UnknownCondition,
                    "no seed contexts for condition " + to_string(condition));
    }
    const auto trans_it = model.transitions.find(condition);

    Rng rng(seed);
    std::deque<std::string> ctx;
    {
        const auto& seeds = seeds_it->second;
        const auto& start = seeds[rng.below(seeds.size())];
        ctx.assign(start.begin(), start.end());
    }

    std::vector<std::string> out;
    while (static_cast<int>(out.size()) < max_tokens) {
        if (trans_it == model.transitions.end()) break;
        const std::vector<std::string> key_vec(ctx.begin(), ctx.end());
        auto tbl_it = trans_it->second.find(make_context_key(key_vec));
        if (tbl_it == trans_it->second.end() || tbl_it->second.empty()) break;

        uint64_t total = 0;
        for (const auto& [tok, count] : tbl_it->second) total += count;
        uint64_t pick = rng.below(total);
        const std::string* chosen = nullptr;
        for (const auto& [tok, count] : tbl_it->second) {
            if (pick < count) {
                chosen = &tok;
                break;
            }
            pick -= count;
        }
        if (!chosen || *chosen == kEndOfText) break;
        out.push_back(*chosen);
        ctx.pop_front();
        ctx.push_back(*chosen);
    }
    return out;
}

// Joins generated tokens into display text: no space before closing
// punctuation, a space everywhere else.
inline std::string join_tokens(const std::vector<std::string>& tokens) {
    auto attaches = [](const std::string& t) {
        if (t == "," || t == ";" || t == ":" || t == "!" || t == "?" || t == "…") return true;
        if (!t.empty() && t.find_first_not_of('.') == std::string::npos) return true;
        return false;
    };
    std::string out;
    for (size_t i = 0; i < tokens.size(); ++i) {
        if (i > 0 && !attaches(tokens[i])) out.push_back(' ');
        out += tokens[i];
    }
    return out;
}

inline std::string sample(const MarkovModel& model, const Condition& condition, int max_tokens,
                          uint64_t seed) {
    return join_tokens(sample_tokens(model, condition, max_tokens, seed));
}

} // namespace scrawl

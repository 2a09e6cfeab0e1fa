#pragma once

#include <cstdio>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "scrawl/chunker.hpp"
#include "scrawl/lexicon.hpp"
#include "scrawl/tokenizer.hpp"

namespace scrawl {

enum class FilterRule { UnknownWord, VerbPair, Duplicates, Punctuation };

inline const char* to_string(FilterRule r) {
    switch (r) {
        case FilterRule::UnknownWord: return "UnknownWord";
        case FilterRule::VerbPair: return "VerbPair";
        case FilterRule::Duplicates: return "Duplicates";
        case FilterRule::Punctuation: return "Punctuation";
    }
    return "UnknownWord";
}

struct FilterVerdict {
    bool pass = true;
    std::optional<FilterRule> rule; // set iff rejected
    std::string detail;             // offending token(s) or measured ratio

    static FilterVerdict passed() { return {}; }
    static FilterVerdict rejected(FilterRule r, std::string detail) {
        return {false, r, std::move(detail)};
    }
};

struct FilterConfig {
    int max_duplicates = 3;               // max occurrences of one word per chunk
    bool allow_adjacent_with_punct = true; // "x, x" tolerated, "x x" never
    double max_punct_ratio = 0.3;
};

namespace detail {

// A word counts as known if it is in the lexicon directly, or if its
// apostrophe-split parts all are (i'm -> i + 'm), or, for hyphenated forms,
// every hyphen part passes one of the first two checks.
inline bool word_is_known(const Lexicon& lex, const std::string& normalized);

inline bool plain_or_apostrophe_known(const Lexicon& lex, const std::string& w) {
    if (lex.is_word(w)) return true;
    const size_t apo = w.find('\'');
    if (apo == std::string::npos || apo == 0) return false;
    // split keeping the apostrophe on the suffix: i'm -> "i" + "'m"
    size_t start = 0;
    std::vector<std::string> parts;
    for (size_t i = 1; i < w.size(); ++i) {
        if (w[i] == '\'') {
            parts.push_back(w.substr(start, i - start));
            start = i;
        }
    }
    parts.push_back(w.substr(start));
    if (parts.size() < 2) return false;
    for (const std::string& p : parts) {
        if (p.empty() || !lex.is_word(p)) return false;
    }
    return true;
}

inline bool word_is_known(const Lexicon& lex, const std::string& normalized) {
    if (plain_or_apostrophe_known(lex, normalized)) return true;
    if (normalized.find('-') == std::string::npos) return false;
    size_t start = 0;
    while (start <= normalized.size()) {
        size_t end = normalized.find('-', start);
        if (end == std::string::npos) end = normalized.size();
        const std::string part = normalized.substr(start, end - start);
        if (part.empty() || !plain_or_apostrophe_known(lex, part)) return false;
        if (end == normalized.size()) break;
        start = end + 1;
    }
    return true;
}

} // namespace detail

// Rule 1: reject chunks that invent words. Numbers and punctuation are
// exempt; the first unknown word is reported.
inline FilterVerdict check_lexicon(const Chunk& chunk, const Lexicon& lex) {
    for (const Token& t : chunk.tokens) {
        if (t.kind != TokenKind::Word) continue;
        if (!detail::word_is_known(lex, t.normalized)) {
            return FilterVerdict::rejected(FilterRule::UnknownWord, t.normalized);
        }
    }
    return FilterVerdict::passed();
}

// Rule 2: reject two unconnected verbs in a row. A pair is connected when
// the first verb is an auxiliary/modal or the second is a participle-shaped
// form (-ing / -ed). Only directly consecutive word tokens form a pair.
inline FilterVerdict check_verb_pair(const Chunk& chunk, const Lexicon& lex) {
    auto ends_with = [](const std::string& w, const char* suffix) {
        const size_t n = std::string_view(suffix).size();
        return w.size() >= n && w.compare(w.size() - n, n, suffix) == 0;
    };
    for (size_t i = 0; i + 1 < chunk.tokens.size(); ++i) {
        const Token& a = chunk.tokens[i];
        const Token& b = chunk.tokens[i + 1];
        if (a.kind != TokenKind::Word || b.kind != TokenKind::Word) continue;
        if (!lex.is_verb(a.normalized) || !lex.is_verb(b.normalized)) continue;
        if (lex.is_auxiliary(a.normalized)) continue;
        if (ends_with(b.normalized, "ing") || ends_with(b.normalized, "ed")) continue;
        return FilterVerdict::rejected(FilterRule::VerbPair, a.normalized + " " + b.normalized);
    }
    return FilterVerdict::passed();
}

// Rule 3: reject heavy repetition. A word may occur at most max_total times;
// immediate repetition with no punctuation between is always rejected, and
// repetition across punctuation too when allow_adjacent_with_punct is false.
inline FilterVerdict check_duplicates(const Chunk& chunk, int max_total = 3,
                                      bool allow_adjacent_with_punct = true) {
    std::unordered_map<std::string, int> counts;
    const Token* prev_word = nullptr;
    bool punct_since_prev = false;
    for (const Token& t : chunk.tokens) {
        if (t.kind == TokenKind::Punctuation) {
            punct_since_prev = true;
            continue;
        }
        if (t.kind != TokenKind::Word) {
            prev_word = nullptr;
            continue;
        }
        if (++counts[t.normalized] > max_total) {
            return FilterVerdict::rejected(FilterRule::Duplicates, t.normalized);
        }
        if (prev_word && prev_word->normalized == t.normalized) {
            if (!punct_since_prev || !allow_adjacent_with_punct) {
                return FilterVerdict::rejected(FilterRule::Duplicates, t.normalized);
            }
        }
        prev_word = &t;
        punct_since_prev = false;
    }
    return FilterVerdict::passed();
}

// Rule 4: reject chunks with no punctuation at all, or too high a share of
// punctuation tokens. Detail carries the measured ratio.
inline FilterVerdict check_punctuation(const Chunk& chunk, double max_ratio = 0.3) {
    size_t punct = 0;
    for (const Token& t : chunk.tokens) {
        if (t.kind == TokenKind::Punctuation) ++punct;
    }
    if (punct == 0) return FilterVerdict::rejected(FilterRule::Punctuation, "0");
    const double ratio = static_cast<double>(punct) / static_cast<double>(chunk.tokens.size());
    if (ratio > max_ratio) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.4g", ratio);
        return FilterVerdict::rejected(FilterRule::Punctuation, buf);
    }
    return FilterVerdict::passed();
}

// The ordered gate: lexicon, verb pair, duplicates, punctuation. The first
// rejection wins; pure function of its inputs.
inline FilterVerdict apply_all(const Chunk& chunk, const Lexicon& lex,
                               const FilterConfig& cfg = {}) {
    FilterVerdict v = check_lexicon(chunk, lex);
    if (!v.pass) return v;
    v = check_verb_pair(chunk, lex);
    if (!v.pass) return v;
    v = check_duplicates(chunk, cfg.max_duplicates, cfg.allow_adjacent_with_punct);
    if (!v.pass) return v;
    return check_punctuation(chunk, cfg.max_punct_ratio);
}

} // namespace scrawl

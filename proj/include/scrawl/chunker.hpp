#pragma once

#include <cstdint>
#include <functional>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "scrawl/stream.hpp"
#include "scrawl/tokenizer.hpp"

namespace scrawl {

// The unit that flows through the filters and everything after them.
// `text` is rebuilt from `tokens`, so detokenize(tokens) == text exactly.
struct Chunk {
    uint64_t id = 0;
    std::string text;
    std::vector<Token> tokens;
    StreamOrigin origin = StreamOrigin::File;
    Condition condition;

    size_t word_count() const {
        size_t n = 0;
        for (const Token& t : tokens) {
            if (t.kind == TokenKind::Word) ++n;
        }
        return n;
    }
};

struct ChunkerConfig {
    int min_words = 4;
    int max_words = 120;
    int max_sentences = 4;
};

namespace detail {

// Words whose trailing period does not end a sentence.
inline const std::set<std::string>& abbreviations() {
    static const std::set<std::string> abbr = {
        "mr", "mrs", "ms", "dr", "prof", "st", "vs", "jr", "sr", "no",
    };
    return abbr;
}

} // namespace detail

// Cuts tokenized segments into chunks at sentence boundaries.
//
// A sentence ends at . ! ? or an ellipsis (plus any closing quotes right
// after), except after a known abbreviation. Consecutive sentences of one
// segment are packed greedily into a chunk until max_sentences or max_words
// is hit; a single sentence longer than max_words is hard-cut at max_words.
// Candidates with fewer than min_words word tokens are dropped. Ids count
// emitted chunks only, starting at 0.
class Chunker {
public:
    explicit Chunker(ChunkerConfig cfg, std::ostream* diag = &std::cerr)
        : cfg_(cfg), diag_(diag) {
        if (cfg_.min_words < 1 || cfg_.min_words > cfg_.max_words || cfg_.max_sentences < 1) {
            throw Error(ErrorCode::ConfigError, "bad chunker bounds");
        }
    }

    std::vector<Chunk> feed(const Segment& segment) {
        std::vector<Chunk> out;
        if (!utf8_valid(segment.text)) {
            if (diag_) *diag_ << "chunker: skipping malformed (non-UTF-8) segment\n";
            return out;
        }

        const std::vector<Token> tokens = tokenize(segment.text);
        const std::vector<std::vector<Token>> sentences = split_sentences(tokens);

        std::vector<Token> current;
        int current_sentences = 0;
        size_t current_words = 0;

        auto flush = [&]() {
            if (current.empty()) return;
            emit(current, segment, out);
            current.clear();
            current_sentences = 0;
            current_words = 0;
        };

        for (const std::vector<Token>& sentence : sentences) {
            size_t words = 0;
            for (const Token& t : sentence) {
                if (t.kind == TokenKind::Word) ++words;
            }

            // hard cut: a single sentence over the word cap is split
            if (words > static_cast<size_t>(cfg_.max_words)) {
                flush();
                std::vector<Token> piece;
                size_t piece_words = 0;
                for (const Token& t : sentence) {
                    piece.push_back(t);
                    if (t.kind == TokenKind::Word) ++piece_words;
                    if (piece_words == static_cast<size_t>(cfg_.max_words)) {
                        emit(piece, segment, out);
                        piece.clear();
                        piece_words = 0;
                    }
                }
                if (!piece.empty()) {
                    current = std::move(piece);
                    current_sentences = 1;
                    current_words = piece_words;
                }
                continue;
            }

            if (!current.empty() &&
                (current_sentences >= cfg_.max_sentences ||
                 current_words + words > static_cast<size_t>(cfg_.max_words))) {
                flush();
            }
            current.insert(current.end(), sentence.begin(), sentence.end());
            current_words += words;
            ++current_sentences;
        }
        flush();
        return out;
    }

    uint64_t next_id() const { return next_id_; }

private:
    void emit(std::vector<Token> tokens, const Segment& segment, std::vector<Chunk>& out) {
        size_t words = 0;
        for (const Token& t : tokens) {
            if (t.kind == TokenKind::Word) ++words;
        }
        if (words < static_cast<size_t>(cfg_.min_words)) return; // discarded, no id spent

        // chunk text starts at its first token: drop inherited glue
        tokens.front().leading.clear();

        Chunk c;
        c.id = next_id_++;
        c.tokens = std::move(tokens);
        c.text = detokenize(c.tokens);
        c.origin = segment.origin;
        c.condition = segment.condition;
        out.push_back(std::move(c));
    }

    std::vector<std::vector<Token>> split_sentences(const std::vector<Token>& tokens) const {
        std::vector<std::vector<Token>> sentences;
        std::vector<Token> cur;
        for (size_t i = 0; i < tokens.size(); ++i) {
            cur.push_back(tokens[i]);
            if (!is_sentence_final(tokens[i])) continue;
            if (tokens[i].surface == "." && cur.size() >= 2) {
                const Token& prev = cur[cur.size() - 2];
                if (prev.kind == TokenKind::Word &&
                    detail::abbreviations().count(prev.normalized)) {
                    continue;
                }
            }
            // attach closing quotes to the sentence they end; a quote with
            // whitespace before it opens the next sentence instead
            while (i + 1 < tokens.size() && is_closing_quote(tokens[i + 1]) &&
                   tokens[i + 1].leading.empty()) {
                cur.push_back(tokens[++i]);
            }
            sentences.push_back(std::move(cur));
            cur.clear();
        }
        if (!cur.empty()) sentences.push_back(std::move(cur));
        return sentences;
    }

    ChunkerConfig cfg_;
    std::ostream* diag_;
    uint64_t next_id_ = 0;
};

// Convenience driver: drains a stream through a chunker.
inline void chunk_stream(TextStream& stream, const ChunkerConfig& cfg,
                         const std::function<void(Chunk&&)>& sink) {
    Chunker chunker(cfg);
    while (auto segment = stream.next()) {
        for (Chunk& c : chunker.feed(*segment)) sink(std::move(c));
    }
}

} // namespace scrawl

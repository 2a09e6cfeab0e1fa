#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "scrawl/textutil.hpp"

namespace scrawl {

enum class TokenKind { Word, Punctuation, Number };

// A token plus the exact bytes that preceded it in the source text.
// Keeping `leading` makes detokenization an exact inverse of tokenization:
// whitespace and stray characters survive the round trip byte for byte.
struct Token {
    std::string surface;
    std::string normalized; // lowercased surface for words, surface otherwise
    TokenKind kind = TokenKind::Word;
    std::string leading;
};

struct TokenizedText {
    std::vector<Token> tokens;
    std::string trailing; // bytes after the last token
};

namespace detail {

// Single-mark punctuation recognized as tokens. Everything else that is not
// a letter or digit becomes inter-token glue.
inline bool is_ascii_punct_mark(char c) {
    switch (c) {
        case '.': case ',': case '!': case '?': case ';': case ':':
        case '-': case '(': case ')': case '"': case '\'':
            return true;
        default:
            return false;
    }
}

inline bool is_ascii_letter(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

inline bool is_ascii_digit(char c) {
    return c >= '0' && c <= '9';
}

// UTF-8 sequences treated as punctuation marks: curly quotes, en/em dash,
// ellipsis. Returns the byte length of the match, 0 if none.
inline size_t match_utf8_punct(std::string_view s, size_t i) {
    static const std::string_view marks[] = {
        "‘", "’", "“", "”", "–", "—", "…",
    };
    for (std::string_view m : marks) {
        if (s.compare(i, m.size(), m) == 0) return m.size();
    }
    return 0;
}

inline bool is_apostrophe_at(std::string_view s, size_t i, size_t* len) {
    if (i < s.size() && s[i] == '\'') {
        *len = 1;
        return true;
    }
    if (s.compare(i, 3, "’") == 0) {
        *len = 3;
        return true;
    }
    return false;
}

// Multi-byte sequences other than the punctuation marks above are treated as
// word characters, so accented words stay in one piece.
inline size_t match_letter(std::string_view s, size_t i) {
    if (is_ascii_letter(s[i])) return 1;
    const unsigned char b = static_cast<unsigned char>(s[i]);
    if (b < 0x80) return 0;
    if (match_utf8_punct(s, i) > 0) return 0;
    size_t len = 1;
    if ((b & 0xE0) == 0xC0) len = 2;
    else if ((b & 0xF0) == 0xE0) len = 3;
    else if ((b & 0xF8) == 0xF0) len = 4;
    if (i + len > s.size()) len = 1;
    return len;
}

// Lowercased, with curly apostrophes straightened so lexicon lookups see
// one spelling.
inline std::string normalize_word(std::string_view surface) {
    std::string w = to_lower(surface);
    size_t pos = 0;
    while ((pos = w.find("\xE2\x80\x99", pos)) != std::string::npos) {
        w.replace(pos, 3, "'");
        ++pos;
    }
    return w;
}

} // namespace detail

// Splits text into word / punctuation / number tokens.
//   word:   letters, with apostrophes or hyphens allowed between letters
//   number: a run of ASCII digits
//   punct:  one mark from a fixed set; a run of 2+ dots (or U+2026) is a
//           single ellipsis token
// Anything else (whitespace, symbols outside the set) is preserved in the
// following token's `leading`, or in `trailing` at end of text.
inline TokenizedText tokenize_full(std::string_view text) {
    TokenizedText out;
    std::string glue;
    size_t i = 0;
    const size_t n = text.size();
    while (i < n) {
        const char c = text[i];

        // word
        if (size_t l0 = detail::match_letter(text, i); l0 > 0) {
            size_t j = i + l0;
            while (j < n) {
                if (size_t l = detail::match_letter(text, j); l > 0) {
                    j += l;
                    continue;
                }
                // internal apostrophe or hyphen, only when followed by a letter
                size_t alen = 0;
                if (detail::is_apostrophe_at(text, j, &alen)) {
                    if (j + alen < n && detail::match_letter(text, j + alen) > 0) {
                        j += alen;
                        continue;
                    }
                } else if (text[j] == '-' && j + 1 < n && detail::match_letter(text, j + 1) > 0) {
                    ++j;
                    continue;
                }
                break;
            }
            Token t;
            t.surface = std::string(text.substr(i, j - i));
            t.normalized = detail::normalize_word(t.surface);
            t.kind = TokenKind::Word;
            t.leading = std::move(glue);
            glue.clear();
            out.tokens.push_back(std::move(t));
            i = j;
            continue;
        }

        // number
        if (detail::is_ascii_digit(c)) {
            size_t j = i;
            while (j < n && detail::is_ascii_digit(text[j])) ++j;
            Token t;
            t.surface = std::string(text.substr(i, j - i));
            t.normalized = t.surface;
            t.kind = TokenKind::Number;
            t.leading = std::move(glue);
            glue.clear();
            out.tokens.push_back(std::move(t));
            i = j;
            continue;
        }

        // ellipsis: run of 2+ dots collapses to one token
        if (c == '.' && i + 1 < n && text[i + 1] == '.') {
            size_t j = i;
            while (j < n && text[j] == '.') ++j;
            Token t;
            t.surface = std::string(text.substr(i, j - i));
            t.normalized = t.surface;
            t.kind = TokenKind::Punctuation;
            t.leading = std::move(glue);
            glue.clear();
            out.tokens.push_back(std::move(t));
            i = j;
            continue;
        }

        // single punctuation mark
        if (detail::is_ascii_punct_mark(c)) {
            Token t;
            t.surface = std::string(1, c);
            t.normalized = t.surface;
            t.kind = TokenKind::Punctuation;
            t.leading = std::move(glue);
            glue.clear();
            out.tokens.push_back(std::move(t));
            ++i;
            continue;
        }
        if (size_t plen = detail::match_utf8_punct(text, i); plen > 0) {
            Token t;
            t.surface = std::string(text.substr(i, plen));
            t.normalized = t.surface;
            t.kind = TokenKind::Punctuation;
            t.leading = std::move(glue);
            glue.clear();
            out.tokens.push_back(std::move(t));
            i += plen;
            continue;
        }

        // glue
        glue.push_back(c);
        ++i;
    }
    out.trailing = std::move(glue);
    return out;
}

inline std::vector<Token> tokenize(std::string_view text) {
    return tokenize_full(text).tokens;
}

// Exact inverse of tokenize_full: concatenates leading glue and surfaces.
inline std::string detokenize(const std::vector<Token>& tokens, std::string_view trailing = {}) {
    std::string out;
    for (const Token& t : tokens) {
        out += t.leading;
        out += t.surface;
    }
    out += trailing;
    return out;
}

inline std::string detokenize(const TokenizedText& tt) {
    return detokenize(tt.tokens, tt.trailing);
}

// Sentence-final punctuation: . ! ? and any ellipsis form.
inline bool is_sentence_final(const Token& t) {
    if (t.kind != TokenKind::Punctuation) return false;
    if (t.surface == "." || t.surface == "!" || t.surface == "?" || t.surface == "…") return true;
    if (t.surface.size() >= 2 && t.surface.find_first_not_of('.') == std::string::npos) return true;
    return false;
}

inline bool is_closing_quote(const Token& t) {
    if (t.kind != TokenKind::Punctuation) return false;
    return t.surface == "\"" || t.surface == "'" || t.surface == ")" ||
           t.surface == "’" || t.surface == "”";
}

} // namespace scrawl

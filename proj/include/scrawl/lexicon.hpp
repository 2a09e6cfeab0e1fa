#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <unordered_set>

#include "scrawl/error.hpp"
#include "scrawl/textutil.hpp"

namespace scrawl {

// Word knowledge for the heuristic filters. Loading normalizes the
// containment chain: auxiliaries are added to verbs, verbs to words, so
// auxiliaries ⊆ verbs ⊆ words always holds.
struct Lexicon {
    std::unordered_set<std::string> words;
    std::unordered_set<std::string> verbs;
    std::unordered_set<std::string> auxiliaries;

    bool is_word(const std::string& w) const { return words.count(w) > 0; }
    bool is_verb(const std::string& w) const { return verbs.count(w) > 0; }
    bool is_auxiliary(const std::string& w) const { return auxiliaries.count(w) > 0; }

    void normalize() {
        for (const auto& a : auxiliaries) verbs.insert(a);
        for (const auto& v : verbs) words.insert(v);
    }

    static std::unordered_set<std::string> load_word_file(const std::filesystem::path& path) {
        std::ifstream f(path);
        if (!f) throw Error(ErrorCode::FileMissing, "cannot open lexicon file " + path.string());
        std::unordered_set<std::string> out;
        std::string line;
        while (std::getline(f, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            const std::string w = to_lower(trim(line));
            if (w.empty() || w[0] == '#') continue;
            out.insert(w);
        }
        return out;
    }

    static Lexicon load(const std::filesystem::path& words_path,
                        const std::filesystem::path& verbs_path,
                        const std::filesystem::path& aux_path) {
        Lexicon lex;
        lex.words = load_word_file(words_path);
        lex.verbs = load_word_file(verbs_path);
        lex.auxiliaries = load_word_file(aux_path);
        lex.normalize();
        return lex;
    }
};

} // namespace scrawl

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <unordered_map>

#include "scrawl/error.hpp"
#include "scrawl/textutil.hpp"
#include "scrawl/tokenizer.hpp"

namespace scrawl {

// Word -> valence table, AFINN style: one `word<TAB>valence` per line,
// valences in [-5, 5], '#' comments allowed. Zero-valence entries carry no
// signal and are dropped at load.
class SentimentLexicon {
  public:
    static SentimentLexicon load(const std::filesystem::path& path) {
        std::ifstream f(path);
        if (!f) throw Error(ErrorCode::FileMissing, "cannot open sentiment lexicon " + path.string());
        SentimentLexicon lex;
        std::string line;
        size_t lineno = 0;
        while (std::getline(f, line)) {
            ++lineno;
            const std::string_view sv = trim_view(line);
            if (sv.empty() || sv.front() == '#') continue;
            const size_t tab = sv.find('\t');
            if (tab == std::string_view::npos) {
                throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(lineno) +
                                                       ": expected word<TAB>valence");
            }
            const std::string word = to_lower(trim_view(sv.substr(0, tab)));
            const std::string value_str = std::string(trim_view(sv.substr(tab + 1)));
            char* end = nullptr;
            const double valence = std::strtod(value_str.c_str(), &end);
            if (word.empty() || end == value_str.c_str() || *end != '\0') {
                throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(lineno) +
                                                       ": bad valence '" + value_str + "'");
            }
            if (valence < -5.0 || valence > 5.0) {
                throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(lineno) +
                                                       ": valence outside [-5,5]");
            }
            if (valence == 0.0) continue;
            lex.valences_[word] = valence;
        }
        return lex;
    }

    void set(const std::string& word, double valence) { valences_[to_lower(word)] = valence; }

    const double* find(const std::string& word) const {
        const auto it = valences_.find(word);
        return it == valences_.end() ? nullptr : &it->second;
    }

    size_t size() const { return valences_.size(); }

  private:
    std::unordered_map<std::string, double> valences_;
};

struct SentimentScore {
    double polarity = 0.0; // [-1, 1]
    double strength = 0.0; // [0, 1]
    size_t matched = 0;
};

// Mean valence of matched word tokens, rescaled from [-5,5] to [-1,1].
// Strength additionally discounts texts with fewer than 3 matches so a
// single loaded word cannot max out the signal. No matches -> neutral.
inline SentimentScore analyze_sentiment(std::string_view text, const SentimentLexicon& lexicon) {
    double sum = 0.0, abs_sum = 0.0;
    size_t matched = 0;
    for (const Token& t : tokenize(text)) {
        if (t.kind != TokenKind::Word) continue;
        if (const double* v = lexicon.find(t.normalized)) {
            sum += *v;
            abs_sum += std::fabs(*v);
            ++matched;
        }
    }
    if (matched == 0) return {0.0, 0.0, 0};
    const double n = static_cast<double>(matched);
    SentimentScore s;
    s.matched = matched;
    s.polarity = std::clamp(sum / n / 5.0, -1.0, 1.0);
    s.strength = std::clamp(abs_sum / n / 5.0 * std::min(1.0, n / 3.0), 0.0, 1.0);
    return s;
}

// How violently the pen shakes, derived from sentiment strength.
struct JitterConfig {
    double sigma_min = 0.0; // px, at strength 0
    double sigma_max = 1.8; // px, at strength 1
    double bias_max = 1.0;  // steadying pull, strongest at strength 0
};

struct JitterParams {
    double sigma = 0.0;      // gaussian point noise, px
    double wobble_amp = 0.0; // sine wobble amplitude, px
    double bias = 0.0;       // inverse-control residue: calm hand = high bias
};

// Stronger feeling -> noisier line; the steadying bias fades as strength
// rises. Strength is clamped into [0,1] first.
inline JitterParams shakiness(double strength, const JitterConfig& config = {}) {
    const double s = std::clamp(strength, 0.0, 1.0);
    JitterParams p;
    p.sigma = config.sigma_min + s * (config.sigma_max - config.sigma_min);
    p.wobble_amp = p.sigma / 2.0;
    p.bias = config.bias_max * (1.0 - s);
    return p;
}

} // namespace scrawl

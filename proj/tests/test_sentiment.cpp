#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "scrawl/sentiment.hpp"

#include "support/matchers.hpp"
#include "support/test_util.hpp"

using namespace scrawl;
using Catch::Matchers::WithinAbs;
using testutil::HasErrorCode;

namespace {

SentimentLexicon grim_lexicon() {
    SentimentLexicon lex;
    lex.set("hatred", -4);
    lex.set("revenge", -3);
    return lex;
}

} // namespace

TEST_CASE("mean valence over matched words, rescaled to [-1,1]", "[sentiment]") {
    const SentimentScore s =
        analyze_sentiment("revenge, revenge, separation, hatred", grim_lexicon());
    CHECK(s.matched == 3);
    CHECK_THAT(s.polarity, WithinAbs(-10.0 / 3.0 / 5.0, 1e-12));
    CHECK_THAT(s.strength, WithinAbs(10.0 / 3.0 / 5.0, 1e-12));
}

TEST_CASE("few matches discount strength but not polarity", "[sentiment]") {
    SentimentLexicon lex;
    lex.set("gentle", 2);
    const SentimentScore s = analyze_sentiment("a gentle stab", lex);
    CHECK(s.matched == 1);
    CHECK_THAT(s.polarity, WithinAbs(0.4, 1e-12));
    // one match out of the three needed for full confidence
    CHECK_THAT(s.strength, WithinAbs(0.4 / 3.0, 1e-12));
}

TEST_CASE("no matched words means neutral", "[sentiment]") {
    const SentimentScore s = analyze_sentiment("the raw tape ran out", grim_lexicon());
    CHECK(s.matched == 0);
    CHECK(s.polarity == 0.0);
    CHECK(s.strength == 0.0);
}

TEST_CASE("matching ignores case and straightens curly apostrophes", "[sentiment]") {
    SentimentLexicon lex;
    lex.set("HATRED", -4);
    lex.set("don't", -1);
    CHECK(analyze_sentiment("Hatred.", lex).matched == 1);
    CHECK(analyze_sentiment("don’t", lex).matched == 1);
}

TEST_CASE("mixed valences can cancel polarity but not strength", "[sentiment]") {
    SentimentLexicon lex;
    lex.set("love", 4);
    lex.set("loss", -4);
    const SentimentScore s = analyze_sentiment("love and loss and love and loss", lex);
    CHECK(s.matched == 4);
    CHECK_THAT(s.polarity, WithinAbs(0.0, 1e-12));
    CHECK_THAT(s.strength, WithinAbs(0.8, 1e-12));
}

TEST_CASE("lexicon loads AFINN-style lines and drops zero valences", "[sentiment]") {
    testutil::TempDir tmp;
    const auto path = tmp.file("lex.tsv");
    testutil::write_file(path, "# comment\n"
                               "calm\t1\n"
                               "\n"
                               "  Fury \t -4 \n"
                               "filler\t0\n"
                               "dread\t-2.5\n");
    const SentimentLexicon lex = SentimentLexicon::load(path);
    CHECK(lex.size() == 3); // "filler" carries no signal
    REQUIRE(lex.find("fury") != nullptr);
    CHECK(*lex.find("fury") == -4.0);
    CHECK(*lex.find("dread") == -2.5);
    CHECK(lex.find("filler") == nullptr);
}

TEST_CASE("lexicon load failures", "[sentiment]") {
    testutil::TempDir tmp;
    CHECK_THROWS_MATCHES(SentimentLexicon::load(tmp.file("absent.tsv")), Error,
                         HasErrorCode(ErrorCode::FileMissing));

    const auto no_tab = tmp.file("no_tab.tsv");
    testutil::write_file(no_tab, "calm 1\n");
    CHECK_THROWS_MATCHES(SentimentLexicon::load(no_tab), Error,
                         HasErrorCode(ErrorCode::ParseError));

    const auto bad_value = tmp.file("bad_value.tsv");
    testutil::write_file(bad_value, "calm\tlots\n");
    CHECK_THROWS_MATCHES(SentimentLexicon::load(bad_value), Error,
                         HasErrorCode(ErrorCode::ParseError));

    const auto out_of_range = tmp.file("range.tsv");
    testutil::write_file(out_of_range, "calm\t1\nfury\t-6\n");
    try {
        SentimentLexicon::load(out_of_range);
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParseError);
        CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }
}

TEST_CASE("shipped sentiment lexicon is well formed", "[sentiment]") {
    const SentimentLexicon lex = SentimentLexicon::load(testutil::data_dir() / "sentiment.tsv");
    CHECK(lex.size() >= 100);
    REQUIRE(lex.find("hatred") != nullptr);
    CHECK(*lex.find("hatred") < 0);
    REQUIRE(lex.find("gentle") != nullptr);
    CHECK(*lex.find("gentle") > 0);
}

TEST_CASE("raising valence magnitudes never weakens strength", "[sentiment]") {
    std::mt19937_64 rng(20260815);
    std::uniform_int_distribution<int> word_count(1, 6);
    std::uniform_int_distribution<int> magnitude(1, 4);
    std::uniform_int_distribution<int> boost(0, 3);
    std::uniform_int_distribution<int> coin(0, 1);

    for (int trial = 0; trial < 100; ++trial) {
        const int n = word_count(rng);
        std::string text;
        SentimentLexicon weak, strong;
        for (int w = 0; w < n; ++w) {
            const std::string word = "w" + std::string(1, static_cast<char>('a' + w));
            const int sign = coin(rng) ? 1 : -1;
            const int v = sign * magnitude(rng);
            const int stronger =
                sign * std::min(5, std::abs(v) + boost(rng));
            weak.set(word, v);
            strong.set(word, stronger);
            if (!text.empty()) text += ' ';
            text += word;
        }
        // pad with unmatched words so the match-count discount stays fixed
        text += " filler noise";
        const SentimentScore before = analyze_sentiment(text, weak);
        const SentimentScore after = analyze_sentiment(text, strong);
        REQUIRE(before.matched == after.matched);
        CHECK(after.strength >= before.strength - 1e-12);
    }
}

TEST_CASE("shakiness interpolates sigma and fades the steadying bias", "[sentiment]") {
    const JitterConfig cfg{0.2, 1.8, 1.0};

    const JitterParams mid = shakiness(0.5, cfg);
    CHECK_THAT(mid.sigma, WithinAbs(1.0, 1e-12));
    CHECK_THAT(mid.wobble_amp, WithinAbs(0.5, 1e-12));
    CHECK_THAT(mid.bias, WithinAbs(0.5, 1e-12));

    const JitterParams calm = shakiness(0.0, cfg);
    CHECK(calm.sigma == cfg.sigma_min);
    CHECK(calm.wobble_amp == cfg.sigma_min / 2.0);
    CHECK(calm.bias == cfg.bias_max);

    const JitterParams frantic = shakiness(1.0, cfg);
    CHECK(frantic.sigma == cfg.sigma_max);
    CHECK(frantic.wobble_amp == cfg.sigma_max / 2.0);
    CHECK(frantic.bias == 0.0);
}

TEST_CASE("shakiness clamps strength into [0,1]", "[sentiment]") {
    const JitterConfig cfg{0.2, 1.8, 1.0};
    CHECK(shakiness(-3.0, cfg).sigma == shakiness(0.0, cfg).sigma);
    CHECK(shakiness(7.0, cfg).sigma == shakiness(1.0, cfg).sigma);
}

TEST_CASE("default jitter config writes a perfectly steady hand at strength 0",
          "[sentiment]") {
    const JitterParams p = shakiness(0.0);
    CHECK(p.sigma == 0.0);
    CHECK(p.wobble_amp == 0.0);
    CHECK(p.bias == 1.0);
}

TEST_CASE("shakiness is monotone in strength", "[sentiment]") {
    double last = -1.0;
    for (double s = 0.0; s <= 1.0; s += 0.1) {
        const JitterParams p = shakiness(s);
        CHECK(p.sigma > last);
        last = p.sigma;
    }
}
